// Copyright 2026 The xtalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "xtalk/circuit.hpp"
#include "xtalk/clifford.hpp"
#include "xtalk/dag.hpp"
#include "xtalk/decompose.hpp"
#include "xtalk/density_matrix.hpp"
#include "xtalk/device.hpp"
#include "xtalk/error.hpp"
#include "xtalk/experiments.hpp"
#include "xtalk/qasm.hpp"
#include "xtalk/rb.hpp"
#include "xtalk/schedule.hpp"
#include "xtalk/simulate.hpp"
#include "xtalk/util.hpp"
