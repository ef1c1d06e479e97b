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

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "xtalk/xtalk.hpp"

namespace fs = std::filesystem;
using namespace xtalk;

namespace {

struct Common {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t shots = 0;
  std::string device;
  std::string out;
};

DeviceModel device_or_throw(const std::string& path) {
  if (!fs::exists(path)) throw InputError("device file '" + path + "' does not exist");
  return load_device(path);
}

ShotMode shot_mode(const Common& c) {
  return c.shots ? ShotMode::sample(c.shots, c.seed) : ShotMode::analytic();
}

void check_omega_threshold(double omega, double threshold) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw InputError("--omega must lie in [0, 1]");
  if (!(threshold > 0.0)) throw InputError("--threshold must be > 0");
}

RBConfig rb_config(const Common& c, const std::vector<int>& lengths, int seeds) {
  RBConfig cfg;
  if (!lengths.empty()) cfg.lengths = lengths;
  cfg.num_seeds = seeds;
  cfg.seed = c.seed;
  cfg.mode = shot_mode(c);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return cfg;
}

void write(const fs::path& dir, const std::string& name, const std::string& text) {
  write_text(dir / name, text);
  std::cerr << "wrote " << (dir / name).string() << "\n";
}

CrosstalkReport characterize(const Common& c, const DeviceModel& d, const RBConfig& cfg) {
  auto report = characterize_device(d, cfg, c.workers);
  if (!c.out.empty()) {
    write(c.out, "crosstalk.json", to_json(report).dump(2) + "\n");
    write(c.out, "crosstalk_matrix.csv", to_csv_matrix(report));
  }
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crosstalk characterization and crosstalk-aware scheduling on simulated devices"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  app.add_option("--workers", common.workers, "Worker threads")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();

  auto add_device = [&](CLI::App* sub) {
    sub->add_option("--device", common.device, "Device JSON")->required();
  };
  auto add_shots = [&](CLI::App* sub) {
    sub->add_option("--shots", common.shots, "Sample this many shots (0 = exact probabilities)");
  };

  std::vector<int> lengths;
  int seeds = 5;
  auto add_rb = [&](CLI::App* sub) {
    sub->add_option("--lengths", lengths, "RB sequence lengths")->delimiter(',');
    sub->add_option("--seeds", seeds, "Random sequences per length")->capture_default_str();
  };

  auto* characterize_cmd = app.add_subcommand("characterize", "SRB crosstalk ratio matrix");
  add_device(characterize_cmd);
  add_rb(characterize_cmd);
  add_shots(characterize_cmd);
  characterize_cmd->add_option("--out", common.out, "Output directory")->required();

  int max_k = kMaxInjected;
  auto* inject_cmd = app.add_subcommand("inject", "CSWAP with injected simultaneous CX pairs");
  add_device(inject_cmd);
  add_shots(inject_cmd);
  inject_cmd->add_option("--max-k", max_k, "Largest number of injected pairs")
      ->capture_default_str();
  inject_cmd->add_option("--out", common.out, "Output directory")->required();

  std::string bench_dir;
  double omega = 0.5, threshold = 2.0;
  std::string source = "declared";
  auto* compare_cmd = app.add_subcommand("compare", "ParSched versus XtalkSched");
  add_device(compare_cmd);
  compare_cmd->add_option("--bench", bench_dir, "Benchmark directory")->required();
  compare_cmd->add_option("--omega", omega, "Crosstalk weight")->capture_default_str();
  compare_cmd->add_option("--threshold", threshold, "Crosstalk threshold")
      ->capture_default_str();
  compare_cmd->add_option("--crosstalk", source, "Ratios the scheduler uses")
      ->check(CLI::IsMember({"declared", "measured"}))
      ->capture_default_str();
  add_rb(compare_cmd);
  compare_cmd->add_option("--out", common.out, "Output directory")->required();

  std::string circuit_path, schedule = "par";
  auto* simulate_cmd = app.add_subcommand("simulate", "Schedule and simulate one circuit");
  add_device(simulate_cmd);
  add_shots(simulate_cmd);
  simulate_cmd->add_option("--circuit", circuit_path, "OpenQASM 2.0 file")->required();
  simulate_cmd->add_option("--schedule", schedule, "par or xtalk")
      ->check(CLI::IsMember({"par", "xtalk"}))
      ->capture_default_str();
  simulate_cmd->add_option("--omega", omega, "Crosstalk weight")->capture_default_str();
  simulate_cmd->add_option("--threshold", threshold, "Crosstalk threshold")
      ->capture_default_str();
  simulate_cmd->add_option("--out", common.out, "Output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const DeviceModel d = device_or_throw(common.device);

    if (characterize_cmd->parsed()) {
      const auto report = characterize(common, d, rb_config(common, lengths, seeds));
      std::cout << to_csv_matrix(report);
    } else if (inject_cmd->parsed()) {
      const auto r = run_injection(d, max_k, shot_mode(common), common.workers);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      write(common.out, "injection.csv", injection_csv(r));
      write(common.out, "injection.json", to_json(r).dump(2) + "\n");
      std::cout << injection_csv(r) << "worst relative drop: " << format_double(r.worst_drop)
                << "\n";
    } else if (compare_cmd->parsed()) {
      check_omega_threshold(omega, threshold);
      const auto benchmarks = load_benchmarks(bench_dir);
      DeviceModel model = d;
      if (source == "measured") {
        const auto report = characterize(common, d, rb_config(common, lengths, seeds));
        model = with_crosstalk(d, measured_crosstalk(report));
      }
      const auto records =
          run_compare(d, model, benchmarks, {omega, threshold}, common.workers);
      const std::string csv = emit_report(records, ReportFormat::kCsv);
      write(common.out, "comparison.csv", csv);
      write(common.out, "comparison.json", emit_report(records, ReportFormat::kJson));
      const auto s = summarize(records);
      std::cout << csv << "mean fidelity par " << format_double(s.fidelity_par) << " xtalk "
                << format_double(s.fidelity_xtalk) << "\nmean depth par "
                << format_double(s.depth_par) << " xtalk " << format_double(s.depth_xtalk)
                << "\n";
    } else if (simulate_cmd->parsed()) {
      check_omega_threshold(omega, threshold);
      const Circuit c = decompose_to_native(parse_qasm(read_text(circuit_path)));
      const auto sc = schedule == "par" ? par_sched(c, d) : xtalk_sched(c, d, {omega, threshold});
      const auto dist = run_scheduled(sc, {&d, shot_mode(common)});
      nlohmann::json j = {{"circuit", fs::path(circuit_path).filename().string()},
                          {"device", d.name},
                          {"schedule", schedule},
                          {"makespan_ns", sc.makespan},
                          {"gate_depth", gate_depth(sc)},
                          {"cost", to_json(schedule_cost(sc, d, omega))},
                          {"conflicts", find_conflicts(sc, d, threshold).size()},
                          {"outcome", to_json(dist)}};
      const std::string text = j.dump(2) + "\n";
      if (common.out.empty()) {
        std::cout << text;
      } else {
        write(common.out, "simulate.json", text);
        write(common.out, "schedule.qasm", emit_scheduled_qasm(sc));
      }
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
