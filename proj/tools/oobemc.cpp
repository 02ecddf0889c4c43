#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oobemc/scenario_io.hpp"

// oobemc CLI: run one scenario, compare two finished runs, or sweep a
// scenario knob across values. Exit codes: 0 success, 2 config error,
// 3 pairing error, 4 I/O error.

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPairing = 3;
constexpr int kExitIo = 4;

int env_thread_cap() {
  const char* raw = std::getenv("OOBE_MC_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 0) {
    throw oobemc::ConfigError(std::string("OOBE_MC_THREADS must be a non-negative "
                                          "integer, got '") + raw + "'");
  }
  return static_cast<int>(v);
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return std::string(buf);
}

oobemc::Scenario scenario_with_knob(const oobemc::Scenario& base, const std::string& knob,
                                    double value) {
  oobemc::json j = oobemc::scenario_to_json(base);
  oobemc::json* node = oobemc::detail::navigate(j, knob);
  if (node == nullptr) {
    throw oobemc::ConfigError("knob '" + knob + "' is not a scenario field");
  }
  if (!node->is_number()) {
    throw oobemc::ConfigError("knob '" + knob + "' is not numeric; sweep only varies "
                              "numeric fields");
  }
  if (node->is_number_integer() && value == std::floor(value)) {
    *node = static_cast<std::int64_t>(value);
  } else {
    *node = value;
  }
  return oobemc::scenario_from_json(j);
}

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed,
            std::optional<int> trials, const std::string& out_dir) {
  oobemc::Scenario s = oobemc::parse_scenario(config);
  if (seed.has_value()) s.master_seed = *seed;
  if (trials.has_value()) s.trials = *trials;
  s.validate();

  const oobemc::RunOutput out = oobemc::run_scenario(s, env_thread_cap());
  oobemc::write_run_outputs(out.manifest, out.results, out_dir);

  const oobemc::MetricStatistics& combined =
      out.manifest.statistics.metric(oobemc::Metric::kCombined);
  std::cout << "wrote " << out_dir << "/manifest.json, trials.csv, cdf.csv\n"
            << "trials: " << out.manifest.statistics.trials
            << "  combined mean: " << oobemc::format_dbm(combined.mean_dbm) << " dBm\n";
  return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                const std::string& knob) {
  const oobemc::ManifestView a = oobemc::load_manifest(path_a);
  const oobemc::ManifestView b = oobemc::load_manifest(path_b);
  const oobemc::json report = oobemc::compare_manifests(a, b, knob);
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& knob,
              const std::vector<double>& values, const std::string& out_dir) {
  if (values.empty()) {
    throw oobemc::ConfigError("sweep requires at least one value");
  }
  const oobemc::Scenario base = oobemc::parse_scenario(config);
  const int threads = env_thread_cap();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw oobemc::IoError("cannot create output directory " + out_dir + ": " +
                          ec.message());
  }

  // First value is the baseline every other run is compared against.
  std::vector<oobemc::ManifestView> views;
  for (double value : values) {
    const oobemc::Scenario s = scenario_with_knob(base, knob, value);
    const oobemc::RunOutput out = oobemc::run_scenario(s, threads);
    const std::filesystem::path run_dir =
        std::filesystem::path(out_dir) / (knob + "=" + format_value(value));
    oobemc::write_run_outputs(out.manifest, out.results, run_dir);
    views.push_back(oobemc::manifest_view_from_json(
        oobemc::manifest_to_json(out.manifest), run_dir.string()));
    std::cout << knob << "=" << format_value(value) << " -> " << run_dir.string() << "\n";
  }

  std::string table = "knob,value,baseline,down_penalty_db,up_penalty_db,"
                      "combined_penalty_db,closed_form_db\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const oobemc::json report = oobemc::compare_manifests(views[i], views[0], knob);
    const auto penalty = [&](const char* metric) {
      const oobemc::json& v = report.at("penalties_db").at(metric);
      return v.is_string() ? v.get<std::string>() : oobemc::format_dbm(v.get<double>());
    };
    table += knob + ',' + format_value(values[i]) + ',' + format_value(values[0]) + ',' +
             penalty("downstream") + ',' + penalty("upstream") + ',' +
             penalty("combined") + ',';
    if (report.contains("closed_form_db")) {
      table += oobemc::format_dbm(report.at("closed_form_db").get<double>());
    }
    table += '\n';
  }
  const std::filesystem::path table_path =
      std::filesystem::path(out_dir) / "penalty_table.csv";
  oobemc::write_text_file(table_path, table);
  std::cout << table << "wrote " << table_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo aggregate out-of-band emission simulator"};
  app.set_version_flag("--version", std::string(oobemc::kArtifactName) + " " +
                                        oobemc::kArtifactVersion);
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out_dir = "out";

  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", config, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Override master seed");
  run->add_option("--trials", trials, "Override trial count");
  run->add_option("--out", out_dir, "Output directory (default: out)");

  std::string path_a, path_b, knob;
  CLI::App* compare = app.add_subcommand("compare", "Paired penalty report of two runs");
  compare->add_option("--a", path_a, "Manifest A (the 'with' run)")->required();
  compare->add_option("--b", path_b, "Manifest B (the baseline)")->required();
  compare->add_option("--knob", knob, "Scenario field allowed to differ")->required();

  std::string sweep_config, sweep_knob, sweep_out = "out";
  std::vector<double> sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a knob across values");
  sweep->add_option("--config", sweep_config, "Scenario JSON file")->required();
  sweep->add_option("--knob", sweep_knob, "Numeric scenario field to vary")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values; first is baseline")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "Output directory (default: out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config, seed, trials, out_dir);
    if (compare->parsed()) return cmd_compare(path_a, path_b, knob);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_knob, sweep_values, sweep_out);
  } catch (const oobemc::PairingError& e) {
    std::cerr << "pairing error: " << e.what() << "\n";
    return kExitPairing;
  } catch (const oobemc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const oobemc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
