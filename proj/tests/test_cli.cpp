#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

// End-to-end checks against the installed binary; the build injects its
// location and the sample scenario directory.

namespace {

namespace fs = std::filesystem;

const std::string kCli = OOBEMC_CLI_PATH;
const fs::path kScenarios = OOBEMC_SCENARIOS_DIR;

struct CliResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  const fs::path capture = fs::temp_directory_path() / "oobemc_cli_capture.txt";
  const std::string command = "'" + kCli + "' " + args + " > '" + capture.string() +
                              "' 2>&1";
  const int status = std::system(command.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timestamps(const std::string& manifest) {
  std::string out;
  std::stringstream ss(manifest);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.find("_utc") != std::string::npos) continue;
    out += line + "\n";
  }
  return out;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("run produces the three output files with the pinned CSV header") {
  const fs::path out = fresh_dir("oobemc_cli_run");
  const CliResult r = run_cli("run --config '" + (kScenarios / "smoke.json").string() +
                              "' --out '" + out.string() + "'");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(out / "manifest.json"));
  REQUIRE(fs::exists(out / "trials.csv"));
  REQUIRE(fs::exists(out / "cdf.csv"));

  const std::string csv = read_file(out / "trials.csv");
  CHECK(csv.rfind("trial,gnb_dbm,rep_down_dbm,ue_dbm,rep_up_dbm,down_dbm,up_dbm,"
                  "combined_dbm,n_gnb,n_rep,n_ue_active\n",
                  0) == 0);
  CHECK(count_lines(csv) == 1 + 25);  // smoke.json pins 25 trials
  CHECK(csv.find("nan") == std::string::npos);
}

TEST_CASE("trials and seed overrides take effect") {
  const fs::path out = fresh_dir("oobemc_cli_override");
  const CliResult r =
      run_cli("run --config '" + (kScenarios / "smoke.json").string() +
              "' --trials 7 --seed 123 --out '" + out.string() + "'");
  REQUIRE(r.exit_code == 0);
  CHECK(count_lines(read_file(out / "trials.csv")) == 1 + 7);
  const std::string manifest = read_file(out / "manifest.json");
  CHECK(manifest.find("\"master_seed\": 123") != std::string::npos);
}

TEST_CASE("reruns are byte-identical apart from timestamps") {
  const fs::path out_a = fresh_dir("oobemc_cli_det_a");
  const fs::path out_b = fresh_dir("oobemc_cli_det_b");
  const std::string base =
      "run --config '" + (kScenarios / "smoke.json").string() + "' --out '";
  REQUIRE(run_cli(base + out_a.string() + "'").exit_code == 0);
  REQUIRE(run_cli(base + out_b.string() + "'").exit_code == 0);
  CHECK(read_file(out_a / "trials.csv") == read_file(out_b / "trials.csv"));
  CHECK(read_file(out_a / "cdf.csv") == read_file(out_b / "cdf.csv"));
  CHECK(strip_timestamps(read_file(out_a / "manifest.json")) ==
        strip_timestamps(read_file(out_b / "manifest.json")));
}

TEST_CASE("a thread cap from the environment does not change results") {
  const fs::path out_a = fresh_dir("oobemc_cli_thr_a");
  const fs::path out_b = fresh_dir("oobemc_cli_thr_b");
  const std::string config = (kScenarios / "smoke.json").string();
  REQUIRE(run_cli("run --config '" + config + "' --out '" + out_a.string() + "'")
              .exit_code == 0);
  const fs::path capture = fs::temp_directory_path() / "oobemc_cli_capture.txt";
  const std::string command = "OOBE_MC_THREADS=4 '" + kCli + "' run --config '" + config +
                              "' --out '" + out_b.string() + "' > '" + capture.string() +
                              "' 2>&1";
  REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);
  CHECK(read_file(out_a / "trials.csv") == read_file(out_b / "trials.csv"));
}

TEST_CASE("config errors exit with code 2") {
  const auto bad = fs::temp_directory_path() / "oobemc_cli_bad.json";
  std::ofstream(bad) << R"({"not_a_field": 1})";
  const CliResult unknown = run_cli("run --config '" + bad.string() + "'");
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.output.find("not_a_field") != std::string::npos);

  std::ofstream(bad) << R"({"trials": -5})";
  CHECK(run_cli("run --config '" + bad.string() + "'").exit_code == 2);

  std::ofstream(bad) << "{ broken";
  const CliResult syntax = run_cli("run --config '" + bad.string() + "'");
  CHECK(syntax.exit_code == 2);
  CHECK(syntax.output.find("line") != std::string::npos);

  CHECK(run_cli("run").exit_code == 2);  // missing required option
}

TEST_CASE("missing files exit with code 4") {
  CHECK(run_cli("run --config /no/such/file.json").exit_code == 4);
  CHECK(run_cli("compare --a /no/a.json --b /no/b.json --knob trials").exit_code == 4);
}

TEST_CASE("compare pairs runs and refuses mismatches with code 3") {
  const fs::path out_a = fresh_dir("oobemc_cli_cmp_a");
  const fs::path out_b = fresh_dir("oobemc_cli_cmp_b");
  const std::string config = (kScenarios / "smoke.json").string();
  REQUIRE(run_cli("run --config '" + config + "' --out '" + out_a.string() + "'")
              .exit_code == 0);
  REQUIRE(run_cli("run --config '" + config + "' --seed 77 --out '" + out_b.string() +
                  "'")
              .exit_code == 0);

  // Seed declared as the knob: comparable.
  const CliResult ok = run_cli("compare --a '" + (out_a / "manifest.json").string() +
                               "' --b '" + (out_b / "manifest.json").string() +
                               "' --knob master_seed");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("penalties_db") != std::string::npos);

  // Any other knob: the seed difference must be flagged.
  const CliResult bad = run_cli("compare --a '" + (out_a / "manifest.json").string() +
                                "' --b '" + (out_b / "manifest.json").string() +
                                "' --knob repeater_factor_f");
  CHECK(bad.exit_code == 3);
  CHECK(bad.output.find("master_seed") != std::string::npos);
}

TEST_CASE("self-compare reports zero penalties and the closed form") {
  const fs::path out = fresh_dir("oobemc_cli_self");
  const std::string config = (kScenarios / "smoke.json").string();
  REQUIRE(run_cli("run --config '" + config + "' --out '" + out.string() + "'")
              .exit_code == 0);
  const CliResult r = run_cli("compare --a '" + (out / "manifest.json").string() +
                              "' --b '" + (out / "manifest.json").string() +
                              "' --knob repeater_factor_f");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"closed_form_db\": 0.0") != std::string::npos);
}

TEST_CASE("sweep writes per-value runs and the penalty table") {
  const fs::path out = fresh_dir("oobemc_cli_sweep");
  const CliResult r = run_cli("sweep --config '" + (kScenarios / "smoke.json").string() +
                              "' --knob repeater_factor_f --values 0,1,2 --out '" +
                              out.string() + "'");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(out / "repeater_factor_f=0" / "manifest.json"));
  CHECK(fs::exists(out / "repeater_factor_f=1" / "manifest.json"));
  CHECK(fs::exists(out / "repeater_factor_f=2" / "manifest.json"));
  REQUIRE(fs::exists(out / "penalty_table.csv"));
  const std::string table = read_file(out / "penalty_table.csv");
  CHECK(table.rfind("knob,value,baseline,down_penalty_db,up_penalty_db,"
                    "combined_penalty_db,closed_form_db\n",
                    0) == 0);
  CHECK(count_lines(table) == 1 + 3);
  CHECK(table.find("repeater_factor_f,2,0") != std::string::npos);
}

TEST_CASE("the version flag identifies the artifact") {
  const CliResult r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("oobemc") != std::string::npos);
}

TEST_CASE("sample scenarios all load and run") {
  for (const char* name : {"default.json", "smoke.json", "repeater_penalty.json",
                           "fixed_wireless.json", "upstream_relay.json"}) {
    const fs::path out = fresh_dir(std::string("oobemc_cli_sample_") + name);
    const CliResult r = run_cli("run --config '" + (kScenarios / name).string() +
                                "' --trials 3 --out '" + out.string() + "'");
    CAPTURE(name, r.output);
    CHECK(r.exit_code == 0);
  }
}
