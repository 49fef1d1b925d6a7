#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qkdcoex/report.hpp"

namespace {

std::string config_path(const std::string& name) {
    return std::string(QKDCOEX_CONFIG_DIR) + "/" + name;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QKDCOEX_CLI_PATH) + " " + args + " 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string name) : path(std::move(name)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("exit code 0 on success") {
    TempFile out("cli_eval.csv");
    CHECK(run_cli("evaluate -c " + config_path("paper_95p5km.cfg") + " -o " + out.path) == 0);
    const std::string csv = read_file(out.path);
    CHECK(csv.rfind("launch_power_dbm,", 0) == 0);
}

TEST_CASE("exit code 2 on configuration errors") {
    CHECK(run_cli("evaluate -c /nonexistent.cfg") == 2);
    TempFile bad("cli_bad.cfg");
    {
        std::ofstream out(bad.path);
        out << "[link]\nbogus = 1\n[plan]\n[receiver]\n[protocol]\n[security]\n";
    }
    CHECK(run_cli("evaluate -c " + bad.path) == 2);
    CHECK(read_file("cli_stderr.txt").find("bogus") != std::string::npos);
    // an invalid override is a config error too
    CHECK(run_cli("evaluate -c " + config_path("paper_95p5km.cfg") + " --set protocol.mu1=2") ==
          2);
}

TEST_CASE("exit code 3 on model errors") {
    // a dead detector yields no Z detections at all: a model-level failure
    CHECK(run_cli("evaluate -c " + config_path("paper_95p5km.cfg") +
                  " --set receiver.detector_efficiency=0"
                  " --set receiver.dark_count_z_hz=0 --set receiver.dark_count_x_hz=0"
                  " --set calibration.raman_rho_per_km_ghz=0 -o cli_dead.csv") == 3);
    std::remove("cli_dead.csv");
}

TEST_CASE("exit code 4 when no key exists anywhere in the bracket") {
    CHECK(run_cli("boundary -c " + config_path("paper_95p5km.cfg") +
                  " --set protocol.e_opt_z=0.49 --set protocol.e_opt_x=0.49 -o cli_b.csv") == 4);
    std::remove("cli_b.csv");
}

TEST_CASE("single-point sweep equals evaluate byte for byte") {
    TempFile sweep_out("cli_sweep1.csv");
    TempFile eval_out("cli_eval1.csv");
    const std::string cfg = config_path("paper_95p5km.cfg");
    CHECK(run_cli("sweep -c " + cfg + " --from 8.9 --to 8.9 --step 1 -o " + sweep_out.path) == 0);
    CHECK(run_cli("evaluate -c " + cfg + " -o " + eval_out.path) == 0);
    CHECK(read_file(sweep_out.path) == read_file(eval_out.path));
}

TEST_CASE("ideal report carries the gain decomposition keys") {
    TempFile out("cli_ideal.json");
    CHECK(run_cli("ideal -c " + config_path("paper_95p5km.cfg") + " -f json -o " + out.path) == 0);
    const auto j = nlohmann::json::parse(read_file(out.path));
    CHECK(j.contains("total_gain_db"));
    CHECK(j.contains("matched_gain_db"));
    CHECK(j.contains("lossless_gain_db"));
    CHECK(j.contains("snspd_gain_db"));
    CHECK(j["baseline"]["has_key"].get<bool>());
}

TEST_CASE("compare merges the literature table with the simulated point") {
    TempFile out("cli_compare.csv");
    CHECK(run_cli("compare -c " + config_path("paper_51p5km.cfg") + " --literature " +
                  std::string(QKDCOEX_DATA_DIR) + "/literature_comparison.csv -o " + out.path) == 0);
    const std::string csv = read_file(out.path);
    CHECK(csv.find("discrete,O,51.5,34.1,false,16.7,170,yes,this system") != std::string::npos);
    CHECK(csv.find("simulated") != std::string::npos);
    // constant column count across all rows
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    const auto cols = qkdcoex::split_csv_line(line).size();
    while (std::getline(in, line)) CHECK(qkdcoex::split_csv_line(line).size() == cols);
}

TEST_CASE("calibrate writes an updated calibrated configuration") {
    TempFile report("cli_cal.json");
    TempFile written("cli_calibrated.cfg");
    const int rc = run_cli("calibrate -c " + config_path("paper_95p5km.cfg") + " -f json -o " +
                           report.path + " --write-config " + written.path);
    CHECK(rc == 0);
    const auto j = nlohmann::json::parse(read_file(report.path));
    CHECK(j["converged"].get<bool>());
    CHECK(j["fitted_rho_per_km_ghz"].get<double>() > 0.0);
    // the written config parses and evaluates
    TempFile eval_out("cli_eval2.csv");
    CHECK(run_cli("evaluate -c " + written.path + " -o " + eval_out.path) == 0);
}

TEST_CASE("stochastic evaluate is seed-deterministic") {
    const std::string cfg = config_path("paper_95p5km.cfg");
    TempFile a("cli_st_a.csv");
    TempFile b("cli_st_b.csv");
    TempFile c("cli_st_c.csv");
    CHECK(run_cli("evaluate --stochastic --seed 11 -c " + cfg + " -o " + a.path) == 0);
    CHECK(run_cli("evaluate --stochastic --seed 11 -c " + cfg + " -o " + b.path) == 0);
    CHECK(run_cli("evaluate --stochastic --seed 12 -c " + cfg + " -o " + c.path) == 0);
    CHECK(read_file(a.path) == read_file(b.path));
    CHECK(read_file(a.path) != read_file(c.path));
}

TEST_CASE("verbose mode echoes defaulted keys") {
    TempFile minimal("cli_minimal.cfg");
    {
        std::ofstream out(minimal.path);
        out << "[link]\n[plan]\n[receiver]\n[protocol]\n[security]\n";
    }
    TempFile out("cli_eval3.csv");
    CHECK(run_cli("evaluate -c " + minimal.path + " -v -o " + out.path) == 0);
    CHECK(read_file("cli_stderr.txt").find("default") != std::string::npos);
}
