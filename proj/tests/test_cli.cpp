#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdl/errors.hpp"
#include "sdl/experiments.hpp"
#include "sdl/flow.hpp"
#include "sdl/io.hpp"

using namespace sdl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path temp_dir(const char* leaf) {
    fs::path p = fs::temp_directory_path() / "sdl_test" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("key=value config files parse with comments and whitespace") {
    const fs::path p = temp_dir("kv") / "run.cfg";
    write_text_file(p.string(),
                    "# torus run\nexperiment = surface2d\nresolution=16\n\n"
                    "degree = 2   # winding\n");
    auto kv = read_kv_file(p.string());
    CHECK(kv.size() == 3);
    CHECK(kv["experiment"] == "surface2d");
    CHECK(kv["resolution"] == "16");
    CHECK(kv["degree"] == "2");

    write_text_file(p.string(), "no equals sign\n");
    CHECK_THROWS_AS(read_kv_file(p.string()), config_error);
    CHECK_THROWS_AS(read_kv_file("/nonexistent/path.cfg"), config_error);
}

TEST_CASE("config entries map onto the experiment config") {
    ExperimentConfig cfg;
    apply_config_entry(cfg, "experiment", "hopf");
    apply_config_entry(cfg, "resolution", "20");
    apply_config_entry(cfg, "t", "0.5");
    apply_config_entry(cfg, "seed", "99");
    apply_config_entry(cfg, "pi0p", "a1,a2");
    CHECK(cfg.experiment == "hopf");
    CHECK(cfg.resolution == 20);
    CHECK(cfg.t == 0.5);
    CHECK(cfg.seed == 99);
    CHECK(cfg.pi0p == "a1,a2");
    CHECK_THROWS_AS(apply_config_entry(cfg, "nonsense", "1"), config_error);
    CHECK_THROWS_AS(apply_config_entry(cfg, "resolution", "tiny"), config_error);
}

TEST_CASE("trajectory CSV has the documented columns") {
    FlowStep s0{0, 2.0, 1.0, 1.0, 0.5, 0.1, std::nan("")};
    FlowStep s1{1, 1.9, 0.9, 0.9, 0.4, 0.05, 3.0};
    const std::string csv = trajectory_csv({s0, s1});
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "step,E,F,total,H,residual_norm,dt");
    std::getline(is, line);
    CHECK(line.substr(0, 2) == "0,");
    // NaN Hopf column is left empty
    CHECK(line.find(",,") != std::string::npos);
    std::getline(is, line);
    CHECK(line.find("3,") != std::string::npos);
    CHECK(line.find("nan") == std::string::npos);
}

TEST_CASE("experiment runs are deterministic and write their artifacts") {
    const fs::path a = temp_dir("run_a"), b = temp_dir("run_b");
    ExperimentConfig cfg;
    cfg.experiment = "homogeneous";
    cfg.n = 4;
    cfg.pi0 = "a2";
    cfg.pi0p = "a2,a3";
    cfg.out_dir = a.string();
    CHECK(run_experiment(cfg) == kExitPass);
    cfg.out_dir = b.string();
    CHECK(run_experiment(cfg) == kExitPass);

    CHECK(fs::exists(a / "results.json"));
    CHECK(fs::exists(a / "manifest.json"));
    const std::string ra = slurp(a / "results.json");
    CHECK(ra == slurp(b / "results.json"));
    CHECK(ra.find("\"dim_m0\": 10") != std::string::npos);
    CHECK(ra.find("\"all_passed\": true") != std::string::npos);
}

TEST_CASE("unknown experiments are a configuration error") {
    ExperimentConfig cfg;
    cfg.experiment = "frobnicate";
    CHECK_THROWS_AS(run_experiment(cfg), config_error);
    cfg.experiment = "homogeneous";
    cfg.pi0 = "a7";  // out of range for su(3)
    cfg.out_dir = temp_dir("bad").string();
    CHECK_THROWS_AS(run_experiment(cfg), usage_error);
}

TEST_CASE("flow experiments emit a trajectory") {
    const fs::path out = temp_dir("run_flow");
    ExperimentConfig cfg;
    cfg.experiment = "flow";
    cfg.resolution = 12;
    cfg.seed = 21;
    cfg.out_dir = out.string();
    const int code = run_experiment(cfg);
    CHECK(fs::exists(out / "trajectory.csv"));
    CHECK(fs::exists(out / "results.json"));
    // 12^3 is below the 1%-accuracy resolution, so the energy check may fail,
    // but the run itself must complete and report through the results file
    CHECK((code == kExitPass || code == kExitAssertionFailure));
    const std::string csv = slurp(out / "trajectory.csv");
    CHECK(csv.substr(0, 5) == "step,");
}
