#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string dir = (fs::temp_directory_path() / "sconv-cli-test").string();
    fs::create_directories(dir);
    const std::string out_file = dir + "/last_output.txt";
    const std::string cmd =
        std::string(SCONV_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream buf;
    buf << in.rdbuf();
    return {WEXITSTATUS(raw), buf.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("list-scenarios exits cleanly and names the library") {
    const auto r = run_cli("list-scenarios");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("dyda") != std::string::npos);
    CHECK(r.output.find("dumbbell_neck") != std::string::npos);
}

TEST_CASE("scenario run writes manifest, tables and plot data") {
    const fs::path out = fs::temp_directory_path() / "sconv-cli-test" / "dyda_run";
    fs::remove_all(out);
    const auto r = run_cli("scenario dyda --s 0.5 --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("[PASS] constancy_relative_spread") != std::string::npos);
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "operator_values.csv"));
    CHECK(fs::exists(out / "operator_values.dat"));

    const std::string csv = slurp(out / "operator_values.csv");
    CHECK(csv.rfind("t,frac_lap", 0) == 0);  // self-describing header
}

TEST_CASE("manifest re-fed as config reproduces identical tables") {
    const fs::path base = fs::temp_directory_path() / "sconv-cli-test";
    const fs::path a = base / "rt_a";
    const fs::path b = base / "rt_b";
    fs::remove_all(a);
    fs::remove_all(b);
    auto r1 = run_cli("scenario bump_not_sconvex --out " + a.string());
    REQUIRE(r1.exit_code == 0);
    auto r2 = run_cli("scenario bump_not_sconvex --config " +
                      (a / "manifest.json").string() + " --out " + b.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(a / "segment_solution.csv") == slurp(b / "segment_solution.csv"));
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
}

TEST_CASE("config errors exit with status 2") {
    CHECK(run_cli("scenario nope").exit_code == 2);
    CHECK(run_cli("envelope --domain pentagon:3").exit_code == 2);
    CHECK(run_cli("envelope --g nonsense:1").exit_code == 2);
    CHECK(run_cli("dirichlet-1d --g bump_2_4 --set grid.n=abc").exit_code == 2);
    CHECK(run_cli("--config /does/not/exist.cfg envelope").exit_code == 2);
    CHECK(run_cli("bogus-command").exit_code == 2);
}

TEST_CASE("failed expected checks exit with status 1") {
    // u constant 1 inside [-1,1] with the bump datum outside is not
    // s-convex: the dip at t = 3 pulls segment solutions below 1
    const fs::path out = fs::temp_directory_path() / "sconv-cli-test" / "notconv";
    const auto r = run_cli(
        "check-convexity --domain interval:-1,1 --u constant:1 "
        "--g 'expr:clamp((x-3)^2,0,1)' --segments 40 --set plan.nodes=255 --out " +
        out.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("[FAIL] s_convex") != std::string::npos);
}

TEST_CASE("non-convergence exits with status 3") {
    const fs::path out = fs::temp_directory_path() / "sconv-cli-test" / "noconv";
    const auto r = run_cli(
        "envelope --domain ball:1.0 --g clamped_linear --dx 0.125 --directions 16 "
        "--set solver.max_sweeps=2 --out " + out.string());
    CHECK(r.exit_code == 3);
}

TEST_CASE("config file from SCONV_CONFIG_DIR is found") {
    const fs::path dir = fs::temp_directory_path() / "sconv-cli-test" / "cfgdir";
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "quick.cfg");
        cfg << "g = constant:0.25\nn = 63\n# comment\ngrid.n = 63\n";
    }
    const fs::path out = fs::temp_directory_path() / "sconv-cli-test" / "envrun";
    const std::string cmd = "SCONV_CONFIG_DIR=" + dir.string() + " " +
                            std::string(SCONV_CLI_PATH) +
                            " dirichlet-1d --config quick.cfg --out " + out.string() +
                            " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(raw) == 0);
    CHECK(fs::exists(out / "solution.csv"));
}
