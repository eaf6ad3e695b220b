#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path()
                   / ("sigsolve_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CmdResult run_cli(const std::string& args) {
    fs::path out = scratch_dir() / "stdout.txt";
    fs::path err = scratch_dir() / "stderr.txt";
    std::string cmd = std::string(SIGSOLVE_CLI_PATH) + " " + args + " > "
                    + out.string() + " 2> " + err.string();
    int status = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string symq_config() {
    return (fs::path(SIGSOLVE_CONFIG_DIR) / "symq.ini").string();
}

}  // namespace

TEST_CASE("solve writes the cutoff summary") {
    fs::path out = scratch_dir() / "solve";
    CmdResult r = run_cli("solve --config " + symq_config() + " --out "
                          + out.string());
    REQUIRE(r.exit_code == 0);
    json cut = json::parse(slurp(out / "cutoffs.json"));
    CHECK(std::abs(double(cut["theta_2"]) - 0.25) <= 1e-6);
    CHECK(std::abs(double(cut["theta_1"]) + 0.25) <= 1e-6);
    CHECK(fs::exists(out / "swing.csv"));
    CHECK(fs::exists(out / "strategies.csv"));
    json man = json::parse(slurp(out / "manifest_solve.json"));
    CHECK(man["command"] == "solve");
    CHECK(man["config_hash"] == cut["manifest"]);

    SUBCASE("verify reuses the solved table and passes") {
        CmdResult v = run_cli("verify --config " + symq_config() + " --out "
                              + out.string() + " --grid-n 128");
        CHECK(v.exit_code == 0);
        json rep = json::parse(slurp(out / "verify.json"));
        CHECK(rep["pass"] == true);
        CHECK(rep["dm_violations"] == 0);
    }
}

TEST_CASE("invalid configs exit with the config error code") {
    fs::path bad = scratch_dir() / "bad_k.ini";
    {
        std::ifstream in(symq_config());
        std::ofstream f(bad);
        std::string line;
        while (std::getline(in, line))
            f << (line.rfind("k_1", 0) == 0 ? "k_1 = -1" : line) << "\n";
    }
    CmdResult r = run_cli("solve --config " + bad.string() + " --out "
                          + (scratch_dir() / "bad_out").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("k_1 must be positive") != std::string::npos);

    fs::path small = scratch_dir() / "small_theta.ini";
    {
        std::ifstream in(symq_config());
        std::ofstream f(small);
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("theta_min", 0) == 0) line = "theta_min = -0.6";
            if (line.rfind("theta_max", 0) == 0) line = "theta_max = 0.6";
            f << line << "\n";
        }
    }
    CmdResult s = run_cli("solve --config " + small.string() + " --out "
                          + (scratch_dir() / "small_out").string());
    CHECK(s.exit_code == 2);
    CHECK(s.err.find("conflict interval") != std::string::npos);

    CmdResult m = run_cli("solve --config " + (scratch_dir() / "nope.ini").string()
                          + " --out " + (scratch_dir() / "nope_out").string());
    CHECK(m.exit_code == 2);
}

TEST_CASE("simulation output is reproducible") {
    fs::path a = scratch_dir() / "sim_a";
    fs::path b = scratch_dir() / "sim_b";
    std::string common = "simulate --config " + symq_config()
                       + " --seed 7 --draws 20000 --grid-n 65 ";
    CmdResult ra = run_cli(common + "--out " + a.string());
    CmdResult rb = run_cli(common + "--out " + b.string() + " --threads 2");
    REQUIRE(ra.exit_code == 0);
    REQUIRE(rb.exit_code == 0);
    CHECK(slurp(a / "simulate.csv") == slurp(b / "simulate.csv"));

    CmdResult rc = run_cli("simulate --config " + symq_config()
                           + " --seed 8 --draws 20000 --grid-n 65 --out "
                           + a.string());
    REQUIRE(rc.exit_code == 0);
    CHECK(slurp(a / "simulate.csv") != slurp(b / "simulate.csv"));
}

TEST_CASE("welfare frontier grid") {
    fs::path out = scratch_dir() / "welfare";
    CmdResult r = run_cli("welfare --config " + symq_config()
                          + " --q-grid 0:1:0.05 --grid-n 65 --out "
                          + out.string());
    REQUIRE(r.exit_code == 0);
    std::istringstream csv(slurp(out / "welfare_frontier.csv"));
    std::string line;
    int rows = 0;
    std::getline(csv, line);  // manifest comment
    std::getline(csv, line);  // header
    CHECK(line == "q,noise_sd,w_inq,beats_adversarial");
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 21);
    json w = json::parse(slurp(out / "welfare.json"));
    CHECK(std::abs(double(w["w_fi"]) - 0.25) <= 1e-9);
    CHECK(double(w["q_star"]) < 1.0);
    CHECK(double(w["w_de"]) <= double(w["w_bar"]) + 1e-6);
}

TEST_CASE("beliefs command reports the posterior") {
    CmdResult r = run_cli("beliefs --config " + symq_config()
                          + " --r1 0.3 --r2 0.1 --grid-n 65 --out "
                          + (scratch_dir() / "beliefs").string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["action"] == "plus");
    CHECK(j["on_path"] == true);
    CHECK(std::abs(double(j["masses"][0]["theta"]) - 0.1) <= 1e-9);
}
