#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LEAPFROG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("leapfrog_cli_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("period table with bounds columns") {
    TempDir dir("period");
    const int rc =
        run_cli("period --xi0-range 0.05:0.65:13 --y0 1 --out " + dir.path.string());
    CHECK(rc == 0);
    const auto text = slurp(dir.path / "period.csv");
    CHECK(text.rfind("xi0,T,omega0,domega,T_lower,T_upper,bounds_ok", 0) == 0);
    std::size_t rows = 0, satisfied = 0;
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        ++rows;
        if (line.size() >= 1 && line.back() == '1') ++satisfied;
    }
    CHECK(rows == 13);
    CHECK(satisfied == 13);
}

TEST_CASE("deterministic outputs for identical configs") {
    TempDir d1("det1"), d2("det2");
    CHECK(run_cli("period --xi0-range 0.1:0.6:6 --out " + d1.path.string()) == 0);
    CHECK(run_cli("period --xi0-range 0.1:0.6:6 --out " + d2.path.string()) == 0);
    CHECK(slurp(d1.path / "period.csv") == slurp(d2.path / "period.csv"));

    // manifests agree except for the timestamp and the output location
    auto m1 = nlohmann::json::parse(slurp(d1.path / "manifest_period.json"));
    auto m2 = nlohmann::json::parse(slurp(d2.path / "manifest_period.json"));
    CHECK(m1["config_hash"] == m2["config_hash"]);
    for (auto* m : {&m1, &m2}) {
        m->erase("timestamp");
        (*m)["config"].erase("out");
    }
    CHECK(m1 == m2);
}

TEST_CASE("orbit trajectory uses the documented header") {
    TempDir dir("orbit");
    CHECK(run_cli("orbit --xi0 0.5 --out " + dir.path.string()) == 0);
    const auto text = slurp(dir.path / "orbit.csv");
    CHECK(text.rfind("t,eta,xi,x0,H", 0) == 0);
}

TEST_CASE("monodromy report matches the published constant at small xi0") {
    TempDir dir("mono");
    CHECK(run_cli("monodromy --eps 0 --xi0 0.05 --out " + dir.path.string()) == 0);
    const auto rec = nlohmann::json::parse(slurp(dir.path / "monodromy.json"));
    CHECK(std::abs(rec["det_gap_re"].get<double>() - 0.121262) < 5e-3);
    CHECK(std::abs(rec["det_gap_im"].get<double>()) < 1e-9);
    CHECK(rec["structure_ok"].get<bool>());
}

TEST_CASE("validation failures exit with code 2") {
    TempDir dir("bad");
    CHECK(run_cli("orbit --xi0 0.9 --out " + dir.path.string()) == 2);
    CHECK(run_cli("period --xi0-range nonsense --out " + dir.path.string()) == 2);
}

TEST_CASE("config file round trip") {
    TempDir dir("cfg");
    const auto cfg_path = dir.path / "run.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "# reduced orbit config\n";
        cfg << "xi0 = 0.4\n";
        cfg << "y0 = 1.0\n";
        cfg << "out = " << (dir.path / "a").string() << "\n";
    }
    CHECK(run_cli("orbit --config " + cfg_path.string()) == 0);
    CHECK(run_cli("orbit --xi0 0.4 --y0 1.0 --out " + (dir.path / "b").string()) == 0);
    CHECK(slurp(dir.path / "a" / "orbit.csv") == slurp(dir.path / "b" / "orbit.csv"));
}

TEST_CASE("cantor summary reports a nonnegative measure") {
    TempDir dir("cantor");
    CHECK(run_cli("cantor --eps 0.1 --delta 0.3 --tau 1.5 --jmax 64 "
                  "--xi0-range 0.12:0.18:2 --out " +
                  dir.path.string()) == 0);
    const auto rec = nlohmann::json::parse(slurp(dir.path / "cantor.json"));
    CHECK(rec["summary"]["measure"].get<double>() >= 0.0);
    CHECK(rec["summary"]["measure"].get<double>() <= 0.06 + 1e-9);
}
