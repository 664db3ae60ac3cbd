#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HOMROT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("homrot_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    CHECK(run("satellite --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "satellite.csv"));
    CHECK(fs::exists(dir / "satellite.meta.jsonl"));

    std::ofstream(dir / "bad.cfg") << "[geometry]\nturns = many\n";
    CHECK(run("satellite --config " + (dir / "bad.cfg").string() + " --out " + dir.string()) == 2);
    CHECK(run("satellite --config " + (dir / "missing.cfg").string()) == 2);
    CHECK(run("satellite --convention sideways") == 2);
    CHECK(run("satellite --preset orbit") == 2);
    CHECK(run("no-such-command") != 0);
}

TEST_CASE("config file drives the run") {
    const auto dir = scratch("config");
    std::ofstream(dir / "sat.cfg") << "[satellite]\nrevolutions = 10\n";
    REQUIRE(run("satellite --config " + (dir / "sat.cfg").string() + " --out " + dir.string()) == 0);
    const auto csv = slurp(dir / "satellite.csv");
    CHECK(csv.find("10") != std::string::npos);
}

TEST_CASE("seed changes the output, repeated runs do not") {
    const auto a = scratch("seed_a");
    const auto b = scratch("seed_b");
    const auto c = scratch("seed_c");
    REQUIRE(run("simulate-dip --seed 5 --out " + a.string()) == 0);
    REQUIRE(run("simulate-dip --seed 5 --out " + b.string()) == 0);
    REQUIRE(run("simulate-dip --seed 6 --out " + c.string()) == 0);
    CHECK(slurp(a / "dip_scan.csv") == slurp(b / "dip_scan.csv"));
    CHECK(slurp(a / "simulate-dip.meta.jsonl") == slurp(b / "simulate-dip.meta.jsonl"));
    CHECK(slurp(a / "dip_scan.csv") != slurp(c / "dip_scan.csv"));
}

TEST_CASE("thread count does not change rotation output") {
    const auto a = scratch("threads_1");
    const auto b = scratch("threads_4");
    REQUIRE(run("simulate-rotation --threads 1 --out " + a.string()) == 0);
    REQUIRE(run("simulate-rotation --threads 4 --out " + b.string()) == 0);
    for (const char* f : {"rotation_records.csv", "rotation_shifts.csv", "rotation_slope.csv"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
}
