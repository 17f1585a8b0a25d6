#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sharpwave/errors.hpp"
#include "sharpwave/scenario.hpp"
#include "sharpwave/tasks.hpp"

using namespace sharpwave;
namespace fs = std::filesystem;

namespace {
fs::path sandbox() {
    const fs::path p = fs::temp_directory_path() / "sharpwave_frontctl_tests";
    fs::create_directories(p);
    return p;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = sandbox() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* quick_scenario = R"(# comment line
[kinetics]
family = fisher
p = 1
capacity = 1

[wave]
m = 2
D = 1
r = 0          ; inline comment

[solver]
tol = 1e-5
t_max = 150
)";
}  // namespace

TEST_CASE("scenario parser: sections, comments, typed getters") {
    const auto path = write_file("parse.ini", R"(
; leading comment
[kinetics]
family = fisher
p = 2.5

[solver]
tol = 1e-6
polish = no
flags = 1, 2.5 7
)");
    const auto sc = load_scenario(path.string());
    CHECK(sc.has_section("kinetics"));
    CHECK_FALSE(sc.has_section("pde"));
    CHECK(sc.require_str("kinetics", "family") == "fisher");
    CHECK(sc.require_num("kinetics", "p") == 2.5);
    CHECK(sc.get_num("solver", "tol", 0.0) == 1e-6);
    CHECK(sc.get_num("solver", "missing", 7.0) == 7.0);
    CHECK_FALSE(sc.get_bool("solver", "polish", true));
    CHECK(sc.get_bool("solver", "absent", true));
    const auto flags = sc.get_list("solver", "flags");
    REQUIRE(flags.size() == 3);
    CHECK(flags[0] == 1.0);
    CHECK(flags[1] == 2.5);
    CHECK(flags[2] == 7.0);
}

TEST_CASE("scenario parser: errors carry file and line context") {
    const auto bad = write_file("bad.ini", "[kinetics]\nfamily fisher\n");
    CHECK_THROWS_AS(load_scenario(bad.string()), invalid_params);
    try {
        load_scenario(bad.string());
    } catch (const invalid_params& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.ini") != std::string::npos);
        CHECK(msg.find("2") != std::string::npos);
    }
    const auto nosec = write_file("nosec.ini", "family = fisher\n");
    CHECK_THROWS_AS(load_scenario(nosec.string()), invalid_params);
    CHECK_THROWS_AS(load_scenario((sandbox() / "does_not_exist.ini").string()), invalid_params);
    const auto badnum = write_file("badnum.ini", "[wave]\nm = fast\n");
    const auto sc = load_scenario(badnum.string());
    CHECK_THROWS_AS(sc.require_num("wave", "m"), invalid_params);
}

TEST_CASE("run_task maps bad inputs to exit code 2") {
    const auto path = write_file("quick.ini", quick_scenario);
    CHECK(run_task("no-such-task", path.string(), (sandbox() / "o1").string(), 1) == 2);
    CHECK(run_task("check", (sandbox() / "missing.ini").string(), (sandbox() / "o2").string(),
                   1) == 2);
    // shoot requires a wave speed c
    CHECK(run_task("shoot", path.string(), (sandbox() / "o3").string(), 1) == 2);
    CHECK(run_task("check", path.string(), (sandbox() / "o4").string(), 0) == 2);
}

TEST_CASE("check task writes the hypothesis report") {
    const auto path = write_file("quick.ini", quick_scenario);
    const fs::path out = sandbox() / "check_out";
    CHECK(run_task("check", path.string(), out.string(), 1) == 0);
    const std::string j = slurp(out / "hypotheses.json");
    CHECK(j.find("\"pass\": true") != std::string::npos);
    CHECK(j.find("\"family\": \"fisher\"") != std::string::npos);
}

TEST_CASE("find-speed produces outputs and is byte-deterministic") {
    const auto path = write_file("quick.ini", quick_scenario);
    const fs::path o1 = sandbox() / "speed_a";
    const fs::path o2 = sandbox() / "speed_b";
    CHECK(run_task("find-speed", path.string(), o1.string(), 1) == 0);
    CHECK(run_task("find-speed", path.string(), o2.string(), 1) == 0);
    for (const char* name : {"speed.json", "profile.csv", "profile.svg"}) {
        CHECK(fs::exists(o1 / name));
        CHECK(slurp(o1 / name) == slurp(o2 / name));
    }
    const std::string j = slurp(o1 / "speed.json");
    CHECK(j.find("\"c_star\"") != std::string::npos);
    CHECK(j.find("\"config\"") != std::string::npos);
    CHECK(j.find("\"scenario\"") != std::string::npos);
}

TEST_CASE("shoot task runs with an explicit speed") {
    const auto path = write_file("shoot.ini", R"(
[kinetics]
family = fisher

[wave]
m = 2
c = 1.2

[solver]
t_max = 150
)");
    const fs::path out = sandbox() / "shoot_out";
    CHECK(run_task("shoot", path.string(), out.string(), 1) == 0);
    const std::string j = slurp(out / "shoot.json");
    CHECK(j.find("GrewPastK") != std::string::npos);
    CHECK(fs::exists(out / "profile.csv"));
    // profile CSV has the documented 4 columns
    std::ifstream csv(out / "profile.csv");
    std::string header;
    REQUIRE(std::getline(csv, header));
    CHECK(header == "t,phi,psi,segment");
}

TEST_CASE("simulate task writes the front track") {
    const auto path = write_file("sim.ini", R"(
[kinetics]
family = fisher

[wave]
m = 2

[pde]
L = 20
dx = 0.1
T = 4
init_width = 6
)");
    const fs::path out = sandbox() / "sim_out";
    CHECK(run_task("simulate", path.string(), out.string(), 1) == 0);
    CHECK(fs::exists(out / "front.csv"));
    CHECK(fs::exists(out / "front.svg"));
    const std::string j = slurp(out / "sim.json");
    CHECK(j.find("\"region_preserved\": true") != std::string::npos);
}

TEST_CASE("sweep task validates its axes") {
    const auto no_axis = write_file("sweep0.ini", R"(
[kinetics]
family = fisher
[wave]
m = 2
[sweep]
)");
    CHECK(run_task("sweep", no_axis.string(), (sandbox() / "sw0").string(), 1) == 2);

    const auto no_zero = write_file("sweep1.ini", R"(
[kinetics]
family = fisher
[wave]
m = 2
[sweep]
r_list = 0.25, 0.5
)");
    CHECK(run_task("sweep", no_zero.string(), (sandbox() / "sw1").string(), 1) == 2);

    const auto three = write_file("sweep3.ini", R"(
[kinetics]
family = fisher
[wave]
m = 2
[sweep]
r_list = 0, 0.5
m_list = 1.5, 2
D_list = 1, 2
)");
    CHECK(run_task("sweep", three.string(), (sandbox() / "sw3").string(), 1) == 2);
}

TEST_CASE("sweep task solves a small delay grid with the inequality column") {
    const auto path = write_file("sweep.ini", R"(
[kinetics]
family = fisher

[wave]
m = 2
D = 1

[solver]
tol = 1e-4
polish = false

[sweep]
r_list = 0, 0.5
)");
    const fs::path out = sandbox() / "sweep_out";
    CHECK(run_task("sweep", path.string(), out.string(), 2) == 0);
    std::ifstream csv(out / "sweep.csv");
    std::string header;
    REQUIRE(std::getline(csv, header));
    CHECK(header == "r,m,D,c_star,c_lo,c_hi,iterations,certified,delay_ok,failed");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
    const std::string j = slurp(out / "sweep.json");
    CHECK(j.find("\"delay_inequality_ok\": true") != std::string::npos);
    CHECK(fs::exists(out / "sweep.svg"));
}

TEST_CASE("variational task reports the no-delay supremum") {
    const auto path = write_file("var.ini", R"(
[kinetics]
family = fisher

[wave]
m = 2
r = 0

[variational]
family = tilted_power
budget = 200
)");
    const fs::path out = sandbox() / "var_out";
    CHECK(run_task("variational", path.string(), out.string(), 1) == 0);
    CHECK(fs::exists(out / "best_g.csv"));
    const std::string j = slurp(out / "variational.json");
    CHECK(j.find("\"value\"") != std::string::npos);
}
