#include "iosim/scenario_io.hpp"

#include "iosim/errors.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

using namespace iosim;
namespace fs = std::filesystem;

namespace {

const std::string kMinimal = "[scenario]\n"
                             "frequency_hz = 3.6e9\n"
                             "[ios]\n"
                             "rows = 1\n"
                             "cols = 1\n"
                             "dx = 0.04\n"
                             "dy = 0.04\n"
                             "[antenna]\n"
                             "position = 0 0 1\n"
                             "gain = 1\n"
                             "pattern_exponent = 0\n"
                             "[user]\n"
                             "position = 0 0 -1\n"
                             "gain = 1\n"
                             "pattern_exponent = 0\n";

} // namespace

TEST_CASE("minimal scenario parses with defaults") {
    const Scenario scn = parse_scenario(kMinimal, "mini.cfg");
    CHECK(scn.element_count() == 1);
    CHECK(scn.direct_link == DirectLinkModel::Blocked);
    CHECK(scn.composition == GammaComposition::OffsetProduct);
    CHECK(scn.element.area_m2 == doctest::Approx(0.04 * 0.04));
    CHECK(scn.table == ElementResponseTable::builtin_default());
    CHECK(scn.wavelength() == doctest::Approx(kSpeedOfLight / 3.6e9));
}

TEST_CASE("semantic errors name the offender") {
    std::string bad = kMinimal;
    const auto pos = bad.find("position = 0 0 -1");
    bad.replace(pos, 17, "position = 0 0 +0");
    try {
        parse_scenario(bad, "bad.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("user 0") != std::string::npos);
        CHECK(std::string(e.what()).find("surface plane") != std::string::npos);
    }
}

TEST_CASE("missing frequency is reported") {
    const std::string no_freq = "[ios]\nrows = 1\ncols = 1\ndx = 0.04\ndy = 0.04\n"
                                "[antenna]\nposition = 0 0 1\n"
                                "[user]\nposition = 0 0 -1\n";
    try {
        parse_scenario(no_freq, "nofreq.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("frequency_hz required") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry file and line") {
    const std::string junk = "[scenario]\nfrequency_hz 3.6e9\n";
    try {
        parse_scenario(junk, "junk.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("junk.cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario("[nope]\nx = 1\n", "s.cfg"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("x = 1\n", "s.cfg"), ConfigError);
    CHECK_THROWS_AS(
        parse_scenario("[scenario]\nfrequency_hz = 3.6e9\nwhat = 1\n", "s.cfg"),
        ConfigError);
}

TEST_CASE("table override parameter replaces the default table") {
    const fs::path tmp = fs::temp_directory_path() / "iosim_test_table.csv";
    {
        std::ofstream out(tmp);
        out << "state,mode,theta_deg,psi_deg,beta\n"
            << "ON,reflect,0,-90,1\nON,reflect,20,-45,1\n"
            << "OFF,reflect,0,0,1\nOFF,reflect,20,30,1\n"
            << "ON,refract,0,10,1\nON,refract,20,20,1\n"
            << "OFF,refract,0,-10,1\nOFF,refract,20,-20,1\n";
    }
    const Scenario scn = parse_scenario(kMinimal, "mini.cfg", tmp);
    CHECK(scn.table.interpolate(ElementState::On, InteractionMode::Reflect, 0.0)
              .psi_deg == -90.0);
    fs::remove(tmp);
}

TEST_CASE("load_scenario honors IOS_TABLE_PATH") {
    const fs::path dir = fs::temp_directory_path() / "iosim_env_test";
    fs::create_directories(dir);
    const fs::path cfg = dir / "scn.cfg";
    const fs::path table = dir / "table.csv";
    {
        std::ofstream out(cfg);
        out << kMinimal;
        std::ofstream t(table);
        t << "state,mode,theta_deg,psi_deg,beta\n"
          << "ON,reflect,0,-1,1\nON,reflect,20,-2,1\n"
          << "OFF,reflect,0,1,1\nOFF,reflect,20,2,1\n"
          << "ON,refract,0,3,1\nON,refract,20,4,1\n"
          << "OFF,refract,0,-3,1\nOFF,refract,20,-4,1\n";
    }
    setenv("IOS_TABLE_PATH", table.c_str(), 1);
    const Scenario scn = load_scenario(cfg);
    unsetenv("IOS_TABLE_PATH");
    CHECK(scn.table.interpolate(ElementState::On, InteractionMode::Reflect, 0.0)
              .psi_deg == -1.0);
    fs::remove_all(dir);
}

TEST_CASE("an explicit [table] file wins over the environment override") {
    const fs::path dir = fs::temp_directory_path() / "iosim_tbl_prec";
    fs::create_directories(dir);
    const fs::path named = dir / "named.csv";
    {
        std::ofstream t(named);
        t << "state,mode,theta_deg,psi_deg,beta\n"
          << "ON,reflect,0,-7,1\nON,reflect,20,-8,1\n"
          << "OFF,reflect,0,7,1\nOFF,reflect,20,8,1\n"
          << "ON,refract,0,9,1\nON,refract,20,10,1\n"
          << "OFF,refract,0,-9,1\nOFF,refract,20,-10,1\n";
    }
    const std::string with_table =
        kMinimal + "[table]\nfile = " + named.string() + "\n";
    const Scenario scn = parse_scenario(with_table, "prec.cfg",
                                        fs::path("/nonexistent/ignored.csv"));
    CHECK(scn.table.interpolate(ElementState::On, InteractionMode::Reflect, 0.0)
              .psi_deg == -7.0);
    fs::remove_all(dir);
}

TEST_CASE("scenario writer round-trips through the parser") {
    std::mt19937_64 rng(321);
    for (int trial = 0; trial < 20; ++trial) {
        const Scenario scn = random_scenario(rng);
        const Scenario back = parse_scenario(write_scenario_cfg(scn), "<round>");
        CHECK(scenario_hash(back) == scenario_hash(scn));
    }
}

TEST_CASE("random scenarios validate and cover both sides") {
    std::mt19937_64 rng(777);
    bool saw_reflect_user = false;
    bool saw_refract_user = false;
    bool saw_blocked = false;
    bool saw_free_space = false;
    for (int trial = 0; trial < 100; ++trial) {
        const Scenario scn = random_scenario(rng);
        scn.validate(); // must not throw
        for (const auto& u : scn.users) {
            (u.position.z > 0.0 ? saw_reflect_user : saw_refract_user) = true;
        }
        (scn.direct_link == DirectLinkModel::Blocked ? saw_blocked : saw_free_space) =
            true;
        CHECK(scn.element_count() <= 64);
    }
    CHECK(saw_reflect_user);
    CHECK(saw_refract_user);
    CHECK(saw_blocked);
    CHECK(saw_free_space);
}

TEST_CASE("generator is deterministic for a fixed seed") {
    std::mt19937_64 a(2024), b(2024);
    for (int i = 0; i < 5; ++i) {
        CHECK(scenario_hash(random_scenario(a)) == scenario_hash(random_scenario(b)));
    }
}

TEST_CASE("bundled files parse and match the built-in table") {
    const fs::path data_dir = IOSIM_DATA_DIR;
    const ElementResponseTable t =
        ElementResponseTable::from_csv_file(data_dir / "ios_response_table.csv");
    CHECK(t == ElementResponseTable::builtin_default());
    const Scenario demo = load_scenario(data_dir / "demo_small.cfg");
    CHECK(demo.element_count() == 9);
    const Scenario chamber = load_scenario(data_dir / "s21_chamber.cfg");
    CHECK(chamber.element_count() == 320);
    CHECK(chamber.bs_antennas[0].position.z > 0.0);
}

TEST_CASE("missing scenario file is an IoError") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/not_there.cfg"), IoError);
}
