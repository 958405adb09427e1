#include "ehl/config.hpp"

#include "ehl/util.hpp"

#include <doctest.h>

using namespace ehl;

TEST_CASE("struct defaults are a valid configuration") {
    DeviceConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.cap.capacitance == 47e-6);
    CHECK(cfg.piezo.sensitivity == 0.400);
    CHECK(cfg.cmp_mode_offset == doctest::Approx(0.2));
}

TEST_CASE("unit suffixes") {
    CHECK(parse_unit_value("47uF") == doctest::Approx(47e-6).epsilon(1e-12));
    CHECK(parse_unit_value("2.0V") == 2.0);
    CHECK(parse_unit_value("200uA") == doctest::Approx(200e-6).epsilon(1e-12));
    CHECK(parse_unit_value("20ms") == doctest::Approx(0.020).epsilon(1e-12));
    CHECK(parse_unit_value("400mV/g") == doctest::Approx(0.400).epsilon(1e-12));
    CHECK(parse_unit_value("5913lx") == 5913.0);
    CHECK(parse_unit_value("100Hz") == 100.0);
    CHECK(parse_unit_value("1.5") == 1.5);
    CHECK(parse_unit_value("3kB") == 3000.0);
    CHECK_THROWS_AS(parse_unit_value("42parsec"), ConfigError);
    CHECK_THROWS_AS(parse_unit_value("oops"), ConfigError);
}

TEST_CASE("config file parsing") {
    DeviceConfig cfg = parse_config(
        "# comment\n"
        "capacitance = 100uF\n"
        "i_led = 5mA\n"
        "seed = 7\n"
        "capacity_bytes = 1024\n");
    CHECK(cfg.cap.capacitance == doctest::Approx(100e-6).epsilon(1e-12));
    CHECK(cfg.budget.i_led == doctest::Approx(5e-3).epsilon(1e-12));
    CHECK(cfg.seed == 7);
    CHECK(cfg.capacity_bytes == 1024);
}

TEST_CASE("unknown keys are rejected") {
    try {
        parse_config("capacitanse = 47uF\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("capacitanse") != std::string::npos);
    }
}

TEST_CASE("invariant violations are configuration errors") {
    CHECK_THROWS_AS(parse_config("i_active = 1uA\n"), ConfigError); // < i_sleep
    CHECK_THROWS_AS(parse_config("cmp_power_rise = 1.9V\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("dt = 30ms\n"), ConfigError); // > t_record
    CHECK_THROWS_AS(parse_config("capacitance = 0F\n"), std::exception);
    CHECK_THROWS_AS(parse_config("v_cap_initial = 9V\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("no equals sign\n"), ParseError);
}

TEST_CASE("bundled config loads") {
    DeviceConfig cfg = load_config(std::string(EHL_DATA_DIR) + "/default_config.txt");
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.sc1.l_sat == 5913.0);
    CHECK(cfg.capacity_bytes == 4194304);
}
