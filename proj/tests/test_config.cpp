#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "qkdcoex/config.hpp"
#include "qkdcoex/scenario.hpp"

using namespace qkdcoex;

namespace {

const char* kMinimal = "[link]\n[plan]\n[receiver]\n[protocol]\n[security]\n";

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("empty file lists every missing section") {
    try {
        parse_config("");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        for (const char* name : {"[link]", "[plan]", "[receiver]", "[protocol]", "[security]"})
            CHECK(what.find(name) != std::string::npos);
    }
}

TEST_CASE("minimal sections produce the documented default scenario") {
    const auto parsed = parse_config(kMinimal);
    const Scenario& s = parsed.scenario;
    REQUIRE(s.link.spans.size() == 1);
    CHECK(s.link.spans[0].length_km == 95.5);
    CHECK(s.plan.channels.size() == 13);
    CHECK(s.plan.total_launch_dbm() == Catch::Approx(8.9).epsilon(1e-12));
    CHECK(s.link.rx_filters.size() == 4);
    CHECK(s.receiver.gate.window_ps == 100.0);
    CHECK(s.receiver.gate.period_ps == Catch::Approx(400.0));
    CHECK(s.protocol.mu1 == 0.5);
    CHECK(s.security.n_z_block == 8e6);
    // every defaulted key is echoed in the provenance log
    CHECK(parsed.provenance.size() > 20);
    bool found = false;
    for (const auto& line : parsed.provenance)
        if (line.find("security.block_size_bits = 8000000 (default)") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("channel grid spans the C band around the configured center") {
    const auto parsed = parse_config(kMinimal);
    const auto& ch = parsed.scenario.plan.channels;
    REQUIRE(ch.size() == 13);
    CHECK(ch[6].wavelength_nm == Catch::Approx(1550.1).margin(1e-9));
    // 100 GHz spacing is about 0.80 nm at 1550 nm
    CHECK(ch[7].wavelength_nm - ch[6].wavelength_nm == Catch::Approx(0.8008).margin(1e-3));
    for (const auto& c : ch) {
        CHECK(c.wavelength_nm > 1540.0);
        CHECK(c.wavelength_nm < 1560.0);
    }
}

TEST_CASE("unknown keys and sections are rejected by name") {
    CHECK_THROWS_WITH(parse_config(std::string(kMinimal) + "bogus_key = 1\n"),
                      Catch::Matchers::ContainsSubstring("bogus_key"));
    CHECK_THROWS_WITH(parse_config(std::string(kMinimal) + "[telemetry]\n"),
                      Catch::Matchers::ContainsSubstring("telemetry"));
    CHECK_THROWS_WITH(parse_config("[link]\nspan.1.speed_kmh = 3\n[plan]\n[receiver]\n"
                                   "[protocol]\n[security]\n"),
                      Catch::Matchers::ContainsSubstring("speed_kmh"));
}

TEST_CASE("malformed values are rejected with the key name") {
    CHECK_THROWS_WITH(parse_config(std::string(kMinimal) + "[calibration]\n"
                                                           "raman_rho_per_km_ghz = banana\n"),
                      Catch::Matchers::ContainsSubstring("raman_rho_per_km_ghz"));
    CHECK_THROWS_WITH(parse_config("[link]\nquantum_wavelength_nm\n"),
                      Catch::Matchers::ContainsSubstring("expected key = value"));
}

TEST_CASE("invariant violations carry diagnostics") {
    CHECK_THROWS_WITH(
        parse_config(std::string(kMinimal) + "[protocol]\nmu1 = 0.1\nmu2 = 0.4\n"),
        Catch::Matchers::ContainsSubstring("mu1 > mu2"));
    CHECK_THROWS_WITH(
        parse_config(std::string(kMinimal) + "[receiver]\nwindow_ps = 300\n"),
        Catch::Matchers::ContainsSubstring("window"));
    CHECK_THROWS_WITH(
        parse_config(std::string(kMinimal) + "[link]\nquantum_wavelength_nm = 800\n"),
        Catch::Matchers::ContainsSubstring("wavelength"));
}

TEST_CASE("overrides apply on top of the file") {
    const auto parsed =
        parse_config(kMinimal, {"plan.total_launch_power_dbm=5.9", "protocol.mu1=0.45"});
    CHECK(parsed.scenario.plan.total_launch_dbm() == Catch::Approx(5.9).epsilon(1e-12));
    CHECK(parsed.scenario.protocol.mu1 == 0.45);
    CHECK_THROWS_AS(parse_config(kMinimal, {"nonsense"}), ConfigError);
    CHECK_THROWS_AS(parse_config(kMinimal, {"mu1=0.4"}), ConfigError);
}

TEST_CASE("bundled 95.5 km configuration") {
    const auto parsed = parse_config(read_file(std::string(QKDCOEX_CONFIG_DIR) +
                                               "/paper_95p5km.cfg"));
    const Scenario& s = parsed.scenario;
    REQUIRE(s.link.spans.size() == 1);
    CHECK(s.link.spans[0].length_km == 95.5);
    CHECK(s.link.lumped.empty());
    CHECK(s.plan.channels.size() == 13);
    CHECK(s.plan.total_launch_dbm() == Catch::Approx(8.9).epsilon(1e-12));
    CHECK(s.link.rx_filters.size() == 4);
    CHECK(s.link.rx_filters[3].spectral_model);
    CHECK(parsed.targets.noise_skr_bps.has_value());
    CHECK(*parsed.targets.noise_skr_bps == 42.0);
    // the shipped file pins the calibrated values, nothing defaulted matters
    CHECK(s.raman.rho_per_km_ghz == Catch::Approx(2.4706e-14));
}

TEST_CASE("bundled 51.5 km configuration") {
    const auto parsed = parse_config(read_file(std::string(QKDCOEX_CONFIG_DIR) +
                                               "/paper_51p5km.cfg"));
    const Scenario& s = parsed.scenario;
    CHECK(s.link.total_length_km() == Catch::Approx(51.5));
    REQUIRE(s.link.lumped.size() == 3);
    double total_excess = 0.0;
    for (const auto& a : s.link.lumped) total_excess += a.loss_q_db;
    CHECK(total_excess == Catch::Approx(15.0));
    CHECK(s.plan.total_launch_dbm() == Catch::Approx(16.7).epsilon(1e-12));
    CHECK_FALSE(parsed.targets.noise_skr_bps.has_value());
}

TEST_CASE("serialized configuration round-trips to an equivalent scenario") {
    const auto original = parse_config(read_file(std::string(QKDCOEX_CONFIG_DIR) +
                                                 "/paper_95p5km.cfg"));
    const std::string text = serialize_config(original.scenario, original.targets);
    const auto reparsed = parse_config(text);
    // equivalence up to the full evaluation pipeline, bit-exact
    const auto a = evaluate(original.scenario);
    const auto b = evaluate(reparsed.scenario);
    CHECK(a.skr_bps == b.skr_bps);
    CHECK(a.qber_z == b.qber_z);
    CHECK(a.noise.total_w() == b.noise.total_w());
    CHECK(a.received_classical_dbm == b.received_classical_dbm);
    CHECK(reparsed.targets.baseline_skr_bps == original.targets.baseline_skr_bps);
    REQUIRE(reparsed.targets.noise_launch_dbm.has_value());
    CHECK(*reparsed.targets.noise_launch_dbm == *original.targets.noise_launch_dbm);
}

TEST_CASE("defaults file matches the built-in defaults exactly") {
    const auto written = parse_config(read_file(std::string(QKDCOEX_CONFIG_DIR) +
                                                "/defaults.cfg"));
    const auto builtin = parse_config(kMinimal);
    const auto a = evaluate(written.scenario);
    const auto b = evaluate(builtin.scenario);
    CHECK(a.skr_bps == b.skr_bps);
    CHECK(a.qber_z == b.qber_z);
    CHECK(a.received_classical_dbm == b.received_classical_dbm);
    CHECK(a.static_transmission_db == b.static_transmission_db);
    // nothing in the defaults file should fall back to a built-in default
    CHECK(written.provenance.empty());
}

TEST_CASE("comments and blank lines are ignored") {
    const auto parsed = parse_config("# leading comment\n\n[link]\n"
                                     "span.1.length_km = 50  # inline comment\n"
                                     "[plan]\n[receiver]\n[protocol]\n[security]\n");
    CHECK(parsed.scenario.link.spans[0].length_km == 50.0);
}
