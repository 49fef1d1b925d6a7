#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qkdcoex/config.hpp"
#include "qkdcoex/link.hpp"

using namespace qkdcoex;

namespace {

LinkTopology paper_link_95() {
    LinkTopology link;
    link.spans.push_back({95.5, 0.3644, 0.21});
    link.tx_filters = default_tx_filters();
    link.rx_filters = default_rx_filters();
    return link;
}

LinkTopology paper_link_51() {
    LinkTopology link;
    link.spans.push_back({51.5, 0.3709, 0.2439});
    for (double pos : {12.875, 25.75, 38.625}) link.lumped.push_back({pos, 5.0, 5.0});
    link.tx_filters = default_tx_filters();
    link.rx_filters = default_rx_filters();
    return link;
}

} // namespace

TEST_CASE("full-span quantum transmittance matches the link attenuation") {
    const auto link = paper_link_95();
    const double t = transmittance(link, 1310.0, 0.0, 95.5);
    CHECK(linear_to_db(t) == Catch::Approx(95.5 * 0.3644).epsilon(1e-12));
    CHECK(linear_to_db(t) == Catch::Approx(34.8).margin(1e-3));
}

TEST_CASE("lumped attenuators add to the span attenuation") {
    const auto link = paper_link_51();
    const double t = transmittance(link, 1310.0, 0.0, 51.5);
    CHECK(linear_to_db(t) == Catch::Approx(51.5 * 0.3709 + 15.0).epsilon(1e-12));
}

TEST_CASE("zero-length interval has unit transmittance") {
    const auto link = paper_link_95();
    CHECK(transmittance(link, 1310.0, 40.0, 40.0) == 1.0);
}

TEST_CASE("transmittance is multiplicative over concatenated intervals") {
    const auto link = paper_link_51();
    for (double mid : {5.0, 12.875, 20.0, 25.75, 40.0, 51.5}) {
        const double t_ab = link.fiber_transmittance(Band::quantum, 0.0, mid);
        const double t_bc = link.fiber_transmittance(Band::quantum, mid, 51.5);
        const double t_ac = link.fiber_transmittance(Band::quantum, 0.0, 51.5);
        CHECK(t_ab * t_bc == Catch::Approx(t_ac).epsilon(1e-12));
    }
}

TEST_CASE("transmittance stays in (0, 1] and never increases with extra loss") {
    auto link = paper_link_95();
    const double before = link.fiber_transmittance(Band::quantum, 0.0, 95.5);
    CHECK(before > 0.0);
    CHECK(before <= 1.0);
    link.lumped.push_back({50.0, 3.0, 3.0});
    const double after = link.fiber_transmittance(Band::quantum, 0.0, 95.5);
    CHECK(after < before);
}

TEST_CASE("positions outside the link are rejected") {
    const auto link = paper_link_95();
    CHECK_THROWS_AS(link.fiber_transmittance(Band::quantum, -1.0, 10.0), std::out_of_range);
    CHECK_THROWS_AS(link.fiber_transmittance(Band::quantum, 0.0, 100.0), std::out_of_range);
    CHECK_THROWS_AS(link.fiber_transmittance(Band::quantum, 20.0, 10.0), std::out_of_range);
}

TEST_CASE("band selection by wavelength") {
    const auto link = paper_link_95();
    const double tq = transmittance(link, 1310.0, 0.0, 95.5);
    const double tc = transmittance(link, 1550.1, 0.0, 95.5);
    CHECK(tc > tq); // C-band fiber loss is lower
    CHECK(linear_to_db(tc) == Catch::Approx(95.5 * 0.21).epsilon(1e-12));
}

TEST_CASE("loss budget reproduces the filter table") {
    const auto link = paper_link_95();
    const auto budget = LossBudget::build(link, 1.9);
    REQUIRE(budget.rows.size() == 6);
    const double expected_insertion[6] = {0.8, 0.6, 0.8, 1.0, 4.0, 1.9};
    const double expected_isolation[5] = {45.0, 45.0, 45.0, 32.9, 30.0};
    for (int i = 0; i < 6; ++i)
        CHECK(budget.rows[i].insertion_1310_db == expected_insertion[i]);
    for (int i = 0; i < 5; ++i)
        CHECK(budget.rows[i].isolation_1550_db == expected_isolation[i]);
    CHECK(budget.rows[5].dynamic);
    CHECK(budget.total_insertion_1310_db == Catch::Approx(9.1).margin(1e-12));
    CHECK(budget.rx_chain_isolation_1550_db >= 45.0 + 45.0 + 32.9 + 30.0 - 1e-12);
    // totals equal the sum of their rows exactly
    double sum = 0.0;
    for (const auto& row : budget.rows) sum += row.insertion_1310_db;
    CHECK(budget.total_insertion_1310_db == sum);
}

TEST_CASE("empty chain gives an empty budget") {
    LinkTopology link;
    link.spans.push_back({1.0, 0.35, 0.21});
    const auto budget = LossBudget::build(link, 0.0);
    CHECK(budget.rows.empty());
    CHECK(budget.total_insertion_1310_db == 0.0);
}

TEST_CASE("received classical power matches the measured points") {
    {
        LinkTopology link = paper_link_95();
        ClassicalPlan plan;
        for (int i = 0; i < 13; ++i) plan.channels.push_back({1550.1, 0.0});
        set_total_launch_dbm(plan, 8.9);
        CHECK(plan.total_launch_dbm() == Catch::Approx(8.9).epsilon(1e-12));
        const double rx = received_classical_power_dbm(link, plan);
        CHECK(rx == Catch::Approx(-12.1).margin(0.3));
    }
    {
        LinkTopology link = paper_link_51();
        ClassicalPlan plan;
        for (int i = 0; i < 13; ++i) plan.channels.push_back({1550.1, 0.0});
        set_total_launch_dbm(plan, 16.7);
        const double rx = received_classical_power_dbm(link, plan);
        CHECK(rx == Catch::Approx(-11.8).margin(0.3));
    }
}

TEST_CASE("zero channels give zero received power") {
    const auto link = paper_link_95();
    ClassicalPlan plan;
    CHECK(received_classical_power_w(link, plan) == 0.0);
    CHECK(std::isinf(received_classical_power_dbm(link, plan)));
}
