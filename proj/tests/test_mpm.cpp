#include <catch2/catch.hpp>

#include <random>

#include "msgate/mpm.hpp"

using namespace msgate;

TEST_CASE("mpm shot planning") {
    SECTION("no experiment pulses: the dummy carries the full budget") {
        const MpmShot shot = plan_mpm_shot(0.010, {}, 1.0e-3, 3.6);
        CHECK(shot.dummy_duration == Approx(1.0e-3 / 3.6));
        CHECK(shot.total_energy() == Approx(shot.energy_budget));
    }
    SECTION("experiment at the budget: zero-length dummy") {
        const MpmPulse pulse{3.6, 331e-6};
        const MpmShot shot =
            plan_mpm_shot(0.010, std::span(&pulse, 1), 3.6 * 331e-6, 3.6);
        CHECK(shot.dummy_duration == Approx(0.0).margin(1e-15));
    }
    SECTION("the 331 us gate at half power leaves a 165.5 us dummy") {
        // budget = 3.6 W x 331 us (1.8 W per sideband, both sidebands)
        const double budget = 3.6 * 331e-6;
        const MpmPulse pulse{1.8, 331e-6};
        const MpmShot shot =
            plan_mpm_shot(0.010, std::span(&pulse, 1), budget, 3.6);
        CHECK(shot.dummy_duration == Approx(165.5e-6));
    }
    SECTION("idle plan spreads the budget over the whole shot") {
        const MpmShot shot = plan_mpm_shot(0.010, {}, 1.2e-3, 3.6);
        CHECK(shot.idle_power() == Approx(1.2e-3 / 0.010));
    }
    SECTION("over-budget experiments rejected with the overshoot") {
        const MpmPulse pulse{3.6, 400e-6};
        CHECK_THROWS_WITH(
            plan_mpm_shot(0.010, std::span(&pulse, 1), 3.6 * 331e-6, 3.6),
            Catch::Contains("exceeds budget"));
    }
    SECTION("invalid inputs rejected") {
        CHECK_THROWS(plan_mpm_shot(0.0, {}, 1e-3, 3.6));
        CHECK_THROWS(plan_mpm_shot(0.01, {}, 1e-3, 0.0));
        CHECK_THROWS(plan_mpm_shot(0.01, {}, -1e-3, 3.6));
    }
}

TEST_CASE("mpm energy conservation over randomized plans") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double budget = 1e-4 + 2e-3 * u(rng);
        const double dummy_power = 1.0 + 5.0 * u(rng);
        std::vector<MpmPulse> pulses;
        const int n = int(u(rng) * 4);
        double used = 0.0;
        for (int i = 0; i < n; ++i) {
            MpmPulse p;
            p.power = 0.5 + 3.0 * u(rng);
            const double cap = (budget - used) / p.power;
            p.duration = std::min(u(rng) * cap * 0.5, 1.5e-3);
            used += p.energy();
            pulses.push_back(p);
        }
        const MpmShot shot = plan_mpm_shot(0.010, pulses, budget, dummy_power);
        REQUIRE(std::abs(shot.total_energy() - budget) <= 1e-9 * budget);
    }
}
