#include <catch2/catch.hpp>

#include <random>

#include "msgate/envelope.hpp"

using namespace msgate;

namespace {

// quadrature oracle for envelope integrals (Simpson, fine grid)
double simpson(const PiecewiseEnvelope& env, double a, double b, int n = 40000) {
    double sum = env.value_at(a) + env.value_at(b);
    const double h = (b - a) / n;
    for (int i = 1; i < n; ++i)
        sum += env.value_at(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("sin2 envelope shape") {
    const double rise = 2.8e-6, flat = 151.5e-6, peak = 2.0e4;
    const auto env = sin2_envelope(rise, flat, peak);

    SECTION("continuous, zero at the ends, peak on the plateau") {
        CHECK(env.value_at(0.0) == Approx(0.0).margin(1e-12));
        CHECK(env.value_at(rise + flat + rise) == Approx(0.0).margin(1e-9));
        CHECK(env.value_at(rise) == Approx(peak));
        CHECK(env.value_at(rise + 0.5 * flat) == Approx(peak));
        // half height at half the ramp: sin²(pi/4) = 1/2
        CHECK(env.value_at(0.5 * rise) == Approx(0.5 * peak));
        // continuity across segment boundaries
        for (double t : {rise, rise + flat}) {
            CHECK(env.value_at(t - 1e-12) == Approx(env.value_at(t + 1e-12)));
        }
    }
    SECTION("total area: two half-ramps contribute one rise time") {
        CHECK(env.integral() == Approx(peak * (flat + rise)).epsilon(1e-12));
    }
    SECTION("partial integrals match quadrature") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, rise + flat + rise);
        for (int i = 0; i < 8; ++i) {
            double a = u(rng), b = u(rng);
            if (a > b) std::swap(a, b);
            CHECK(env.integral(a, b) ==
                  Approx(simpson(env, a, b)).margin(1e-9 * peak * (b - a + 1e-9)));
        }
    }
}

TEST_CASE("sin2 envelope degenerate and invalid inputs") {
    SECTION("zero rise gives a rectangular pulse") {
        const auto env = sin2_envelope(0.0, 1.0e-4, 5.0);
        CHECK(env.value_at(0.0) == Approx(5.0));
        CHECK(env.value_at(0.5e-4) == Approx(5.0));
        CHECK(env.integral() == Approx(5.0e-4));
        CHECK(env.segments().size() == 1);
    }
    SECTION("negative durations and peaks rejected") {
        CHECK_THROWS(sin2_envelope(-1.0, 1.0, 1.0));
        CHECK_THROWS(sin2_envelope(1.0, -1.0, 1.0));
        CHECK_THROWS(sin2_envelope(1.0, 1.0, -1.0));
    }
}

TEST_CASE("piecewise phase track") {
    PiecewisePhase phase;
    phase.add_jump(1.0, pi);
    phase.add_jump(2.0, 0.0);
    CHECK(phase.value_at(0.5) == 0.0);
    CHECK(phase.value_at(1.0) == pi);  // right-continuous
    CHECK(phase.value_at(1.5) == pi);
    CHECK(phase.value_at(2.5) == 0.0);
    CHECK_THROWS(phase.add_jump(1.5, pi));  // out of order
}
