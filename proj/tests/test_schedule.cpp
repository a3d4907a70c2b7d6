#include <catch2/catch.hpp>

#include <cmath>

#include "msgate/schedule.hpp"

using namespace msgate;

namespace {

GateParams slow_gate() {
    GateParams p = slow_dd_gate_preset();
    p.qubit_freq = mhz_to_rad(3200.0);
    return p;
}

ModeParams slow_mode() { return ModeParams::rocking_mode(mhz_to_rad(5.6)); }

}  // namespace

TEST_CASE("closure conditions") {
    SECTION("fast gate, N = 1: t_g = 151.5 us, near the 154 us measurement") {
        const Closure c = solve_closure(khz_to_rad(3.3), 1);
        CHECK(s_to_us(c.duration) == Approx(151.5151).epsilon(1e-4));
        CHECK(std::abs(s_to_us(c.duration) - 154.0) / 154.0 < 0.02);
    }
    SECTION("slow gate, N = 2: t_g = 336.7 us, near the 331 us measurement") {
        const Closure c = solve_closure(khz_to_rad(2.1), 2);
        CHECK(s_to_us(c.duration) == Approx(336.7175).epsilon(1e-4));
        CHECK(std::abs(s_to_us(c.duration) - 331.0) / 331.0 < 0.02);
    }
    SECTION("both identities hold exactly after solving") {
        for (int n : {1, 2, 3, 5}) {
            GateParams p;
            p.gate_rabi = khz_to_rad(2.7);
            p.loops = n;
            apply_closure(p);
            CHECK(closure_satisfied(p));
            CHECK(p.detuning == Approx(2.0 * p.gate_rabi * std::sqrt(n)));
            CHECK(p.duration * p.detuning == Approx(two_pi * n));
        }
    }
    SECTION("a doubled detuning is detected as non-closed") {
        GateParams p;
        p.gate_rabi = khz_to_rad(3.3);
        p.loops = 1;
        apply_closure(p);
        p.detuning *= 2.0;
        CHECK_FALSE(closure_satisfied(p));
    }
    SECTION("invalid inputs rejected") {
        CHECK_THROWS(solve_closure(0.0, 1));
        CHECK_THROWS(solve_closure(khz_to_rad(1.0), 0));
    }
}

TEST_CASE("mode parameters") {
    const ModeParams m = ModeParams::rocking_mode(mhz_to_rad(5.6));
    m.validate();
    CHECK(m.eigenvector_factor == Approx(1.0 / std::sqrt(2.0)));
    // x_zpf for 43Ca+ at 2pi x 5.6 MHz is a few nm
    CHECK(m.zpf == Approx(4.58e-9).epsilon(0.02));
    ModeParams bad = m;
    bad.zpf *= 1.001;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("gate schedule construction") {
    const GateParams p = slow_gate();
    const ModeParams mode = slow_mode();

    SECTION("without decoupling there are exactly two tones") {
        const PulseSchedule s = build_gate_schedule(p, mode, false);
        REQUIRE(s.tones.size() == 2);
        CHECK(s.find(ToneRole::RedSideband) != nullptr);
        CHECK(s.find(ToneRole::BlueSideband) != nullptr);
        CHECK(s.find(ToneRole::Decoupling) == nullptr);
    }
    SECTION("sidebands sit at omega_q ± (omega_m + delta_g), equal amplitude") {
        const PulseSchedule s = build_gate_schedule(p, mode, false);
        const Tone* red = s.find(ToneRole::RedSideband);
        const Tone* blue = s.find(ToneRole::BlueSideband);
        CHECK(red->frequency ==
              Approx(p.qubit_freq - (p.mode_freq + p.detuning)));
        CHECK(blue->frequency ==
              Approx(p.qubit_freq + (p.mode_freq + p.detuning)));
        const double t_mid = 0.5 * s.total_duration;
        CHECK(red->amplitude.value_at(t_mid) ==
              Approx(blue->amplitude.value_at(t_mid)));
        CHECK(red->amplitude.value_at(t_mid) == Approx(p.gate_rabi));
        CHECK(red->amplitude.value_at(0.0) == Approx(0.0).margin(1e-12));
    }
    SECTION("ramps are prepended and appended outside t_g") {
        const PulseSchedule s = build_gate_schedule(p, mode, true);
        CHECK(s.total_duration == Approx(p.duration + 2.0 * p.ramp_time));
        CHECK(s.gate_start == Approx(p.ramp_time));
        CHECK(s.gate_end == Approx(p.ramp_time + p.duration));
    }
    SECTION("walsh-7 decoupling tone flips where the sign pattern changes") {
        const PulseSchedule s = build_gate_schedule(p, mode, true);
        const Tone* dd = s.find(ToneRole::Decoupling);
        REQUIRE(dd != nullptr);
        const auto& jumps = dd->phase.jump_times();
        // + - - + - + + - has sign changes at {1,3,4,5,7}/8
        REQUIRE(jumps.size() == 5);
        const double t8 = p.duration / 8.0;
        const int expected[] = {1, 3, 4, 5, 7};
        for (std::size_t i = 0; i < jumps.size(); ++i)
            CHECK(jumps[i] - s.gate_start == Approx(expected[i] * t8));
        // phases alternate 0 <-> pi
        CHECK(dd->phase.value_at(s.gate_start) == 0.0);
        CHECK(dd->phase.value_at(s.gate_start + 2.0 * t8) == Approx(pi));
        CHECK(dd->phase.value_at(s.gate_start + 3.5 * t8) == Approx(0.0));
    }
    SECTION("decoupling amplitude dips to zero at each flip") {
        const PulseSchedule s = build_gate_schedule(p, mode, true);
        const Tone* dd = s.find(ToneRole::Decoupling);
        const double flip = s.gate_start + p.duration / 8.0;
        CHECK(dd->amplitude.value_at(flip) == Approx(0.0).margin(1e-9));
        CHECK(dd->amplitude.value_at(flip - 0.5 * p.flip_ramp_time) ==
              Approx(p.dd_rabi).epsilon(1e-9));
        CHECK(dd->amplitude.value_at(flip + 0.5 * p.flip_ramp_time) ==
              Approx(p.dd_rabi).epsilon(1e-9));
    }
    SECTION("flips sit inside the gate window, clear of the sideband ramps") {
        const PulseSchedule s = build_gate_schedule(p, mode, true);
        const Tone* dd = s.find(ToneRole::Decoupling);
        for (double j : dd->phase.jump_times()) {
            CHECK(j > s.gate_start);
            CHECK(j < s.gate_end);
        }
    }
    SECTION("overlapping flip windows are rejected") {
        GateParams bad = p;
        bad.walsh_order = 15;
        bad.flip_ramp_time = bad.duration / 8.0;  // dips wider than a segment
        CHECK_THROWS_WITH(build_gate_schedule(bad, mode, true),
                          Catch::Contains("overlap"));
    }
    SECTION("schedules are deterministic") {
        const std::string a = build_gate_schedule(p, mode, true).export_text();
        const std::string b = build_gate_schedule(p, mode, true).export_text();
        CHECK(a == b);
        CHECK(a.find("decoupling") != std::string::npos);
    }
}

TEST_CASE("comparison decoupling modes") {
    const ModeParams mode = slow_mode();
    SECTION("pi_y mode inserts one mid-gate pulse") {
        GateParams p = slow_gate();
        p.dd_mode = DdMode::PiY;
        const PulseSchedule s = build_gate_schedule(p, mode, true);
        REQUIRE(s.instant_pulses.size() == 1);
        CHECK(s.instant_pulses[0].axis == 'y');
        CHECK(s.instant_pulses[0].angle == Approx(pi));
        CHECK(s.instant_pulses[0].time ==
              Approx(s.gate_start + 0.5 * p.duration));
    }
    SECTION("pi_y mode requires an even loop count") {
        GateParams p = slow_gate();
        p.dd_mode = DdMode::PiY;
        p.loops = 1;
        apply_closure(p);
        CHECK_THROWS(build_gate_schedule(p, mode, true));
    }
    SECTION("calibrated mode snaps the drive area to 2 M pi") {
        GateParams p = slow_gate();
        p.dd_mode = DdMode::Calibrated;
        const PulseSchedule s = build_gate_schedule(p, mode, true);
        const Tone* dd = s.find(ToneRole::Decoupling);
        REQUIRE(dd != nullptr);
        CHECK(dd->phase.jump_times().empty());
        const double area = dd->amplitude.integral();
        const double m = area / two_pi;
        CHECK(m == Approx(std::round(m)).margin(1e-9));
    }
}

TEST_CASE("net decoupling rotation over schedules") {
    const ModeParams mode = slow_mode();

    SECTION("constant drive, walsh 1, no flip ramps: exactly zero") {
        GateParams p = slow_gate();
        p.walsh_order = 1;
        p.flip_ramp_time = 0.0;
        const PulseSchedule s = build_gate_schedule(p, mode, true);
        CHECK(std::abs(net_dd_rotation(s, p)) <
              1e-10 * p.dd_rabi * p.duration);
    }
    SECTION("linear drift: walsh 1 leaves a rotation, walsh 3 cancels it") {
        GateParams p = slow_gate();
        p.flip_ramp_time = 0.0;
        p.dd_drift_a1 = 0.1;
        p.walsh_order = 1;
        const double w1 =
            net_dd_rotation(build_gate_schedule(p, mode, true), p);
        CHECK(std::abs(w1) > 1e-3 * p.dd_rabi * p.duration);
        p.walsh_order = 3;
        const double w3 =
            net_dd_rotation(build_gate_schedule(p, mode, true), p);
        CHECK(std::abs(w3) < 1e-10 * p.dd_rabi * p.duration);
    }
    SECTION("quadratic drift: walsh 3 fails, walsh 7 cancels") {
        GateParams p = slow_gate();
        p.flip_ramp_time = 0.0;
        p.dd_drift_a2 = 0.15;
        p.walsh_order = 3;
        const double w3 =
            net_dd_rotation(build_gate_schedule(p, mode, true), p);
        CHECK(std::abs(w3) > 1e-4 * p.dd_rabi * p.duration);
        p.walsh_order = 7;
        const double w7 =
            net_dd_rotation(build_gate_schedule(p, mode, true), p);
        CHECK(std::abs(w7) < 1e-10 * p.dd_rabi * p.duration);
    }
    SECTION("moment-composition route agrees with the schedule integral") {
        GateParams p = slow_gate();
        p.flip_ramp_time = 0.0;
        p.dd_drift_a1 = -0.07;
        p.dd_drift_a2 = 0.12;
        for (int order : {1, 3, 7, 15}) {
            p.walsh_order = order;
            const double via_schedule =
                net_dd_rotation(build_gate_schedule(p, mode, true), p);
            const double via_moments = net_dd_rotation_poly(
                WalshSequence(order, p.duration), p.dd_rabi, p.dd_drift_a1,
                p.dd_drift_a2);
            CHECK(via_schedule ==
                  Approx(via_moments).margin(1e-9 * p.dd_rabi * p.duration));
        }
    }
    SECTION("pi_y mode cancels a constant drive") {
        GateParams p = slow_gate();
        p.dd_mode = DdMode::PiY;
        p.flip_ramp_time = 0.0;
        const PulseSchedule s = build_gate_schedule(p, mode, true);
        CHECK(std::abs(net_dd_rotation(s, p)) <
              1e-10 * p.dd_rabi * p.duration);
        // but not a linear drift
        GateParams drift = p;
        drift.dd_drift_a1 = 0.1;
        const PulseSchedule s2 = build_gate_schedule(drift, mode, true);
        CHECK(std::abs(net_dd_rotation(s2, drift)) >
              1e-3 * p.dd_rabi * p.duration);
    }
    SECTION("schedule without a decoupling tone is rejected") {
        GateParams p = slow_gate();
        const PulseSchedule s = build_gate_schedule(p, mode, false);
        CHECK_THROWS(net_dd_rotation(s, p));
    }
    SECTION("calibrated 2Mpi mode is spoiled by a drive drift, walsh is not") {
        GateParams p = slow_gate();
        p.flip_ramp_time = 0.0;
        p.dd_drift_a1 = 0.05;

        GateParams cal = p;
        cal.dd_mode = DdMode::Calibrated;
        const double angle_cal =
            net_dd_rotation(build_gate_schedule(cal, mode, true), cal);
        const double residual_cal =
            std::remainder(angle_cal, two_pi);  // rotation is modulo 2 pi
        CHECK(std::abs(residual_cal) > 0.05);

        GateParams wal = p;
        wal.dd_mode = DdMode::Walsh;
        wal.walsh_order = 3;
        const double angle_wal =
            net_dd_rotation(build_gate_schedule(wal, mode, true), wal);
        CHECK(std::abs(angle_wal) < 1e-10 * p.dd_rabi * p.duration);

        // without drift the calibrated mode is exact too
        GateParams cal0 = cal;
        cal0.dd_drift_a1 = 0.0;
        const double angle_cal0 =
            net_dd_rotation(build_gate_schedule(cal0, mode, true), cal0);
        CHECK(std::abs(std::remainder(angle_cal0, two_pi)) < 1e-9);
    }
}

TEST_CASE("schedule text export") {
    GateParams p = slow_gate();
    const PulseSchedule s = build_gate_schedule(p, slow_mode(), true);
    const std::string text = s.export_text();
    CHECK(text.find("red_sideband") != std::string::npos);
    CHECK(text.find("blue_sideband") != std::string::npos);
    CHECK(text.find("decoupling") != std::string::npos);
    CHECK(text.find("sin2_rise") != std::string::npos);
    // one row per amplitude segment
    std::size_t rows = 0;
    for (const Tone& t : s.tones) rows += t.amplitude.segments().size();
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == rows + 3);  // header + columns + duration comments
}
