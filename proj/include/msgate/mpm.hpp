// mpm.hpp — microwave power management: dummy pulses keep the injected
// energy per fixed-duration shot at a pre-defined constant value
#pragma once

#include <cstdio>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace msgate {

struct MpmPulse {
    double power = 0.0;     // watts
    double duration = 0.0;  // seconds
    double energy() const { return power * duration; }
};

struct MpmShot {
    double shot_duration = 0.010;  // seconds
    std::vector<MpmPulse> experiment_pulses;
    double dummy_power = 0.0;
    double dummy_duration = 0.0;
    double energy_budget = 0.0;  // joules

    double experiment_energy() const {
        double e = 0.0;
        for (const auto& p : experiment_pulses) e += p.energy();
        return e;
    }
    double total_energy() const {
        return experiment_energy() + dummy_power * dummy_duration;
    }
    // When idling, the drive stays on continuously at reduced amplitude.
    double idle_power() const { return energy_budget / shot_duration; }

    std::string to_text() const {
        char buf[160];
        std::ostringstream ss;
        std::snprintf(buf, sizeof buf, "shot_duration_s %.17g\n", shot_duration);
        ss << buf;
        std::snprintf(buf, sizeof buf, "energy_budget_j %.17g\n", energy_budget);
        ss << buf;
        for (const auto& p : experiment_pulses) {
            std::snprintf(buf, sizeof buf, "experiment_pulse_w_s %.17g %.17g\n",
                          p.power, p.duration);
            ss << buf;
        }
        std::snprintf(buf, sizeof buf, "dummy_pulse_w_s %.17g %.17g\n",
                      dummy_power, dummy_duration);
        ss << buf;
        std::snprintf(buf, sizeof buf, "idle_power_w %.17g\n", idle_power());
        ss << buf;
        return ss.str();
    }
};

inline MpmShot plan_mpm_shot(double shot_duration,
                             std::span<const MpmPulse> experiment_pulses,
                             double energy_budget, double dummy_power) {
    if (shot_duration <= 0.0)
        throw std::invalid_argument("mpm: shot duration must be positive");
    if (dummy_power <= 0.0)
        throw std::invalid_argument("mpm: dummy power must be positive");
    if (energy_budget < 0.0)
        throw std::invalid_argument("mpm: energy budget must be >= 0");

    MpmShot shot;
    shot.shot_duration = shot_duration;
    shot.experiment_pulses.assign(experiment_pulses.begin(),
                                  experiment_pulses.end());
    shot.energy_budget = energy_budget;
    shot.dummy_power = dummy_power;

    double used = 0.0, pulse_time = 0.0;
    for (const auto& p : shot.experiment_pulses) {
        if (p.power < 0.0 || p.duration < 0.0)
            throw std::invalid_argument("mpm: pulse power/duration must be >= 0");
        used += p.energy();
        pulse_time += p.duration;
    }
    if (used > energy_budget) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "mpm: experiment energy exceeds budget by %.6g J",
                      used - energy_budget);
        throw std::invalid_argument(msg);
    }

    shot.dummy_duration = (energy_budget - used) / dummy_power;
    // the dummy runs during state preparation; it has to fit in the shot
    if (shot.dummy_duration + pulse_time > shot_duration)
        throw std::invalid_argument(
            "mpm: dummy pulse does not fit inside the shot window; raise "
            "dummy power or lower the budget");
    return shot;
}

}  // namespace msgate
