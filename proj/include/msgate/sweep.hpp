// sweep.hpp — robustness sweeps: evaluate an observable over a parameter axis
// for several gate-configuration variants side by side
#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "msgate/config.hpp"
#include "msgate/driver.hpp"

namespace msgate {

enum class SweepObservable { BellErrorExact, BellErrorTomographic };

inline const char* observable_name(SweepObservable o) {
    return o == SweepObservable::BellErrorExact ? "bell_error_exact"
                                                : "bell_error_tomographic";
}

inline SweepObservable observable_from_name(const std::string& s) {
    if (s == "bell_error_exact") return SweepObservable::BellErrorExact;
    if (s == "bell_error_tomographic")
        return SweepObservable::BellErrorTomographic;
    throw ConfigError("unknown observable '" + s + "'");
}

struct SweepVariant {
    std::string name;
    std::vector<std::pair<std::string, std::string>> overrides;
};

struct SweepSpec {
    GateParams base;
    ModeParams mode;
    std::string axis;  // a gate parameter key, e.g. "zeeman_khz"
    std::vector<double> values;  // in config units
    SweepObservable observable = SweepObservable::BellErrorExact;
    std::vector<SweepVariant> variants;
    double tolerance = 1e-10;
    std::uint64_t seed = 1;
    TomographyDesign tomography;  // used by the tomographic observable
    int jobs = 1;

    void validate() const {
        if (values.size() < 1)
            throw ConfigError("sweep needs at least one axis value");
        if (variants.empty()) throw ConfigError("sweep needs >= 1 variant");
        for (double v : values)
            if (!std::isfinite(v)) throw ConfigError("non-finite axis value");
        GateParams probe = base;
        if (!apply_gate_override(probe, axis, "0"))
            throw ConfigError("axis '" + axis +
                              "' is not a numeric gate parameter");
    }
};

struct SweepRow {
    double axis_value = 0.0;
    std::string variant;
    double observable = 0.0;  // NaN when the point failed
    int n_max = 0;
    double tol = 0.0;
    bool leakage_flag = false;

    bool operator==(const SweepRow& o) const {
        auto same = [](double a, double b) {
            return (std::isnan(a) && std::isnan(b)) || a == b;
        };
        return same(axis_value, o.axis_value) && variant == o.variant &&
               same(observable, o.observable) && n_max == o.n_max &&
               tol == o.tol && leakage_flag == o.leakage_flag;
    }
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by axis value, then variant

    bool operator==(const SweepResult& o) const { return rows == o.rows; }

    double value_at(double axis_value, const std::string& variant) const {
        for (const auto& r : rows)
            if (r.axis_value == axis_value && r.variant == variant)
                return r.observable;
        throw std::out_of_range("sweep row not found");
    }
};

inline void sweep_csv_header(std::ostream& os) {
    os << "axis,variant,observable,n_max,tol,leakage_flag\n";
}

inline void sweep_csv_row(std::ostream& os, const SweepRow& r) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%d,%.17g,%d\n",
                  r.axis_value, r.variant.c_str(), r.observable, r.n_max,
                  r.tol, r.leakage_flag ? 1 : 0);
    os << buf;
}

inline std::string to_csv(const SweepResult& result) {
    std::ostringstream ss;
    sweep_csv_header(ss);
    for (const auto& r : result.rows) sweep_csv_row(ss, r);
    return ss.str();
}

inline SweepResult parse_csv(std::istream& is) {
    SweepResult out;
    std::string line;
    if (!std::getline(is, line) || line.find("axis,variant") == std::string::npos)
        throw std::invalid_argument("sweep csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        SweepRow r;
        char variant[96];
        int leak = 0;
        if (std::sscanf(line.c_str(), "%lg,%95[^,],%lg,%d,%lg,%d",
                        &r.axis_value, variant, &r.observable, &r.n_max,
                        &r.tol, &leak) != 6)
            throw std::invalid_argument("sweep csv: bad row '" + line + "'");
        r.variant = variant;
        r.leakage_flag = leak != 0;
        out.rows.push_back(std::move(r));
    }
    return out;
}

inline SweepResult parse_csv(const std::string& text) {
    std::istringstream ss(text);
    return parse_csv(ss);
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline SweepRow evaluate_sweep_point(const SweepSpec& spec, double axis_value,
                                     const SweepVariant& variant,
                                     std::size_t task_index) {
    SweepRow row;
    row.axis_value = axis_value;
    row.variant = variant.name;
    row.tol = spec.tolerance;
    try {
        GateParams p = spec.base;
        for (const auto& [k, v] : variant.overrides)
            if (!apply_gate_override(p, k, v))
                throw ConfigError("unknown override key '" + k + "'");
        {
            char num[40];
            std::snprintf(num, sizeof num, "%.17g", axis_value);
            apply_gate_override(p, spec.axis, num);
        }
        p.validate();

        const bool dd = p.dd_enabled();
        const GateRunResult run =
            run_gate(p, spec.mode, dd, spec.tolerance);
        row.n_max = run.n_max_used;
        row.leakage_flag = run.leakage;
        if (spec.observable == SweepObservable::BellErrorExact) {
            row.observable = run.bell_error;
        } else {
            TomographyDesign design = spec.tomography;
            if (design.phases.empty())
                design.phases = TomographyDesign::concentrated_phases();
            design.seed = splitmix64(spec.seed ^ (task_index + 1));
            row.observable =
                run_bell_tomography(run.rho_qubits, design).report.bell_error;
        }
    } catch (const std::exception&) {
        // a failed point must not kill the sweep
        row.observable = std::nan("");
        row.n_max = 0;
        row.leakage_flag = true;
    }
    return row;
}

}  // namespace detail

// Evaluates every (value, variant) pair. Points run on a bounded worker pool;
// rows are flushed to `sink` in their final order as soon as the contiguous
// prefix is complete, so interrupted runs keep their partial output. Rows in
// `already_done` (a resumed partial CSV) are not recomputed.
inline SweepResult run_sweep(
    const SweepSpec& spec,
    const std::function<void(const SweepRow&)>& sink = {},
    const SweepResult* already_done = nullptr) {
    spec.validate();

    struct Task {
        double value;
        const SweepVariant* variant;
    };
    std::vector<Task> tasks;
    std::vector<double> sorted_values = spec.values;
    std::sort(sorted_values.begin(), sorted_values.end());
    for (double v : sorted_values)
        for (const auto& var : spec.variants) tasks.push_back({v, &var});

    std::vector<SweepRow> rows(tasks.size());
    std::vector<std::atomic<bool>> done(tasks.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            bool reused = false;
            if (already_done) {
                for (const auto& r : already_done->rows) {
                    if (r.axis_value == tasks[i].value &&
                        r.variant == tasks[i].variant->name &&
                        !std::isnan(r.observable)) {
                        rows[i] = r;
                        reused = true;
                        break;
                    }
                }
            }
            if (!reused)
                rows[i] = detail::evaluate_sweep_point(spec, tasks[i].value,
                                                       *tasks[i].variant, i);
            done[i].store(true, std::memory_order_release);
        }
    };

    const int jobs = std::max(1, spec.jobs);
    if (jobs == 1) {
        std::size_t flushed = 0;
        worker();
        if (sink)
            for (; flushed < rows.size(); ++flushed) sink(rows[flushed]);
    } else {
        std::vector<std::thread> pool;
        std::size_t flushed = 0;
        std::thread flusher([&] {
            while (flushed < rows.size()) {
                if (done[flushed].load(std::memory_order_acquire)) {
                    if (sink) sink(rows[flushed]);
                    ++flushed;
                } else {
                    std::this_thread::sleep_for(std::chrono::milliseconds(2));
                }
            }
        });
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        flusher.join();
    }

    SweepResult result;
    result.rows = std::move(rows);
    return result;
}

// ---------------------------------------------------------------------------
// sweep specs from config sections
// ---------------------------------------------------------------------------

inline std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    const std::string t = detail::trim(text);
    if (t.rfind("linspace", 0) == 0) {
        double a = 0, b = 0;
        int n = 0;
        if (std::sscanf(t.c_str(), "linspace ( %lg , %lg , %d )", &a, &b, &n) != 3 &&
            std::sscanf(t.c_str(), "linspace(%lg,%lg,%d)", &a, &b, &n) != 3)
            throw ConfigError("bad linspace spec '" + text + "'");
        if (n < 2) throw ConfigError("linspace needs n >= 2");
        for (int i = 0; i < n; ++i)
            values.push_back(a + (b - a) * i / (n - 1));
        return values;
    }
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ','))
        values.push_back(detail::parse_number(detail::trim(item), "values"));
    if (values.empty()) throw ConfigError("empty value list");
    return values;
}

inline SweepSpec sweep_from_section(const ConfigSection& sec,
                                    const ConfigFile& file) {
    SweepSpec spec;
    bool have_base = false;
    for (const auto& [key, value] : sec.entries) {
        if (key == "base") {
            if (const ConfigSection* g = file.find("gate", value))
                spec.base = gate_from_section(*g);
            else
                spec.base = builtin_preset(value);
            have_base = true;
        } else if (key == "axis") {
            spec.axis = value;
        } else if (key == "values") {
            spec.values = parse_value_list(value);
        } else if (key == "observable") {
            spec.observable = observable_from_name(value);
        } else if (key == "tolerance") {
            spec.tolerance = detail::parse_number(value, key);
        } else if (key == "shots_per_phase") {
            spec.tomography.shots_per_phase =
                long(detail::parse_number(value, key));
        } else if (key == "population_shots") {
            spec.tomography.population_shots =
                long(detail::parse_number(value, key));
        } else if (key == "spam_per_qubit") {
            spec.tomography.spam_per_qubit = detail::parse_number(value, key);
        } else if (key.rfind("variant ", 0) == 0 || key.rfind("variant\t", 0) == 0) {
            SweepVariant var;
            var.name = detail::trim(key.substr(8));
            if (var.name.empty()) throw ConfigError("variant without a name");
            if (value != "none" && !value.empty()) {
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    const auto eq = item.find('=');
                    if (eq == std::string::npos)
                        throw ConfigError("variant override '" + item +
                                          "' is not key=value");
                    var.overrides.emplace_back(detail::trim(item.substr(0, eq)),
                                               detail::trim(item.substr(eq + 1)));
                }
            }
            spec.variants.push_back(std::move(var));
        } else {
            throw ConfigError("unknown sweep key '" + key + "'");
        }
    }
    if (!have_base) throw ConfigError("[sweep] needs a base gate");
    if (spec.axis.empty()) throw ConfigError("[sweep] needs an axis");
    spec.mode = ModeParams::rocking_mode(spec.base.mode_freq > 0
                                             ? spec.base.mode_freq
                                             : mhz_to_rad(4.0));
    if (spec.variants.empty()) spec.variants.push_back({"base", {}});
    spec.validate();
    return spec;
}

}  // namespace msgate
