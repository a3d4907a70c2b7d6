// tomography.hpp — parity scans, binomial MLE contrast fit, SPAM-corrected
// Bell-state error reporting
//
// SPAM model: with probability eps per qubit the readout returns a random
// outcome (a symmetric channel; full randomization at eps = 1). The
// correction inverts the per-qubit readout survival: C, P00, P11 are each
// divided by (1−eps1)(1−eps2), which reproduces the bookkeeping
// raw_error − 2·eps (to first order) used for the quoted gate errors.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msgate/bell.hpp"
#include "msgate/operators.hpp"

namespace msgate {

struct ParityPoint {
    double phase = 0.0;  // radians in [0, 2·pi)
    long shots = 0;
    long count_odd = 0;  // outcomes in {01, 10}
};

struct ParityDataset {
    std::vector<ParityPoint> points;

    void validate() const {
        for (const auto& p : points) {
            if (p.shots <= 0)
                throw std::invalid_argument("parity point with shots <= 0");
            if (p.count_odd < 0 || p.count_odd > p.shots)
                throw std::invalid_argument("count_odd outside [0, shots]");
            if (p.phase < 0.0 || p.phase >= two_pi)
                throw std::invalid_argument("phase outside [0, 2pi)");
        }
    }

    void to_csv(std::ostream& os) const {
        os << "phi_rad,shots,count_odd\n";
        char buf[96];
        for (const auto& p : points) {
            std::snprintf(buf, sizeof buf, "%.17g,%ld,%ld\n", p.phase, p.shots,
                          p.count_odd);
            os << buf;
        }
    }

    static ParityDataset from_csv(std::istream& is) {
        ParityDataset d;
        std::string line;
        if (!std::getline(is, line))
            throw std::invalid_argument("parity csv: empty file");
        if (line.find("phi_rad") == std::string::npos)
            throw std::invalid_argument("parity csv: missing header");
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            ParityPoint p;
            if (std::sscanf(line.c_str(), "%lg,%ld,%ld", &p.phase, &p.shots,
                            &p.count_odd) != 3)
                throw std::invalid_argument("parity csv: bad row '" + line + "'");
            d.points.push_back(p);
        }
        d.validate();
        return d;
    }
};

// ---------------------------------------------------------------------------
// forward simulation
// ---------------------------------------------------------------------------

// Symmetric two-qubit z rotation putting the Bell coherence at phase pi, so
// the parity fringe is minimal at phi = 0 ("leave it unchanged") and maximal
// at phi = pi/2 — the phase reference the analysis pulse is calibrated to.
inline Matrix4cd align_bell_phase(const Matrix4cd& rho) {
    const cplx coherence = rho(0, 3);
    if (std::abs(coherence) < 1e-15) return rho;
    const double theta = 0.5 * (pi - std::arg(coherence));
    Eigen::Vector4cd d;
    d << std::exp(cplx(0, theta)), 1.0, 1.0, std::exp(cplx(0, -theta));
    return d.asDiagonal() * rho * d.conjugate().asDiagonal();
}

// per-qubit symmetric readout randomization with probability eps
inline std::array<double, 4> apply_spam_channel(const std::array<double, 4>& p,
                                                double eps1, double eps2) {
    // randomize w.p. eps == flip w.p. eps/2
    const double f1 = 0.5 * eps1, f2 = 0.5 * eps2;
    std::array<double, 4> out{};
    for (int q1 = 0; q1 < 2; ++q1)
        for (int q2 = 0; q2 < 2; ++q2)
            for (int r1 = 0; r1 < 2; ++r1)
                for (int r2 = 0; r2 < 2; ++r2) {
                    const double k1 = (q1 == r1) ? 1.0 - f1 : f1;
                    const double k2 = (q2 == r2) ? 1.0 - f2 : f2;
                    out[r1 * 2 + r2] += k1 * k2 * p[q1 * 2 + q2];
                }
    return out;
}

inline std::array<double, 4> outcome_probabilities(const Matrix4cd& rho,
                                                   double spam_per_qubit) {
    std::array<double, 4> p{};
    for (int i = 0; i < 4; ++i) p[i] = std::max(0.0, rho(i, i).real());
    const double norm = p[0] + p[1] + p[2] + p[3];
    for (double& x : p) x /= norm;
    return apply_spam_channel(p, spam_per_qubit, spam_per_qubit);
}

// Parity scan: global pi/2 rotation about the phi axis, then population
// readout with SPAM, then binomial sampling of the odd-outcome count.
// Deterministic for a fixed seed.
inline ParityDataset simulate_parity_scan(const Matrix4cd& rho_2q,
                                          const std::vector<double>& phases,
                                          long shots, double spam_per_qubit,
                                          std::uint64_t seed) {
    if (shots <= 0) throw std::invalid_argument("shots must be positive");
    std::mt19937_64 rng(seed);
    ParityDataset data;
    for (double phi : phases) {
        const Matrix2cd s_phi = pauli_phi(phi);
        const Matrix2cd u2 = (Matrix2cd::Identity() - cplx(0, 1) * s_phi) /
                             std::sqrt(2.0);  // exp(−i·pi/4·sigma_phi)
        const Matrix4cd u = kron(MatrixXcd(u2), MatrixXcd(u2));
        const Matrix4cd rotated = u * rho_2q * u.adjoint();
        const auto p = outcome_probabilities(rotated, spam_per_qubit);
        const double p_odd = std::clamp(p[1] + p[2], 0.0, 1.0);
        std::binomial_distribution<long> binom(shots, p_odd);
        ParityPoint pt;
        pt.phase = std::fmod(std::fmod(phi, two_pi) + two_pi, two_pi);
        pt.shots = shots;
        pt.count_odd = binom(rng);
        data.points.push_back(pt);
    }
    return data;
}

// Population measurement (no analysis pulse): multinomial sample of the four
// outcomes; returns observed P00 and P11 fractions.
struct PopulationSample {
    double p00 = 0.0, p11 = 0.0;
    long shots = 0;
    double sigma_p00() const {
        return std::sqrt(std::max(p00 * (1.0 - p00), 1.0 / shots) / shots);
    }
    double sigma_p11() const {
        return std::sqrt(std::max(p11 * (1.0 - p11), 1.0 / shots) / shots);
    }
    // P00 and P11 are anticorrelated through the small odd fraction; the sum
    // entering the Bell error is binomial in the odd counts and much tighter
    // than independent propagation would suggest.
    double sigma_sum() const {
        const double p_odd = std::clamp(1.0 - p00 - p11, 0.0, 1.0);
        return std::sqrt(std::max(p_odd * (1.0 - p_odd), 1.0 / shots) / shots);
    }
};

inline PopulationSample simulate_populations(const Matrix4cd& rho_2q,
                                             long shots, double spam_per_qubit,
                                             std::uint64_t seed) {
    if (shots <= 0) throw std::invalid_argument("shots must be positive");
    std::mt19937_64 rng(seed);
    const auto p = outcome_probabilities(rho_2q, spam_per_qubit);
    std::discrete_distribution<int> dist(p.begin(), p.end());
    std::array<long, 4> counts{};
    for (long i = 0; i < shots; ++i) ++counts[dist(rng)];
    PopulationSample s;
    s.shots = shots;
    s.p00 = double(counts[0]) / shots;
    s.p11 = double(counts[3]) / shots;
    return s;
}

// ---------------------------------------------------------------------------
// maximum-likelihood contrast fit
// ---------------------------------------------------------------------------

// model: P_odd(phi) = p_mid − (C/2)·cos 2(phi − phase_offset)
struct ParityFit {
    double contrast = 0.0;
    double phase_offset = 0.0;
    double p_mid = 0.5;
    double sigma_contrast_lo = 0.0;  // profile-likelihood 1-sigma widths
    double sigma_contrast_hi = 0.0;
    double sigma_phase = 0.0;
    double sigma_p_mid = 0.0;
    double log_likelihood = 0.0;
    bool degenerate = false;

    double sigma_contrast() const {
        return std::max(sigma_contrast_lo, sigma_contrast_hi);
    }
};

namespace detail {

inline double parity_model(double phi, double c, double phi0, double mid) {
    return mid - 0.5 * c * std::cos(2.0 * (phi - phi0));
}

inline bool parity_params_valid(double c, double mid) {
    return c >= 0.0 && c <= 1.0 && mid - 0.5 * c >= -1e-12 &&
           mid + 0.5 * c <= 1.0 + 1e-12;
}

inline double parity_log_likelihood(const ParityDataset& d, double c,
                                    double phi0, double mid) {
    if (!parity_params_valid(c, mid)) return -1e300;
    double ll = 0.0;
    for (const auto& pt : d.points) {
        double p = parity_model(pt.phase, c, phi0, mid);
        p = std::clamp(p, 1e-12, 1.0 - 1e-12);
        ll += pt.count_odd * std::log(p) +
              (pt.shots - pt.count_odd) * std::log1p(-p);
    }
    return ll;
}

// Nelder–Mead maximization, small and deterministic.
template <int N>
std::array<double, N> nelder_mead_max(
    std::function<double(const std::array<double, N>&)> f,
    std::array<double, N> start, double scale, int iters) {
    std::array<std::array<double, N>, N + 1> simplex;
    std::array<double, N + 1> val;
    simplex[0] = start;
    for (int i = 0; i < N; ++i) {
        simplex[i + 1] = start;
        simplex[i + 1][i] += scale;
    }
    for (int i = 0; i <= N; ++i) val[i] = f(simplex[i]);

    for (int it = 0; it < iters; ++it) {
        // order: best first
        std::array<int, N + 1> idx;
        for (int i = 0; i <= N; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return val[a] > val[b]; });
        std::array<std::array<double, N>, N + 1> s2;
        std::array<double, N + 1> v2;
        for (int i = 0; i <= N; ++i) {
            s2[i] = simplex[idx[i]];
            v2[i] = val[idx[i]];
        }
        simplex = s2;
        val = v2;
        if (std::abs(val[0] - val[N]) < 1e-12) break;

        std::array<double, N> centroid{};
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) centroid[j] += simplex[i][j];
        }
        for (int j = 0; j < N; ++j) centroid[j] /= N;

        auto blend = [&](double coef) {
            std::array<double, N> p;
            for (int j = 0; j < N; ++j)
                p[j] = centroid[j] + coef * (simplex[N][j] - centroid[j]);
            return p;
        };
        const auto refl = blend(-1.0);
        const double f_refl = f(refl);
        if (f_refl > val[0]) {
            const auto expa = blend(-2.0);
            const double f_expa = f(expa);
            if (f_expa > f_refl) {
                simplex[N] = expa;
                val[N] = f_expa;
            } else {
                simplex[N] = refl;
                val[N] = f_refl;
            }
        } else if (f_refl > val[N - 1]) {
            simplex[N] = refl;
            val[N] = f_refl;
        } else {
            const auto contr = blend(0.5);
            const double f_contr = f(contr);
            if (f_contr > val[N]) {
                simplex[N] = contr;
                val[N] = f_contr;
            } else {
                for (int i = 1; i <= N; ++i) {
                    for (int j = 0; j < N; ++j)
                        simplex[i][j] =
                            0.5 * (simplex[i][j] + simplex[0][j]);
                    val[i] = f(simplex[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= N; ++i)
        if (val[i] > val[best]) best = i;
    return simplex[best];
}

// profile log-likelihood over (phi0, mid) at fixed contrast
inline double profile_ll_at_contrast(const ParityDataset& d, double c,
                                     double phi0_start, double mid_start) {
    auto f = [&](const std::array<double, 2>& x) {
        return parity_log_likelihood(d, c, x[0], x[1]);
    };
    const auto best = nelder_mead_max<2>(
        f, {phi0_start, std::clamp(mid_start, 0.5 * c, 1.0 - 0.5 * c)}, 0.02,
        300);
    return parity_log_likelihood(d, c, best[0], best[1]);
}

}  // namespace detail

inline ParityFit fit_parity_mle(const ParityDataset& data) {
    data.validate();
    {
        std::vector<double> distinct;
        for (const auto& p : data.points) {
            bool seen = false;
            for (double d : distinct)
                if (std::abs(d - p.phase) < 1e-12) seen = true;
            if (!seen) distinct.push_back(p.phase);
        }
        if (distinct.size() < 3)
            throw std::invalid_argument(
                "parity fit needs at least 3 distinct phases");
    }

    // linear seed: p(phi) = mid + a·cos 2phi + b·sin 2phi
    double s_n = 0, s_cc = 0, s_ss = 0, s_cs = 0, s_c = 0, s_s = 0;
    double s_y = 0, s_yc = 0, s_ys = 0;
    bool all_equal = true;
    const double first_frac =
        double(data.points.front().count_odd) / data.points.front().shots;
    for (const auto& pt : data.points) {
        const double y = double(pt.count_odd) / pt.shots;
        if (std::abs(y - first_frac) > 1e-12) all_equal = false;
        const double w = double(pt.shots);
        const double c = std::cos(2.0 * pt.phase), s = std::sin(2.0 * pt.phase);
        s_n += w;
        s_c += w * c;
        s_s += w * s;
        s_cc += w * c * c;
        s_ss += w * s * s;
        s_cs += w * c * s;
        s_y += w * y;
        s_yc += w * y * c;
        s_ys += w * y * s;
    }
    Eigen::Matrix3d m;
    m << s_n, s_c, s_s, s_c, s_cc, s_cs, s_s, s_cs, s_ss;
    Eigen::Vector3d rhs(s_y, s_yc, s_ys);
    Eigen::Vector3d sol = m.fullPivLu().solve(rhs);
    double mid0 = std::clamp(sol(0), 0.0, 1.0);
    const double a = sol(1), b = sol(2);
    double c0 = std::clamp(2.0 * std::hypot(a, b), 0.0, 1.0);
    double phi0_start = 0.5 * std::atan2(-b, -a);
    mid0 = std::clamp(mid0, 0.5 * c0, 1.0 - 0.5 * c0);

    ParityFit fit;
    if (all_equal) {
        // flat data carry no contrast information
        fit.contrast = 0.0;
        fit.p_mid = first_frac;
        fit.degenerate = true;
        fit.sigma_contrast_lo = 0.0;
        fit.sigma_contrast_hi = 1.0;
        fit.sigma_phase = pi;
        fit.sigma_p_mid =
            std::sqrt(std::max(first_frac * (1 - first_frac), 1e-12) / s_n);
        fit.log_likelihood =
            detail::parity_log_likelihood(data, 0.0, 0.0, fit.p_mid);
        return fit;
    }

    auto f3 = [&](const std::array<double, 3>& x) {
        return detail::parity_log_likelihood(data, x[0], x[1], x[2]);
    };
    auto best = detail::nelder_mead_max<3>(f3, {c0, phi0_start, mid0}, 0.05, 600);
    // polish from the first optimum
    best = detail::nelder_mead_max<3>(f3, best, 0.005, 400);

    fit.contrast = best[0];
    fit.phase_offset = best[1];
    fit.p_mid = best[2];
    fit.log_likelihood =
        detail::parity_log_likelihood(data, best[0], best[1], best[2]);

    // profile-likelihood 1-sigma interval on the contrast: log L drops by 1/2
    const double ll_target = fit.log_likelihood - 0.5;
    auto profile = [&](double c) {
        return detail::profile_ll_at_contrast(data, c, fit.phase_offset,
                                              fit.p_mid);
    };
    auto bisect_edge = [&](double inside, double outside) {
        for (int i = 0; i < 40; ++i) {
            const double mid = 0.5 * (inside + outside);
            if (profile(mid) >= ll_target)
                inside = mid;
            else
                outside = mid;
        }
        return 0.5 * (inside + outside);
    };

    // upper edge
    if (fit.contrast >= 1.0 - 1e-12 || profile(1.0) >= ll_target) {
        fit.sigma_contrast_hi = 1.0 - fit.contrast;  // capped at the boundary
    } else {
        double hi = std::min(1.0, fit.contrast + 0.05);
        while (hi < 1.0 && profile(hi) >= ll_target)
            hi = std::min(1.0, hi + 0.05);
        fit.sigma_contrast_hi = bisect_edge(fit.contrast, hi) - fit.contrast;
    }
    // lower edge
    if (fit.contrast <= 1e-12 || profile(0.0) >= ll_target) {
        fit.sigma_contrast_lo = fit.contrast;
    } else {
        double lo = std::max(0.0, fit.contrast - 0.05);
        while (lo > 0.0 && profile(lo) >= ll_target)
            lo = std::max(0.0, lo - 0.05);
        fit.sigma_contrast_lo = fit.contrast - bisect_edge(fit.contrast, lo);
    }

    // cruder curvature-based widths for the nuisance parameters
    auto curvature_sigma = [&](int index, double step, double cap) {
        auto ll_at = [&](double delta) {
            std::array<double, 3> x = best;
            x[index] += delta;
            return detail::parity_log_likelihood(data, x[0], x[1], x[2]);
        };
        const double d2 =
            (ll_at(step) - 2.0 * fit.log_likelihood + ll_at(-step)) /
            (step * step);
        if (d2 >= -1e-12) return cap;
        return std::min(cap, 1.0 / std::sqrt(-d2));
    };
    fit.sigma_phase = curvature_sigma(1, 1e-3, pi);
    fit.sigma_p_mid = curvature_sigma(2, 1e-4, 1.0);
    return fit;
}

// Parametric bootstrap of the contrast uncertainty: resample counts from the
// fitted model and refit. Slower and noisier than the profile likelihood
// (which stays the default), kept behind an explicit call/flag.
inline double bootstrap_contrast_sigma(const ParityDataset& data,
                                       const ParityFit& fit, int resamples,
                                       std::uint64_t seed) {
    if (resamples < 8)
        throw std::invalid_argument("bootstrap needs >= 8 resamples");
    std::mt19937_64 rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (int b = 0; b < resamples; ++b) {
        ParityDataset resampled = data;
        for (auto& pt : resampled.points) {
            const double p = std::clamp(
                detail::parity_model(pt.phase, fit.contrast, fit.phase_offset,
                                     fit.p_mid),
                0.0, 1.0);
            std::binomial_distribution<long> binom(pt.shots, p);
            pt.count_odd = binom(rng);
        }
        const double c = fit_parity_mle(resampled).contrast;
        sum += c;
        sum_sq += c * c;
    }
    const double mean = sum / resamples;
    return std::sqrt(std::max(0.0, sum_sq / resamples - mean * mean));
}

// ---------------------------------------------------------------------------
// SPAM-corrected Bell error report
// ---------------------------------------------------------------------------

struct BellReport {
    double p00 = 0.0, p11 = 0.0;      // SPAM-corrected populations
    double contrast = 0.0;            // SPAM-corrected contrast
    double phase_offset = 0.0;
    double spam_per_qubit = 0.0;
    double bell_error = 0.0;          // 1 − (C + P00 + P11)/2
    double uncertainty = 0.0;         // one sigma on bell_error
    bool clamped = false;             // correction pushed a probability past [0,1]

    std::string to_kv_text() const {
        char buf[96];
        std::ostringstream ss;
        auto kv = [&](const char* k, double v) {
            std::snprintf(buf, sizeof buf, "%s %.17g\n", k, v);
            ss << buf;
        };
        kv("p00", p00);
        kv("p11", p11);
        kv("contrast", contrast);
        kv("phase_offset_rad", phase_offset);
        kv("spam_per_qubit", spam_per_qubit);
        kv("bell_error", bell_error);
        kv("uncertainty", uncertainty);
        ss << "clamped " << (clamped ? 1 : 0) << "\n";
        return ss.str();
    }
};

struct BellInputUncertainties {
    double sigma_p00 = 0.0;
    double sigma_p11 = 0.0;
    double sigma_contrast = 0.0;
    double sigma_spam = 0.0;
};

inline BellReport bell_error_report(double p00, double p11, double contrast,
                                    double spam_per_qubit,
                                    const BellInputUncertainties& u = {}) {
    for (double v : {p00, p11, contrast, spam_per_qubit})
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument(
                "bell_error_report inputs must lie in [0, 1]");

    BellReport rep;
    rep.spam_per_qubit = spam_per_qubit;
    const double survival = (1.0 - spam_per_qubit) * (1.0 - spam_per_qubit);

    auto correct = [&](double value) {
        double corrected = value / survival;
        if (corrected > 1.0) {
            rep.clamped = true;
            corrected = 1.0;
        }
        return corrected;
    };
    rep.p00 = correct(p00);
    rep.p11 = correct(p11);
    rep.contrast = correct(contrast);
    rep.bell_error = 1.0 - 0.5 * (rep.contrast + rep.p00 + rep.p11);

    // quadrature propagation through e = 1 − (C + P00 + P11)/(2·survival)
    const double dsum = 0.5 / survival;
    const double de_deps =
        (contrast + p00 + p11) /
        ((1.0 - spam_per_qubit) * (1.0 - spam_per_qubit) *
         (1.0 - spam_per_qubit));
    // The survival rescale is one inversion convention; inverting the
    // population parity channel instead (constant term untouched) shifts the
    // result at order eps. The spread between the two conventions enters the
    // uncertainty as a model systematic.
    const double pop_sum_rescaled = (p00 + p11) / survival;
    const double pop_sum_parity =
        0.5 * (1.0 + (2.0 * (p00 + p11) - 1.0) / survival);
    const double model_spread =
        0.5 * std::abs(pop_sum_rescaled - pop_sum_parity);
    rep.uncertainty = std::sqrt(
        dsum * dsum *
            (u.sigma_p00 * u.sigma_p00 + u.sigma_p11 * u.sigma_p11 +
             u.sigma_contrast * u.sigma_contrast) +
        de_deps * de_deps * u.sigma_spam * u.sigma_spam +
        model_spread * model_spread);
    return rep;
}

// forward channel matching the documented inversion (round-trip identity)
inline double apply_spam_attenuation(double value, double spam_per_qubit) {
    return value * (1.0 - spam_per_qubit) * (1.0 - spam_per_qubit);
}

}  // namespace msgate
