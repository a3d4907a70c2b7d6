// msgate — command-line front end: single gate simulations, robustness
// sweeps, parity-scan fits, MPM shot plans and Walsh diagnostics.
//
// Exit codes: 0 success, 1 runtime/simulation failure, 2 configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msgate/msgate.hpp"
#include "msgate/plot.hpp"

namespace fs = std::filesystem;
using namespace msgate;

namespace {

struct CommonOpts {
    std::vector<std::string> configs;
    std::string preset;
    std::vector<std::string> overrides;  // key=value
    std::string out_dir;
    std::uint64_t seed = 1;
    int jobs = 1;
    bool plot = false;
};

GateParams load_gate(const CommonOpts& opts, ConfigFile* file_out = nullptr) {
    ConfigFile file;
    for (const auto& c : opts.configs) {
        ConfigFile f = parse_config_file(resolve_config_path(c));
        for (auto& s : f.sections) file.sections.push_back(std::move(s));
    }
    if (file_out) *file_out = file;

    GateParams params;
    if (!opts.preset.empty()) {
        if (const ConfigSection* sec = file.find("gate", opts.preset))
            params = gate_from_section(*sec);
        else
            params = builtin_preset(opts.preset);
    } else if (const ConfigSection* sec = file.first_of("gate")) {
        params = gate_from_section(*sec);
    } else {
        throw ConfigError("no gate selected: pass --preset or a --config with "
                          "a [gate] section");
    }
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (!apply_gate_override(params, key, value))
            throw ConfigError("unknown parameter '" + key + "'");
    }
    params.validate();
    return params;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

int cmd_simulate(const CommonOpts& opts, bool tomography, long shots_per_phase,
                 long population_shots, double spam, double tolerance,
                 bool lab_frame) {
    const GateParams params = load_gate(opts);
    const ModeParams mode = ModeParams::rocking_mode(
        params.mode_freq > 0 ? params.mode_freq : mhz_to_rad(4.0));

    GateRunResult run;
    if (lab_frame) {
        const PulseSchedule sched =
            build_gate_schedule(params, mode, params.dd_enabled());
        const OperatorSet ops = OperatorSet::build(params.fock_cutoff);
        const EvolveResult ev =
            evolve_lab(basis_state(0, 0, 0, params.fock_cutoff), sched, params,
                       mode, ops, tolerance);
        run.rho_qubits = reduce_to_qubits(ev.state, params.fock_cutoff);
        run.bell_error = 1.0 - bell_fidelity(run.rho_qubits);
        run.n_max_used = params.fock_cutoff;
        run.leakage = ev.leakage_flag;
        run.tolerance = tolerance;
    } else {
        run = run_gate(params, mode, params.dd_enabled(), tolerance);
    }

    char buf[160];
    std::snprintf(buf, sizeof buf, "gate_duration_us %.6f\n",
                  s_to_us(params.duration));
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "bell_error_exact %.10e\n", run.bell_error);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "net_dd_rotation_rad %.10e\n",
                  run.net_dd_angle);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "n_max_used %d\nleakage_flag %d\n",
                  run.n_max_used, run.leakage ? 1 : 0);
    std::cout << buf;
    if (run.leakage)
        std::cerr << "warning: population reached the top Fock levels; "
                     "increase fock_cutoff\n";

    std::string report_text;
    if (tomography) {
        TomographyDesign design;
        design.phases = TomographyDesign::concentrated_phases();
        design.shots_per_phase = shots_per_phase;
        design.population_shots = population_shots;
        design.spam_per_qubit = spam;
        design.seed = opts.seed;
        const TomographyRun tomo = run_bell_tomography(run.rho_qubits, design);
        report_text = tomo.report.to_kv_text();
        std::cout << report_text;
    }

    if (!opts.out_dir.empty()) {
        fs::create_directories(opts.out_dir);
        const PulseSchedule sched =
            build_gate_schedule(params, mode, params.dd_enabled());
        write_file(fs::path(opts.out_dir) / "schedule.txt", sched.export_text());
        if (!report_text.empty())
            write_file(fs::path(opts.out_dir) / "bell_report.txt", report_text);
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& sweep_name,
              bool resume) {
    ConfigFile file;
    if (opts.configs.empty())
        throw ConfigError("sweep needs --config with a [sweep] section");
    for (const auto& c : opts.configs) {
        ConfigFile f = parse_config_file(resolve_config_path(c));
        for (auto& s : f.sections) file.sections.push_back(std::move(s));
    }
    const ConfigSection* sec = sweep_name.empty()
                                   ? file.first_of("sweep")
                                   : file.find("sweep", sweep_name);
    if (!sec) throw ConfigError("no [sweep] section found");

    SweepSpec spec = sweep_from_section(*sec, file);
    spec.jobs = opts.jobs;
    spec.seed = opts.seed;
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        if (!apply_gate_override(spec.base, kv.substr(0, eq),
                                 kv.substr(eq + 1)))
            throw ConfigError("unknown parameter '" + kv.substr(0, eq) + "'");
    }

    const fs::path out_dir = opts.out_dir.empty() ? fs::path(".")
                                                  : fs::path(opts.out_dir);
    fs::create_directories(out_dir);
    const fs::path csv_path = out_dir / ("sweep_" + sec->name + ".csv");

    SweepResult previous;
    const SweepResult* resume_from = nullptr;
    if (resume && fs::exists(csv_path)) {
        std::ifstream in(csv_path);
        previous = parse_csv(in);
        resume_from = &previous;
    }

    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    sweep_csv_header(csv);
    const SweepResult result = run_sweep(
        spec,
        [&](const SweepRow& row) {
            sweep_csv_row(csv, row);
            csv.flush();
        },
        resume_from);
    csv.close();
    std::cout << "wrote " << csv_path.string() << " (" << result.rows.size()
              << " rows)\n";

    if (opts.plot) {
        const fs::path svg_path = out_dir / ("sweep_" + sec->name + ".svg");
        std::ofstream svg(svg_path, std::ios::binary);
        if (!svg) throw std::runtime_error("cannot write " + svg_path.string());
        emit_plot(result, svg, spec.axis, observable_name(spec.observable));
        if (!svg.good())
            throw std::runtime_error("write failed: " + svg_path.string());
        std::cout << "wrote " << svg_path.string() << "\n";
    }

    for (const auto& row : result.rows)
        if (std::isnan(row.observable)) return 1;
    return 0;
}

int cmd_parity_fit(const std::string& data_path, std::optional<double> p00,
                   std::optional<double> p11, double sigma_p00,
                   double sigma_p11, double spam, double sigma_spam,
                   int bootstrap, std::uint64_t seed,
                   const std::string& out_dir) {
    std::ifstream in(resolve_config_path(data_path));
    const ParityDataset data = ParityDataset::from_csv(in);
    const ParityFit fit = fit_parity_mle(data);

    char buf[128];
    std::snprintf(buf, sizeof buf, "contrast %.10g\n", fit.contrast);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "contrast_sigma_lo %.10g\n",
                  fit.sigma_contrast_lo);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "contrast_sigma_hi %.10g\n",
                  fit.sigma_contrast_hi);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "phase_offset_rad %.10g\n",
                  fit.phase_offset);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "p_mid %.10g\n", fit.p_mid);
    std::cout << buf;
    if (fit.degenerate) std::cout << "degenerate 1\n";
    if (bootstrap > 0) {
        std::snprintf(buf, sizeof buf, "contrast_sigma_bootstrap %.10g\n",
                      bootstrap_contrast_sigma(data, fit, bootstrap, seed));
        std::cout << buf;
    }

    if (p00 && p11) {
        BellInputUncertainties u;
        u.sigma_p00 = sigma_p00;
        u.sigma_p11 = sigma_p11;
        u.sigma_contrast = fit.sigma_contrast();
        u.sigma_spam = sigma_spam;
        const BellReport report =
            bell_error_report(*p00, *p11, fit.contrast, spam, u);
        std::cout << report.to_kv_text();
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            write_file(fs::path(out_dir) / "bell_report.txt",
                       report.to_kv_text());
        }
    }
    return 0;
}

int cmd_mpm_plan(double shot_ms, double budget_j, double dummy_power_w,
                 const std::vector<std::string>& pulse_specs) {
    std::vector<MpmPulse> pulses;
    for (const auto& spec : pulse_specs) {
        MpmPulse p;
        if (std::sscanf(spec.c_str(), "%lg,%lg", &p.power, &p.duration) != 2)
            throw ConfigError("--pulse expects power_w,duration_s, got '" +
                              spec + "'");
        pulses.push_back(p);
    }
    const MpmShot shot =
        plan_mpm_shot(1e-3 * shot_ms, pulses, budget_j, dummy_power_w);
    std::cout << shot.to_text();
    return 0;
}

int cmd_walsh_check(int order, double duration_us, int max_moment) {
    const WalshSequence seq = make_walsh(order, us_to_s(duration_us));
    std::cout << "order " << seq.order() << "\nsegments "
              << seq.segment_count() << "\nswitch_times_us";
    for (double t : seq.switch_times()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.6f", s_to_us(t));
        std::cout << buf;
    }
    std::cout << "\n";
    for (int m = 0; m <= max_moment; ++m) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "moment_%d %.10e\n", m,
                      seq.moment_integral(m));
        std::cout << buf;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"microwave Molmer-Sorensen gate simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.configs, "config file(s)");
        cmd->add_option("--preset", opts.preset,
                        "gate preset name (built-in or from --config)");
        cmd->add_option("--set", opts.overrides,
                        "parameter override key=value");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--seed", opts.seed, "random seed");
        cmd->add_option("--jobs", opts.jobs, "worker threads");
        cmd->add_flag("--plot", opts.plot, "emit an SVG plot");
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "run one gate simulation");
    add_common(sim);
    bool sim_tomo = false, sim_lab = false;
    long sim_shots = 250, sim_pop_shots = 6000;
    double sim_spam = 0.0, sim_tol = 1e-10;
    sim->add_flag("--tomography", sim_tomo, "add a finite-shot tomography run");
    sim->add_option("--shots-per-phase", sim_shots, "parity shots per phase");
    sim->add_option("--population-shots", sim_pop_shots, "population shots");
    sim->add_option("--spam", sim_spam, "SPAM probability per qubit");
    sim->add_option("--tolerance", sim_tol, "integrator tolerance");
    sim->add_flag("--lab-frame", sim_lab,
                  "evolve the full two-tone lab Hamiltonian (slow; needs "
                  "qubit_freq_mhz and carrier_rabi_mhz)");

    // sweep
    auto* swp = app.add_subcommand("sweep", "run a robustness sweep");
    add_common(swp);
    std::string sweep_name;
    bool resume = false;
    swp->add_option("--sweep", sweep_name, "[sweep] section name");
    swp->add_flag("--resume", resume, "reuse rows from an existing CSV");

    // parity-fit
    auto* fit = app.add_subcommand("parity-fit",
                                   "MLE contrast fit of a parity-scan CSV");
    std::string fit_data, fit_out;
    double fit_p00 = -1, fit_p11 = -1, fit_sp00 = 0, fit_sp11 = 0;
    double fit_spam = 0, fit_sspam = 0;
    int fit_bootstrap = 0;
    fit->add_option("--data", fit_data, "ParityDataset CSV path")->required();
    fit->add_option("--bootstrap", fit_bootstrap,
                    "also estimate sigma(C) from N parametric resamples");
    fit->add_option("--seed", opts.seed, "bootstrap random seed");
    fit->add_option("--p00", fit_p00, "measured P00 (enables a Bell report)");
    fit->add_option("--p11", fit_p11, "measured P11");
    fit->add_option("--sigma-p00", fit_sp00, "one sigma on P00");
    fit->add_option("--sigma-p11", fit_sp11, "one sigma on P11");
    fit->add_option("--spam", fit_spam, "SPAM probability per qubit");
    fit->add_option("--sigma-spam", fit_sspam, "one sigma on the SPAM value");
    fit->add_option("--out", fit_out, "output directory");

    // mpm-plan
    auto* mpm = app.add_subcommand("mpm-plan", "microwave power management plan");
    double mpm_shot_ms = 10.0, mpm_budget = 0.0, mpm_dummy_w = 0.0;
    std::vector<std::string> mpm_pulses;
    mpm->add_option("--shot-ms", mpm_shot_ms, "shot duration [ms]");
    mpm->add_option("--budget-j", mpm_budget, "energy budget per shot [J]")
        ->required();
    mpm->add_option("--dummy-power-w", mpm_dummy_w, "dummy pulse power [W]")
        ->required();
    mpm->add_option("--pulse", mpm_pulses,
                    "experiment pulse power_w,duration_s (repeatable)");

    // walsh-check
    auto* wal = app.add_subcommand("walsh-check",
                                   "print Walsh switch times and moments");
    int wal_order = 7, wal_mmax = 4;
    double wal_dur_us = 331.0;
    wal->add_option("--order", wal_order, "walsh order (0,1,3,7,15)");
    wal->add_option("--duration-us", wal_dur_us, "sequence duration [us]");
    wal->add_option("--max-moment", wal_mmax, "highest moment to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(opts, sim_tomo, sim_shots, sim_pop_shots,
                                sim_spam, sim_tol, sim_lab);
        if (swp->parsed()) return cmd_sweep(opts, sweep_name, resume);
        if (fit->parsed())
            return cmd_parity_fit(
                fit_data,
                fit_p00 >= 0 ? std::optional<double>(fit_p00) : std::nullopt,
                fit_p11 >= 0 ? std::optional<double>(fit_p11) : std::nullopt,
                fit_sp00, fit_sp11, fit_spam, fit_sspam, fit_bootstrap,
                opts.seed, fit_out);
        if (mpm->parsed())
            return cmd_mpm_plan(mpm_shot_ms, mpm_budget, mpm_dummy_w,
                                mpm_pulses);
        if (wal->parsed())
            return cmd_walsh_check(wal_order, wal_dur_us, wal_mmax);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
