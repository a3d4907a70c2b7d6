#include <catch2/catch.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "msgate_cli_out.txt";
    const std::string cmd = std::string(MSGATE_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli walsh-check") {
    const CliResult r = run_cli("walsh-check --order 7 --duration-us 331");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("moment_0 ") != std::string::npos);
    CHECK(r.output.find("switch_times_us") != std::string::npos);

    // invalid order: configuration error, diagnostic names allowed orders
    const CliResult bad = run_cli("walsh-check --order 5 --duration-us 331");
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("0, 1, 3, 7, 15") != std::string::npos);
}

TEST_CASE("cli simulate") {
    const CliResult r = run_cli(
        "simulate --preset fast-gate-n1 --set ramp_us=0 --set fock_cutoff=10");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("gate_duration_us 151.5") != std::string::npos);
    // with ramps and error sources zeroed the closed gate is exact
    const auto pos = r.output.find("bell_error_exact ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.output.substr(pos + 17)) < 1e-6);

    const CliResult bad = run_cli("simulate --preset fast-gate-n1 --set walsh_order=5 --set dd_rabi_khz=100");
    CHECK(bad.exit_code == 2);

    const CliResult unknown = run_cli("simulate --preset nonexistent");
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("cli mpm-plan") {
    const CliResult r = run_cli(
        "mpm-plan --shot-ms 10 --budget-j 1.1916e-3 --dummy-power-w 3.6 "
        "--pulse 1.8,331e-6");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("dummy_pulse_w_s") != std::string::npos);
    CHECK(r.output.find("idle_power_w") != std::string::npos);

    const CliResult over = run_cli(
        "mpm-plan --shot-ms 10 --budget-j 1e-6 --dummy-power-w 3.6 "
        "--pulse 3.6,331e-6");
    CHECK(over.exit_code == 2);
    CHECK(over.output.find("exceeds budget") != std::string::npos);
}

TEST_CASE("cli sweep determinism across job counts") {
    const fs::path dir = temp_dir("msgate_cli_sweep");
    {
        std::ofstream cfg(dir / "sweep.cfg");
        cfg << "[gate quick]\n"
               "gate_rabi_khz = 20\nloops = 1\nmode_freq_mhz = 4\n"
               "fock_cutoff = 8\ndd_mode = off\n\n"
               "[sweep demo]\n"
               "base = quick\naxis = zeeman_khz\nvalues = 0, 0.6, 1.2\n"
               "observable = bell_error_exact\n"
               "variant plain = none\n"
               "variant dd = dd_mode=walsh, dd_rabi_khz=400, walsh_order=1\n";
    }
    const std::string base_args = "sweep --config " + (dir / "sweep.cfg").string() +
                                  " --seed 7 ";
    const CliResult r1 =
        run_cli(base_args + "--jobs 1 --out " + (dir / "a").string());
    const CliResult r2 =
        run_cli(base_args + "--jobs 2 --out " + (dir / "b").string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string csv1 = slurp(dir / "a" / "sweep_demo.csv");
    const std::string csv2 = slurp(dir / "b" / "sweep_demo.csv");
    REQUIRE(!csv1.empty());
    CHECK(csv1 == csv2);

    // rerun in place: still identical bytes
    const CliResult r3 =
        run_cli(base_args + "--jobs 2 --out " + (dir / "a").string());
    CHECK(r3.exit_code == 0);
    CHECK(slurp(dir / "a" / "sweep_demo.csv") == csv1);

    // plot flag writes an SVG
    const CliResult r4 = run_cli(base_args + "--jobs 1 --plot --out " +
                                 (dir / "c").string());
    CHECK(r4.exit_code == 0);
    CHECK(fs::exists(dir / "c" / "sweep_demo.svg"));
}

TEST_CASE("cli sweep reports failed points with exit 1") {
    const fs::path dir = temp_dir("msgate_cli_sweep_fail");
    {
        std::ofstream cfg(dir / "sweep.cfg");
        cfg << "[gate quick]\n"
               "gate_rabi_khz = 20\nloops = 1\nmode_freq_mhz = 4\n"
               "fock_cutoff = 8\ndd_mode = off\n\n"
               "[sweep broken]\n"
               "base = quick\naxis = zeeman_khz\nvalues = 0, 1\n"
               "observable = bell_error_exact\n"
               "variant bad = no_such_parameter=1\n";
    }
    const CliResult r = run_cli("sweep --config " + (dir / "sweep.cfg").string() +
                                " --out " + (dir / "out").string());
    CHECK(r.exit_code == 1);  // rows recorded as nan, sweep completed
    std::ifstream csv(dir / "out" / "sweep_broken.csv");
    std::stringstream ss;
    ss << csv.rdbuf();
    CHECK(ss.str().find("nan") != std::string::npos);
}

TEST_CASE("cli parity-fit") {
    const fs::path dir = temp_dir("msgate_cli_fit");
    {
        std::ofstream csv(dir / "scan.csv");
        csv << "phi_rad,shots,count_odd\n";
        // exact counts from C = 0.9, p_mid = 0.5, phi0 = 0
        for (int i = 0; i < 12; ++i) {
            const double phi = 2.0 * 3.14159265358979 * i / 12.0;
            const double p = 0.5 - 0.45 * std::cos(2.0 * phi);
            csv << phi << ",1000," << std::lround(1000 * p) << "\n";
        }
    }
    const CliResult r = run_cli("parity-fit --data " + (dir / "scan.csv").string() +
                                " --p00 0.49 --p11 0.49 --spam 0.0012");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("contrast 0.9") != std::string::npos);
    CHECK(r.output.find("bell_error") != std::string::npos);

    const CliResult missing =
        run_cli("parity-fit --data " + (dir / "nope.csv").string());
    CHECK(missing.exit_code == 2);
}
