#include "jetwave/cli.hpp"

#include "jetwave/checks.hpp"
#include "jetwave/config.hpp"
#include "jetwave/evolution.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace jetwave {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string config;
    std::string out = "./out";
    std::uint64_t seed = 0;
    bool quiet = false;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Thread cap from JETWAVE_THREADS; the numerics run on one thread, so the value is only validated and recorded.
int thread_cap() {
    const char* env = std::getenv("JETWAVE_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError("JETWAVE_THREADS", "must be a positive integer");
    return static_cast<int>(n);
}

std::ofstream open_output(const Common& c, const std::string& name) {
    fs::create_directories(c.out);
    std::ofstream f(fs::path(c.out) / name);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(c.out) / name).string());
    return f;
}

void write_common_manifest(std::ostream& m, const std::string& command, const Common& c, const RunConfig& cfg) {
    m << "command=" << command << "\n"
      << "config=" << c.config << "\n"
      << "seed=" << c.seed << "\n"
      << "threads=" << thread_cap() << "\n"
      << "n_theta=" << cfg.n_theta << "\n"
      << "n_z=" << cfg.n_z << "\n"
      << "n_rho=" << cfg.n_rho << "\n"
      << "length_z=" << num(cfg.length_z) << "\n"
      << "R=" << num(cfg.R) << "\n"
      << "sigma=" << num(cfg.sigma) << "\n";
}

int cmd_simulate(const Common& c) {
    RunConfig cfg = load_config(c.config);
    thread_cap();
    SurfaceState s0 = initial_state(cfg);
    require_admissible(s0.eta, s0.R);

    std::ofstream table = open_output(c, cfg.table_file);
    table << "t,E_k,E_p,H_total,volume,min_eta,max_eta,mean_psi,elliptic_iters\n";
    auto observer = [&](const Snapshot& s) {
        const EnergyReport& e = s.energy;
        table << num(e.t) << ',' << num(e.E_k) << ',' << num(e.E_p) << ',' << num(e.H) << ',' << num(e.volume) << ','
              << num(e.min_eta) << ',' << num(e.max_eta) << ',' << num(e.mean_psi) << ',' << e.elliptic_iters << '\n';
        if (!c.quiet) std::printf("t=%.6f H=%.12e min_eta=%.6f\n", e.t, e.H, e.min_eta);
    };
    Trajectory tr = simulate(s0, cfg.evolution, observer);
    table.close();

    const EvolutionConfig& e = cfg.evolution;
    const double dt_req = e.dt > 0.0 ? e.dt : cfl_time_step(s0.grid(), s0.eta.mean(), s0.sigma, e.cfl);
    const long steps = std::max(1L, static_cast<long>(std::ceil(e.t_final / dt_req - 1e-9)));
    std::ofstream m = open_output(c, cfg.manifest_file);
    write_common_manifest(m, "simulate", c, cfg);
    m << "dt=" << num(e.t_final / steps) << "\n"
      << "dt_mode=" << (e.dt > 0.0 ? "fixed" : "auto") << "\n"
      << "steps=" << steps << "\n"
      << "t_final=" << num(e.t_final) << "\n"
      << "filter_eps=" << num(e.filter_eps) << "\n"
      << "tol_elliptic=" << num(e.elliptic.tol) << "\n"
      << "record_every=" << e.record_every << "\n"
      << "bernoulli_constant=0\n"
      << "table=" << cfg.table_file << "\n"
      << "status=" << (tr.pinched ? "pinch_off" : "completed") << "\n"
      << "last_t=" << num(tr.snapshots.empty() ? s0.t : tr.last().state.t) << "\n";
    if (tr.pinched) m << "abort_reason=" << tr.abort_reason << "\n";
    if (tr.pinched) {
        std::fprintf(stderr, "pinch-off: %s\n", tr.abort_reason.c_str());
        return exit_pinch;
    }
    return exit_ok;
}

int cmd_dispersion(const Common& c) {
    RunConfig cfg = load_config(c.config);
    thread_cap();
    std::vector<DispersionMode> modes = cfg.dispersion_modes;
    if (modes.empty()) {
        const double R = cfg.R;
        modes = {{0, 0.25 / R}, {0, 0.5 / R}, {0, 0.75 / R}, {0, 1.0 / R}, {2, 0.0}, {3, 0.0}, {4, 0.0}};
    }
    EllipticOptions opts = cfg.elliptic();
    opts.tol = 1e-13;
    std::ofstream t = open_output(c, "dispersion.csv");
    t << "m,k,omega2_analytic,omega2_measured,rel_error\n";
    for (const DispersionMode& md : modes) {
        if (md.m == 0 && md.k == 0.0) throw ConfigError("dispersion.modes", "the (0,0) mode has no dispersion relation");
        DispersionMeasurement d = measure_dispersion(cfg.R, cfg.sigma, md.m, md.k, opts);
        const std::string row = std::to_string(d.m) + ',' + num(d.k) + ',' + num(d.omega2_analytic) + ',' +
                                num(d.omega2_measured) + ',' + num(d.rel_error);
        t << row << '\n';
        if (!c.quiet) std::printf("%s\n", row.c_str());
    }
    return exit_ok;
}

int cmd_verify(const Common& c) {
    RunConfig cfg = load_config(c.config);
    CheckOptions o;
    o.n_theta = cfg.n_theta;
    o.n_z = cfg.n_z;
    o.length_z = cfg.length_z;
    o.n_rho = cfg.n_rho;
    o.R = cfg.R;
    o.sigma = cfg.sigma;
    o.max_iter = cfg.evolution.elliptic.max_iter;
    o.seed = c.seed;
    o.samples = cfg.verify_samples;
    o.hamiltonian_samples = std::min(20, cfg.verify_samples);
    o.conservation_t_final = cfg.verify_t_final;
    o.symbols.corrupt_lambda0 = cfg.corrupt_lambda0_sign;
    o.groups = cfg.verify_groups;

    std::ofstream rep = open_output(c, "verify.txt");
    write_common_manifest(rep, "verify", c, cfg);
    rep << "tol_elliptic=" << num(o.tol) << "\n";
    auto progress = [&](const CheckResult& r) {
        const char* status = r.informational ? "INFO" : r.pass ? "PASS" : "FAIL";
        rep << "check=" << r.name << " status=" << status << " value=" << num(r.value)
            << " threshold=" << num(r.threshold) << (r.detail.empty() ? "" : " detail=\"" + r.detail + "\"") << "\n";
        rep.flush();
        if (!c.quiet || (!r.pass && !r.informational))
            std::printf("%s %-40s %.3e (threshold %.1e) %s\n", status, r.name.c_str(), r.value, r.threshold,
                        r.detail.c_str());
        std::fflush(stdout);
    };
    auto results = run_verification_suite(o, progress);
    int failed = 0;
    for (const auto& r : results) failed += r.pass || r.informational ? 0 : 1;
    rep << "failed=" << failed << "\n";
    if (!c.quiet) std::printf("%d of %zu checks failed\n", failed, results.size());
    return failed ? exit_verify : exit_ok;
}

int cmd_dtn(const Common& c) {
    RunConfig cfg = load_config(c.config);
    thread_cap();
    SurfaceState s = initial_state(cfg);
    TraceBundle tr = dirichlet_neumann(s.eta, s.psi, cfg.elliptic());
    TraceResiduals res = trace_residuals(s.eta, s.psi, tr);
    const TorusGrid& g = s.grid();

    std::ofstream d = open_output(c, "dtn.csv");
    d << "theta,z,eta,psi,B,V_theta,V_z,N,G\n";
    for (int i = 0; i < g.n_theta(); ++i) {
        for (int j = 0; j < g.n_z(); ++j) {
            const int k = g.index(i, j);
            d << num(g.theta(i)) << ',' << num(g.z(j)) << ',' << num(s.eta[k]) << ',' << num(s.psi[k]) << ','
              << num(tr.B[k]) << ',' << num(tr.V_theta[k]) << ',' << num(tr.V_z[k]) << ',' << num(tr.N[k]) << ','
              << num(tr.G[k]) << '\n';
        }
    }
    std::ofstream m = open_output(c, "dtn_manifest.txt");
    write_common_manifest(m, "dtn", c, cfg);
    m << "tol_elliptic=" << num(cfg.evolution.elliptic.tol) << "\n"
      << "iterations=" << tr.stats.iterations << "\n"
      << "solver_residual=" << num(tr.stats.residual) << "\n"
      << "gradient_identity_residual=" << num(res.gradient_identity) << "\n"
      << "b_formula_residual=" << num(res.b_formula) << "\n";
    if (!c.quiet)
        std::printf("iterations=%d gradient_identity=%.3e b_formula=%.3e\n", tr.stats.iterations, res.gradient_identity,
                    res.b_formula);
    return exit_ok;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"jetwave: capillary jet simulator and verification suite"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&c](CLI::App* sub) {
        sub->add_option("--config", c.config, "INI configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", c.out, "output directory")->capture_default_str();
        sub->add_option("--seed", c.seed, "seed for randomized checks")->capture_default_str();
        sub->add_flag("--quiet", c.quiet, "suppress progress output");
    };
    CLI::App* sim = app.add_subcommand("simulate", "integrate the jet equations and write the energy time series");
    CLI::App* disp = app.add_subcommand("dispersion", "measure ω² of linear modes about the cylinder");
    CLI::App* ver = app.add_subcommand("verify", "run the verification suite");
    CLI::App* dtn = app.add_subcommand("dtn", "dump the Dirichlet-to-Neumann traces for the configured state");
    for (CLI::App* s : {sim, disp, ver, dtn}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (sim->parsed()) return cmd_simulate(c);
        if (disp->parsed()) return cmd_dispersion(c);
        if (ver->parsed()) return cmd_verify(c);
        return cmd_dtn(c);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const InputError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "config error: initial state rejected: %s\n", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_runtime;
    }
}

}  // namespace jetwave
