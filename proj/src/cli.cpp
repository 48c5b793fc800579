#include "nlsbox/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "nlsbox/config.hpp"
#include "nlsbox/control.hpp"
#include "nlsbox/io.hpp"
#include "nlsbox/physmap.hpp"
#include "nlsbox/quadrature.hpp"

namespace nlsbox::cli {

namespace {

namespace fs = std::filesystem;

struct Run {
    Regime regime = Regime::Focusing;
    bool endpoint = false;
    double mu = 0.0;
    double hbar = 1.0, m = 1.0;
    int M = 256, n_points = 1025, n_t = 2001;
    double T = 1.0, dt = 5e-4;
    unsigned seed = 1;
    int threads = 1;
    fs::path out;
    IniMap ini;
};

Run load_run(const Options& opt) {
    Run r;
    r.ini = IniMap::parse_file(opt.config_path);
    const IniMap& ini = r.ini;

    const std::string regime = ini.get("run", "regime", "focusing");
    if (regime == "focusing") r.regime = Regime::Focusing;
    else if (regime == "defocusing") r.regime = Regime::Defocusing;
    else throw std::runtime_error("config: regime must be focusing or defocusing");

    r.hbar = ini.get_double("run", "hbar", 1.0);
    r.m = ini.get_double("run", "m", 1.0);
    if (r.hbar <= 0.0 || r.m <= 0.0) throw std::domain_error("config: hbar, m must be positive");

    r.endpoint = ini.get_int("run", "endpoint", 0) != 0;
    const bool has_mu = ini.has("run", "mu");
    const bool has_kappa = ini.has("run", "kappa");
    if (!r.endpoint) {
        if (has_mu == has_kappa)
            throw std::runtime_error("config: exactly one of mu / kappa must be supplied");
        r.mu = has_mu ? ini.require_double("run", "mu")
                      : mu_from_kappa(r.regime, ini.require_double("run", "kappa"), r.hbar, r.m);
    }

    r.M = ini.get_int("run", "M", 256);
    r.n_points = ini.get_int("run", "n_points", 1025);
    r.n_t = ini.get_int("run", "n_t", 2001);
    r.T = ini.get_double("run", "T", 1.0);
    r.dt = ini.get_double("run", "dt", 5e-4);
    if (r.M <= 0 || r.n_points <= 0 || r.n_t <= 0 || r.T <= 0.0 || r.dt <= 0.0)
        throw std::runtime_error("config: sizes and times must be positive");

    r.seed = (opt.seed >= 0) ? unsigned(opt.seed) : unsigned(ini.get_int("run", "seed", 1));
    r.threads = (opt.threads > 0) ? opt.threads : ini.get_int("run", "threads", 1);
    r.out = opt.out_dir.empty() ? fs::path(ini.get("run", "out", "out")) : fs::path(opt.out_dir);
    fs::create_directories(r.out);
    return r;
}

GroundState make_state(const Run& r, int n_points) {
    if (r.endpoint) return GroundState::endpoint(r.regime);
    return GroundState::build(r.regime, r.mu, n_points);
}

SpectralData make_spectrum(const Run& r, const GroundState& gs, int n_keep) {
    const BlockOperator op = assemble_block(r.regime, gs, Flavor::M, r.M);
    return decompose(op, gs, n_keep);
}

ControlSignal control_from_config(const Run& r, const std::string& section) {
    const std::string file = r.ini.get(section, "control", "");
    if (file.empty()) return ControlSignal::zero(r.T, r.n_t);
    const Eigen::MatrixXd tu = io::read_columns(file, 2);
    const int n = int(tu.rows());
    if (n < 5) throw std::runtime_error("control file too short: " + file);
    const double T = tu(n - 1, 0);
    return ControlSignal::from_grid(T, tu.col(1), 1e-6);
}

TargetState target_from_config(const Run& r, const GroundState& gs, const SpectralData& sd) {
    const std::string kind = r.ini.get("target", "kind", "modal");
    if (kind == "modal") {
        std::vector<int> modes = r.ini.get_int_list("target", "modes");
        if (modes.empty()) modes = {1, 2, 3, 4, 5, 6};
        const double size = r.ini.get_double("target", "size", 1e-3);
        return make_modal_target(gs, sd, r.T, modes, size, r.seed);
    }
    if (kind == "nearby") {
        const double mu_prime = r.ini.require_double("target", "mu_prime");
        return make_nearby_target(gs, mu_prime, r.T, r.M);
    }
    if (kind == "file") {
        const Eigen::MatrixXd rows = io::read_columns(r.ini.get("target", "file", ""), 3);
        SineGrid grid{r.M};
        StateField psi(grid, Rep::Coefficient);
        for (int i = 0; i < rows.rows(); ++i) {
            const int mode = int(rows(i, 0));
            if (mode < 1 || mode > r.M) throw std::runtime_error("target file: mode out of range");
            psi.v(mode - 1) = Complex(rows(i, 1), rows(i, 2));
        }
        TargetState ts;
        ts.psi_f = to_rep(psi, Rep::Point);
        ts.mu = gs.mu;
        ts.T = r.T;
        return ts;
    }
    throw std::runtime_error("config: unknown target kind " + kind);
}

int cmd_ground(const Run& r) {
    const GroundState gs = make_state(r, r.n_points);
    const MassSlope ms = mass_and_convexity(gs);
    const double kappa = kappa_from_mu(gs, r.hbar, r.m);

    std::ostringstream os;
    os << "regime = " << regime_name(r.regime) << "\n";
    os << "mu = " << io::fmt(gs.mu) << "\n";
    os << "k = " << io::fmt(gs.k) << "\n";
    os << "K = " << io::fmt(gs.Kk) << "\n";
    os << "mass = " << io::fmt(ms.mass) << "\n";
    os << "slope = " << io::fmt(ms.slope) << "\n";
    os << "kappa = " << io::fmt(kappa) << "\n";
    os << "dphi0 = " << io::fmt(gs.dphi0) << "\n";
    os << "dphi1 = " << io::fmt(gs.dphi1) << "\n";
    io::write_file((r.out / "summary.txt").string(), os.str());

    std::ostringstream ph;
    ph << "# x phi dmu_phi\n";
    for (int j = 0; j < gs.x.size(); ++j)
        ph << io::fmt(gs.x(j)) << " " << io::fmt(gs.phi(j)) << " " << io::fmt(gs.dmu_phi(j))
           << "\n";
    io::write_file((r.out / "phi.dat").string(), ph.str());
    return 0;
}

int cmd_spectrum(const Run& r) {
    const GroundState gs = make_state(r, std::max(r.n_points, 4 * r.M + 1));
    const int n_keep = r.ini.get_int("spectrum", "n_keep", r.M / 4);
    const SpectralData sd = make_spectrum(r, gs, n_keep);

    std::ostringstream os;
    os << "regime = " << regime_name(r.regime) << "\n";
    os << "mu = " << io::fmt(sd.mu) << "\n";
    os << "M = " << sd.M << "\n";
    os << "n_keep = " << sd.n_keep << "\n";
    os << "n_star = " << sd.n_star << "\n";
    os << "n_star_stable = " << (sd.n_star_stable ? 1 : 0) << "\n";
    os << "fitted_C = " << io::fmt(sd.fitted_asymptotic_C()) << "\n";
    os << "# n beta gamma_re gamma_im deviation\n";
    for (int n = 1; n <= sd.n_keep; ++n) {
        const double dev =
            sd.betas(n - 1) - double(n + sd.n_star) * (n + sd.n_star) * M_PI * M_PI;
        os << n << " " << io::fmt(sd.betas(n - 1)) << " " << io::fmt(sd.Gamma_plus(n - 1).real())
           << " " << io::fmt(sd.Gamma_plus(n - 1).imag()) << " " << io::fmt(dev) << "\n";
    }
    io::write_file((r.out / "spectrum.txt").string(), os.str());
    return 0;
}

int cmd_scan(const Run& r) {
    const double mu_min = r.ini.require_double("scan", "mu_min");
    const double mu_max = r.ini.require_double("scan", "mu_max");
    const int steps = r.ini.get_int("scan", "mu_steps", 16);
    const int n_lo = r.ini.get_int("scan", "n_lo", 1);
    const int n_hi = r.ini.get_int("scan", "n_hi", 6);
    std::vector<double> grid(steps + 1);
    for (int j = 0; j <= steps; ++j) grid[j] = mu_min + (mu_max - mu_min) * double(j) / steps;

    const auto brackets = scan(r.regime, grid, n_lo, n_hi, r.M, r.threads);
    std::ostringstream os;
    os << "# n mu_lo mu_hi\n";
    for (const auto& b : brackets)
        os << b.n << " " << io::fmt(b.mu_lo) << " " << io::fmt(b.mu_hi) << "\n";
    io::write_file((r.out / "scan.txt").string(), os.str());
    return 0;
}

int cmd_certify(const Run& r) {
    const int n_max = r.ini.get_int("certify", "n_max", 12);
    const GenericityCertificate cert = certify(r.regime, r.mu, n_max, r.M);
    io::write_file((r.out / "certificate.txt").string(), cert.to_text());
    return cert.certified() ? 0 : 3;
}

int cmd_synth(const Run& r) {
    const GroundState gs = make_state(r, std::max(r.n_points, 4 * r.M + 1));
    const int n_ctrl = r.ini.get_int("synth", "n_ctrl", 12);
    const SpectralData sd = make_spectrum(r, gs, std::max(r.M / 4, n_ctrl));
    const GenericityCertificate cert = certify(r.regime, gs, sd, n_ctrl);
    if (!cert.certified()) {
        io::write_file((r.out / "certificate.txt").string(), cert.to_text());
        return 3;
    }
    const TargetState target = target_from_config(r, gs, sd);
    const ControlSignal u =
        synthesize_linear_control(target.psi_f, sd, gs, r.T, cert, n_ctrl, r.n_t);
    io::write_file((r.out / "control.dat").string(), io::table2(u.t, u.u, "# t u"));

    std::ostringstream os;
    os << "n_ctrl = " << n_ctrl << "\n";
    os << "lambda_norm = " << io::fmt(u.form->lambda_norm) << "\n";
    os << "gram_condition = " << io::fmt(u.form->gram_condition) << "\n";
    os << "tikhonov = " << io::fmt(u.form->tikhonov) << "\n";
    os << "residual = " << io::fmt(u.form->residual) << "\n";
    io::write_file((r.out / "synth_info.txt").string(), os.str());
    return 0;
}

int cmd_simulate(const Run& r) {
    const GroundState gs = make_state(r, std::max(r.n_points, 4 * r.M + 1));
    const ControlSignal u = control_from_config(r, "simulate");
    std::vector<double> snaps = {0.0, u.T};
    if (r.ini.has("simulate", "snapshots")) {
        const auto list = r.ini.get_list("simulate", "snapshots");
        snaps.assign(list.begin(), list.end());
    }

    SineGrid grid{r.M};
    StateField psi0(grid, Rep::Coefficient);
    psi0.v = sine_coeffs_of([&](double x) { return gs.eval_phi(x); }, r.M).cast<Complex>();
    psi0 = to_rep(psi0, Rep::Point);

    const EvolutionResult res = solve_psi(psi0, u, r.regime, r.dt, snaps);

    std::ostringstream mf;
    mf << "regime = " << regime_name(r.regime) << "\n";
    mf << "mu = " << io::fmt(gs.mu) << "\n";
    mf << "M = " << res.M << "\n";
    mf << "dt = " << io::fmt(res.dt) << "\n";
    mf << "# index time norm file\n";
    const Eigen::VectorXd x = grid.points();
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%04zu.dat", i);
        io::write_file((r.out / name).string(),
                       io::field_table(x, res.snapshots[i].v, true, "# x re im abs2"));
        double norm = 0.0;
        for (std::size_t k = 0; k < res.norm_times.size(); ++k)
            if (std::abs(res.norm_times[k] - res.times[i]) < 0.5 * res.dt) norm = res.norms[k];
        mf << i << " " << io::fmt(res.times[i]) << " " << io::fmt(norm) << " " << name << "\n";
    }
    io::write_file((r.out / "manifest.txt").string(), mf.str());
    return 0;
}

int cmd_steer(const Run& r) {
    const GroundState gs = make_state(r, std::max(r.n_points, 4 * r.M + 1));
    NewtonOptions opt;
    opt.tol = r.ini.get_double("steer", "tol", 1e-5);
    opt.max_iter = r.ini.get_int("steer", "max_iter", 20);
    opt.dt = r.dt;
    opt.n_t = r.n_t;
    opt.N_ctrl = r.ini.get_int("steer", "n_ctrl", 12);
    opt.delta_desk = r.ini.get_double("steer", "delta_desk", 1e-2);

    const SpectralData sd = make_spectrum(r, gs, std::max(r.M / 4, opt.N_ctrl));
    const GenericityCertificate cert = certify(r.regime, gs, sd, opt.N_ctrl);
    io::write_file((r.out / "certificate.txt").string(), cert.to_text());
    if (!cert.certified()) return 3;

    const TargetState target = target_from_config(r, gs, sd);
    const NewtonResult res = newton_steer(target, sd, gs, cert, opt);
    io::write_file((r.out / "steering_log.txt").string(), res.log());
    io::write_file((r.out / "control.dat").string(), io::table2(res.u.t, res.u.u, "# t u"));
    return res.status == NewtonStatus::Converged ? 0 : 4;
}

int cmd_physical(const Run& r) {
    const GroundState gs = make_state(r, std::max(r.n_points, 4 * r.M + 1));
    const ControlSignal u = control_from_config(r, "physical");
    const double kappa = kappa_from_mu(gs, r.hbar, r.m);
    const LengthTrajectory lt = control_to_length(u, r.hbar, r.m);

    std::vector<double> fracs = {0.0, 0.5, 1.0};
    if (r.ini.has("physical", "tau_fracs")) {
        const auto list = r.ini.get_list("physical", "tau_fracs");
        fracs.assign(list.begin(), list.end());
    }
    const int n_z = r.ini.get_int("physical", "n_z", 257);

    std::vector<double> t_snaps;
    for (double f : fracs) t_snaps.push_back(lt.g_of_tau(f * lt.tau_star));

    SineGrid grid{r.M};
    StateField psi0(grid, Rep::Coefficient);
    psi0.v = sine_coeffs_of([&](double x) { return gs.eval_phi(x); }, r.M).cast<Complex>();
    psi0 = to_rep(psi0, Rep::Point);
    const EvolutionResult res = solve_psi(psi0, u, r.regime, r.dt, t_snaps);

    std::ostringstream mf;
    mf << "hbar = " << io::fmt(r.hbar) << "\n";
    mf << "m = " << io::fmt(r.m) << "\n";
    mf << "kappa = " << io::fmt(kappa) << "\n";
    mf << "tau_star = " << io::fmt(lt.tau_star) << "\n";
    mf << "L_start = " << io::fmt(lt.L(0)) << "\n";
    mf << "L_end = " << io::fmt(lt.L(lt.L.size() - 1)) << "\n";
    mf << "# index tau t L norm file\n";
    for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
        const PhysicalSnapshot ps = physical_snapshot(res.snapshots[i], res.times[i], lt, kappa,
                                                      gs, n_z);
        char name[32];
        std::snprintf(name, sizeof(name), "phys_%04zu.dat", i);
        std::ostringstream head;
        head << "# L = " << io::fmt(ps.L) << "\n# z re im abs2";
        io::write_file((r.out / name).string(), io::field_table(ps.z, ps.Phi, false, head.str()));
        mf << i << " " << io::fmt(ps.tau) << " " << io::fmt(ps.t) << " " << io::fmt(ps.L) << " "
           << io::fmt(ps.norm) << " " << name << "\n";
    }
    io::write_file((r.out / "physical_manifest.txt").string(), mf.str());
    io::write_file((r.out / "length.dat").string(), io::table2(lt.tau, lt.L, "# tau L"));
    return 0;
}

} // namespace

int run_command(const Options& opt) {
    try {
        const Run r = load_run(opt);
        if (opt.command == "ground") return cmd_ground(r);
        if (opt.command == "spectrum") return cmd_spectrum(r);
        if (opt.command == "scan") return cmd_scan(r);
        if (opt.command == "certify") return cmd_certify(r);
        if (opt.command == "synth") return cmd_synth(r);
        if (opt.command == "simulate") return cmd_simulate(r);
        if (opt.command == "steer") return cmd_steer(r);
        if (opt.command == "physical") return cmd_physical(r);
        std::cerr << "unknown command: " << opt.command << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Ground states, spectra, genericity certificates and bilinear box controls "
                 "for the cubic Schrodinger equation on (0,1)"};
    app.require_subcommand(1);

    Options opt;
    const char* names[] = {"ground", "spectrum", "scan", "certify",
                           "synth",  "simulate", "steer", "physical"};
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "configuration file")->required();
        sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
        sub->add_option("--seed", opt.seed, "random seed (overrides config)");
        sub->add_option("--threads", opt.threads, "worker threads (overrides config)");
        sub->callback([&opt, name]() { opt.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return run_command(opt);
}

} // namespace nlsbox::cli
