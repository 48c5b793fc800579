#include "nlsbox/physmap.hpp"

#include <cmath>
#include <stdexcept>

#include "nlsbox/quadrature.hpp"

namespace nlsbox {

namespace {

double interp_monotone(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double x) {
    const int n = int(xs.size());
    if (x <= xs(0)) return ys(0);
    if (x >= xs(n - 1)) return ys(n - 1);
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (xs(mid) <= x ? lo : hi) = mid;
    }
    // Cubic Lagrange over the four nearest samples (falls back to linear at ends).
    if (lo == 0 || lo >= n - 2) {
        const double s = (x - xs(lo)) / (xs(lo + 1) - xs(lo));
        return (1.0 - s) * ys(lo) + s * ys(lo + 1);
    }
    const int i0 = lo - 1;
    double out = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (a != b) w *= (x - xs(i0 + b)) / (xs(i0 + a) - xs(i0 + b));
        out += w * ys(i0 + a);
    }
    return out;
}

} // namespace

double LengthTrajectory::g_of_tau(double t) const { return interp_monotone(tau, g, t); }
double LengthTrajectory::L_of_tau(double t) const { return interp_monotone(tau, L, t); }
double LengthTrajectory::tau_of_t(double t) const { return interp_monotone(g, tau, t); }

LengthTrajectory control_to_length(const ControlSignal& u, double hbar, double m, int n_out) {
    if (hbar <= 0.0 || m <= 0.0)
        throw std::domain_error("control_to_length: hbar, m must be positive");
    const double T = u.T;
    auto int_u = [&](double g) {
        if (g <= 0.0) return 0.0;
        if (g >= T) return u.intu_at(T);
        return u.intu_at(g);
    };
    auto rhs = [&](double g) { return (hbar / (2.0 * m)) * std::exp(-2.0 * int_u(g)); };

    auto rk4_to = [&](double g0, double tau0, double tau1, int steps) {
        const double h = (tau1 - tau0) / steps;
        double g = g0;
        for (int i = 0; i < steps; ++i) {
            const double k1 = rhs(g);
            const double k2 = rhs(g + 0.5 * h * k1);
            const double k3 = rhs(g + 0.5 * h * k2);
            const double k4 = rhs(g + h * k3);
            g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return g;
    };

    // March until g exceeds T, then secant for tau*.
    const double dtau = (2.0 * m / hbar) * T / n_out;
    double tau_lo = 0.0, g_lo = 0.0;
    double tau_hi = 0.0, g_hi = 0.0;
    for (int guard = 0; guard < 100 * n_out; ++guard) {
        tau_hi = tau_lo + dtau;
        g_hi = rk4_to(g_lo, tau_lo, tau_hi, 1);
        if (g_hi >= T) break;
        tau_lo = tau_hi;
        g_lo = g_hi;
    }
    if (g_hi < T) throw std::runtime_error("control_to_length: failed to reach g = T");
    double ta = tau_lo, ga = g_lo, tb = tau_hi, gb = g_hi;
    for (int it = 0; it < 100 && std::abs(gb - T) > 1e-10; ++it) {
        const double tn = tb + (T - gb) * (tb - ta) / (gb - ga);
        const double gn = rk4_to(g_lo, tau_lo, tn, 4);
        ta = tb;
        ga = gb;
        tb = tn;
        gb = gn;
    }
    const double tau_star = tb;

    LengthTrajectory lt;
    lt.hbar = hbar;
    lt.m = m;
    lt.tau_star = tau_star;
    lt.tau.resize(n_out + 1);
    lt.g.resize(n_out + 1);
    lt.L.resize(n_out + 1);
    const double h = tau_star / n_out;
    double g = 0.0;
    for (int i = 0; i <= n_out; ++i) {
        lt.tau(i) = i * h;
        if (i > 0) g = rk4_to(g, (i - 1) * h, i * h, 1);
        lt.g(i) = g;
        lt.L(i) = std::exp(int_u(g));
    }
    return lt;
}

ControlSignal length_to_control(const LengthTrajectory& lt, double T, int n_t) {
    const int n = int(lt.tau.size());
    if (n < 7) throw std::invalid_argument("length_to_control: trajectory too coarse");
    const double h = lt.tau(1) - lt.tau(0);

    // dL/dtau by 4th-order differences, one-sided at the ends.
    Eigen::VectorXd Ldot(n);
    for (int i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            Ldot(i) = (-lt.L(i + 2) + 8.0 * lt.L(i + 1) - 8.0 * lt.L(i - 1) + lt.L(i - 2)) /
                      (12.0 * h);
        } else if (i < 2) {
            Ldot(i) = (-25.0 * lt.L(i) + 48.0 * lt.L(i + 1) - 36.0 * lt.L(i + 2) +
                       16.0 * lt.L(i + 3) - 3.0 * lt.L(i + 4)) /
                      (12.0 * h);
        } else {
            Ldot(i) = (25.0 * lt.L(i) - 48.0 * lt.L(i - 1) + 36.0 * lt.L(i - 2) -
                       16.0 * lt.L(i - 3) + 3.0 * lt.L(i - 4)) /
                      (12.0 * h);
        }
    }
    Eigen::VectorXd u_tau(n);
    for (int i = 0; i < n; ++i) u_tau(i) = (2.0 * lt.m / lt.hbar) * Ldot(i) * lt.L(i);

    // Resample from t = g(tau) to the uniform grid.
    Eigen::VectorXd u(n_t);
    for (int i = 0; i < n_t; ++i) {
        const double t = T * double(i) / (n_t - 1);
        u(i) = interp_monotone(lt.g, u_tau, t);
    }
    u(0) = u_tau(0);
    u(n_t - 1) = u_tau(n - 1);
    return ControlSignal::from_grid(T, u, 1e-5);
}

PhysicalSnapshot physical_snapshot(const StateField& psi, double t, const LengthTrajectory& lt,
                                   double kappa, const GroundState& gs, int n_z) {
    const double expected = kappa_from_mu(gs, lt.hbar, lt.m);
    if (std::abs(kappa - expected) > 1e-6 * std::max(expected, 1e-300))
        throw std::runtime_error("physical_snapshot: kappa inconsistent with mu");

    PhysicalSnapshot ps;
    ps.t = t;
    ps.tau = lt.tau_of_t(t);
    ps.L = lt.L_of_tau(ps.tau);
    const double amp = lt.hbar / (std::sqrt(2.0 * kappa * lt.m) * ps.L);

    const StateField c = to_rep(psi, Rep::Coefficient);
    ps.z.resize(n_z);
    ps.Phi.resize(n_z);
    for (int i = 0; i < n_z; ++i) {
        const double z = ps.L * double(i + 1) / (n_z + 1);
        const double x = z / ps.L;
        Complex val = 0.0;
        for (int nmode = 1; nmode <= c.grid.M; ++nmode)
            val += c.v(nmode - 1) * std::sin(nmode * M_PI * x);
        ps.z(i) = z;
        ps.Phi(i) = amp * val;
    }
    // Physical norm on (0, L): endpoints vanish, uniform spacing L/(n_z+1).
    Eigen::VectorXcd with_ends(n_z + 2);
    with_ends(0) = 0.0;
    with_ends.tail(1)(0) = 0.0;
    with_ends.segment(1, n_z) = ps.Phi;
    Eigen::VectorXd dens(n_z + 2);
    for (int i = 0; i < n_z + 2; ++i) dens(i) = std::norm(with_ends(i));
    ps.norm = quad::simpson(dens, ps.L / (n_z + 1));
    return ps;
}

} // namespace nlsbox
