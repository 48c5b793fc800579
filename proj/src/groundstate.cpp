#include "nlsbox/groundstate.hpp"

#include <cmath>
#include <stdexcept>

#include "nlsbox/quadrature.hpp"

namespace nlsbox {

using elliptic::complete_K;
using elliptic::jacobi_cn_sn;

const char* regime_name(Regime r) {
    return r == Regime::Focusing ? "focusing" : "defocusing";
}

double mu_infimum(Regime r) {
    return r == Regime::Focusing ? -M_PI * M_PI : M_PI * M_PI;
}

double mu_of_modulus(Regime r, double k) {
    const double K = complete_K(k);
    return (r == Regime::Focusing) ? 4.0 * (2.0 * k * k - 1.0) * K * K
                                   : 4.0 * (k * k + 1.0) * K * K;
}

double modulus_from_mu(Regime r, double mu) {
    if (mu <= mu_infimum(r))
        throw std::domain_error("modulus_from_mu: mu at or below the admissible range");
    double lo = 0.0, hi = elliptic::kModulusGuard;
    if (mu_of_modulus(r, hi) < mu)
        throw std::domain_error("modulus_from_mu: mu beyond the modulus guard");
    // mu(k) is strictly increasing on [0, 1).
    for (int i = 0; i < 200 && (hi - lo) > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mu_of_modulus(r, mid) < mu ? lo : hi) = mid;
    }
    const double k = 0.5 * (lo + hi);
    const double back = mu_of_modulus(r, k);
    if (std::abs(back - mu) > 1e-10 * std::max(1.0, std::abs(mu)))
        throw std::runtime_error("modulus_from_mu: modulus equation not reproduced");
    return k;
}

double GroundState::phi_closed(Regime r, double k, double K, double xx) {
    const double A = 2.0 * std::sqrt(2.0) * k * K;
    if (r == Regime::Focusing)
        return A * jacobi_cn_sn(2.0 * K * (xx - 0.5), k).cn;
    return A * jacobi_cn_sn(2.0 * K * xx, k).sn;
}

GroundState GroundState::build(Regime r, double mu, int n_points) {
    if (n_points < 64) throw std::invalid_argument("build_ground_state: n_points >= 64 required");
    GroundState gs;
    gs.regime = r;
    gs.mu = mu;
    gs.k = modulus_from_mu(r, mu);
    gs.Kk = complete_K(gs.k);

    gs.mu_step = 1e-5 * std::max(1.0, std::abs(mu));
    // Keep the central-difference stencil inside the admissible range.
    while (mu - gs.mu_step <= mu_infimum(r)) gs.mu_step *= 0.5;
    gs.k_lo = modulus_from_mu(r, mu - gs.mu_step);
    gs.K_lo = complete_K(gs.k_lo);
    gs.k_hi = modulus_from_mu(r, mu + gs.mu_step);
    gs.K_hi = complete_K(gs.k_hi);

    const double A = 2.0 * std::sqrt(2.0) * gs.k * gs.Kk;
    const double kp = std::sqrt((1.0 - gs.k) * (1.0 + gs.k));
    if (r == Regime::Focusing) {
        gs.dphi0 = 2.0 * A * gs.Kk * kp;
        gs.dphi1 = -2.0 * A * gs.Kk * kp;
    } else {
        gs.dphi0 = 2.0 * A * gs.Kk;
        gs.dphi1 = -2.0 * A * gs.Kk;
    }

    gs.x.resize(n_points);
    gs.phi.resize(n_points);
    gs.dmu_phi.resize(n_points);
    for (int j = 0; j < n_points; ++j) {
        const double xx = double(j) / (n_points - 1);
        gs.x(j) = xx;
        gs.phi(j) = (j == 0 || j == n_points - 1) ? 0.0 : gs.eval_phi(xx);
        gs.dmu_phi(j) = (j == 0 || j == n_points - 1) ? 0.0 : gs.eval_dmu_phi(xx);
    }
    return gs;
}

GroundState GroundState::endpoint(Regime r) {
    GroundState gs;
    gs.regime = r;
    gs.mu = mu_infimum(r);
    gs.k = 0.0;
    gs.Kk = M_PI / 2.0;
    gs.is_endpoint = true;
    const int n = 65;
    gs.x = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
    gs.phi = Eigen::VectorXd::Zero(n);
    gs.dmu_phi = Eigen::VectorXd::Zero(n);
    return gs;
}

double GroundState::eval_phi(double xx) const {
    if (is_endpoint) return 0.0;
    return phi_closed(regime, k, Kk, xx);
}

double GroundState::eval_dphi(double xx) const {
    if (is_endpoint) return 0.0;
    const double A = 2.0 * std::sqrt(2.0) * k * Kk;
    if (regime == Regime::Focusing) {
        const auto j = jacobi_cn_sn(2.0 * Kk * (xx - 0.5), k);
        return -2.0 * A * Kk * j.sn * j.dn;
    }
    const auto j = jacobi_cn_sn(2.0 * Kk * xx, k);
    return 2.0 * A * Kk * j.cn * j.dn;
}

double GroundState::eval_dmu_phi(double xx) const {
    if (is_endpoint) return 0.0;
    return (phi_closed(regime, k_hi, K_hi, xx) - phi_closed(regime, k_lo, K_lo, xx)) /
           (2.0 * mu_step);
}

MassSlope mass_and_convexity(const GroundState& gs) {
    const double h = gs.x(1) - gs.x(0);
    MassSlope ms;
    ms.mass = quad::simpson(Eigen::VectorXd(gs.phi.array().square()), h);
    ms.slope = 2.0 * quad::simpson(Eigen::VectorXd((gs.dmu_phi.array() * gs.phi.array())), h);
    return ms;
}

double kappa_from_mu(const GroundState& gs, double hbar, double m) {
    if (hbar <= 0.0 || m <= 0.0) throw std::domain_error("kappa_from_mu: hbar, m must be positive");
    return hbar * hbar * mass_and_convexity(gs).mass / (2.0 * m);
}

double mu_from_kappa(Regime r, double kappa, double hbar, double m) {
    if (kappa <= 0.0) throw std::domain_error("mu_from_kappa: kappa must be positive");
    const double target_mass = 2.0 * kappa * m / (hbar * hbar);
    auto mass_at = [&](double mu) {
        return mass_and_convexity(GroundState::build(r, mu, 257)).mass;
    };
    const double inf = mu_infimum(r);
    double lo = inf + 1e-9 * std::max(1.0, std::abs(inf));
    double hi = inf + 1.0;
    while (mass_at(hi) < target_mass) {
        hi = inf + 2.0 * (hi - inf);
        if (hi - inf > 1e8) throw std::domain_error("mu_from_kappa: kappa out of reach");
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-13 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (mass_at(mid) < target_mass ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace nlsbox
