#ifndef NLSBOX_GROUNDSTATE_HPP
#define NLSBOX_GROUNDSTATE_HPP

#include <Eigen/Dense>

#include "nlsbox/elliptic.hpp"

namespace nlsbox {

enum class Regime { Focusing, Defocusing };

const char* regime_name(Regime r);

/// Lower end of the admissible chemical-potential range: -pi^2 (focusing),
/// +pi^2 (defocusing). Admissible mu lie strictly above it.
double mu_infimum(Regime r);

/// Solves the modulus equation mu = 4(2k^2-1)K(k)^2 (focusing) or
/// mu = 4(k^2+1)K(k)^2 (defocusing) for k in [0, 1).
double modulus_from_mu(Regime r, double mu);

/// Right side of the modulus equation as a function of k.
double mu_of_modulus(Regime r, double k);

/// Nonlinear ground state in closed elliptic form, with sampled values, the
/// endpoint derivatives, and the mu-derivative (central difference of the
/// closed form, step 1e-5 * max(1, |mu|)).
class GroundState {
public:
    static GroundState build(Regime r, double mu, int n_points);
    /// Degenerate limit state at mu -> -/+ pi^2 with phi identically zero.
    /// Interior invariants (phi > 0, phi'(1) != 0) do not apply to it.
    static GroundState endpoint(Regime r);

    Regime regime;
    double mu = 0.0;
    double k = 0.0;      // elliptic modulus
    double Kk = 0.0;     // K(k)
    bool is_endpoint = false;

    Eigen::VectorXd x;        // n_points uniform samples including both ends
    Eigen::VectorXd phi;      // phi at x (exact zeros at both ends)
    Eigen::VectorXd dmu_phi;  // d phi / d mu at x
    double dphi0 = 0.0, dphi1 = 0.0;

    // Closed-form evaluators, valid at any x in [0,1].
    double eval_phi(double xx) const;
    double eval_dphi(double xx) const;
    double eval_phi2(double xx) const { double p = eval_phi(xx); return p * p; }
    double eval_dmu_phi(double xx) const;

private:
    double mu_step = 0.0;       // central-difference step in mu
    double k_lo = 0.0, K_lo = 0.0; // modulus data at mu - h and mu + h
    double k_hi = 0.0, K_hi = 0.0;

    static double phi_closed(Regime r, double k, double K, double xx);
};

/// mass = int phi^2 (composite quadrature of the samples);
/// slope = 2 <dmu_phi, phi> = d/dmu int phi^2.
struct MassSlope {
    double mass;
    double slope;
};
MassSlope mass_and_convexity(const GroundState& gs);

/// kappa = hbar^2 * mass / (2 m), from |phi_mu|_{L2}^2 = 2 kappa m / hbar^2.
double kappa_from_mu(const GroundState& gs, double hbar, double m);

/// Inverse of mu -> kappa by bisection (kappa is strictly increasing in mu).
double mu_from_kappa(Regime r, double kappa, double hbar, double m);

} // namespace nlsbox

#endif
