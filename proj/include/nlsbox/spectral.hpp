#ifndef NLSBOX_SPECTRAL_HPP
#define NLSBOX_SPECTRAL_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "nlsbox/groundstate.hpp"
#include "nlsbox/linop.hpp"

namespace nlsbox {

/// Eigendata of the linearization around the ground-state trajectory, in sine
/// coefficients. Two-component functions are stored stacked: first M entries
/// are the sine coefficients of component 1, last M of component 2.
///
/// Conventions: V_n (real) is the M-form eigenvector for +beta_n with leading
/// sine coefficient of its first component fixed to +2; Phi_n^+ = conj(Jinv V_n)
/// solves L Phi = +i beta Phi; Psi_n^+ is the adjoint eigenvector scaled so
/// <Phi_n^+, Psi_n^+> = 1. The minus families are the conjugates.
struct SpectralData {
    Regime regime;
    double mu = 0.0;
    int M = 0;
    int n_keep = 0;

    Eigen::VectorXd betas;                   // ascending positive, size n_keep
    int n_star = 0;
    bool n_star_stable = true;
    std::vector<bool> unreliable;            // per retained mode

    std::vector<Eigen::VectorXd> V_plus;     // real M-form eigenvectors (2M)
    std::vector<Eigen::VectorXd> W_plus;     // real adjoint eigenvectors (2M)
    std::vector<Eigen::VectorXcd> Phi_plus;  // 2M complex
    std::vector<Eigen::VectorXcd> Psi_plus;  // 2M complex

    Eigen::VectorXcd Gamma_plus;             // control coefficients, size n_keep
    double Gamma0_minus = 0.0;               // (1/2) int phi^2

    Eigen::VectorXcd Phi0_plus, Phi0_minus, Psi0_plus, Psi0_minus; // 2M
    double null_pairing = 0.0;               // <Phi0+, Psi0+> = int phi dmu_phi

    Eigen::VectorXd phi_coeffs, dmu_phi_coeffs, source_coeffs; // size M

    Eigen::VectorXcd phi_plus(int n) const { return Phi_plus.at(n); }
    /// Largest deviation |beta_n - (n + n_star)^2 pi^2| over retained modes.
    double fitted_asymptotic_C() const;
};

/// L2(C^2) inner product of stacked coefficient vectors: int U conj(V).
std::complex<double> inner2(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

/// Positive spectrum of the M-form block operator with biorthogonal
/// eigenvector pairs. Uses the product reduction L^- L^+ u = beta^2 u (the
/// square of the block operator decouples), with left vectors from the inverse
/// eigenbasis and one Rayleigh-quotient refinement per mode.
SpectralData decompose(const BlockOperator& op, const GroundState& gs, int n_keep);

/// Offset in beta_n ~ (n + n_star)^2 pi^2, estimated from the last quartile of
/// the retained modes. `stable` reports whether the estimate was constant there.
int estimate_n_star(const Eigen::VectorXd& betas, bool* stable = nullptr);

/// Fills Gamma_plus by quadrature against Psi_n^- and cross-checks are possible
/// through gamma_boundary.
void gamma_coefficients(SpectralData& sd, const GroundState& gs);

/// Boundary formula phi'(1) g_n'(1) / beta_n for the same coefficient.
std::complex<double> gamma_boundary(const SpectralData& sd, const GroundState& gs, int n);

struct CurvePoint {
    double mu;
    double beta;
};
struct EigenvalueCurve {
    int n = 0;
    std::vector<CurvePoint> points;
    bool crossing_flagged = false;
    double crossing_mu = 0.0;
};

/// Eigenvalue curves F_n(mu) continued by nearest-match with velocity
/// extrapolation; ambiguous matches trigger step bisection (up to 10 levels)
/// before a crossing is flagged.
std::vector<EigenvalueCurve> track_curves(Regime r, double mu_start, double mu_end, int steps,
                                          int n_max, int M, int threads = 1);

} // namespace nlsbox

#endif
