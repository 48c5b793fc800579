#ifndef NLSBOX_SHOOTING_HPP
#define NLSBOX_SHOOTING_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "nlsbox/groundstate.hpp"

namespace nlsbox {

struct SpectralData;

enum class FgColumn { Col1, Col2 };

struct ShootingResult {
    double f1 = 0.0, df1 = 0.0, g1 = 0.0, dg1 = 0.0;
    double err = 0.0; // Richardson estimate of the absolute error in f1
};

/// Integrates the coupled second-order pair
///   f'' -/+ (phi^2 - mu) f ... written as f'' = beta g - s (phi^2 - mu) f,
///   g'' = beta f - s (3 phi^2 - mu) g,   s = +1 focusing / -1 defocusing,
/// across [0,1] with classical RK4 at fixed step h <= min(h_max, 0.02/sqrt(beta)),
/// phi evaluated from the closed form. Returns endpoint values of the h/2 run
/// and the step-halving error estimate.
ShootingResult integrate_fg(Regime r, const GroundState& gs, double beta, FgColumn ic,
                            double h_max = 1e-4);

/// Endpoint matrix A = [[f1(1), f2(1)], [g1(1), g2(1)]] with columns normalized
/// to unit length (sign of det and singular-value ratios are unchanged).
struct EndpointMatrix {
    Eigen::Matrix2d A;      // column-normalized
    double det = 0.0;       // of the normalized matrix
    double sv_ratio = 0.0;  // sigma_min / sigma_max
    double err = 0.0;       // integrator error estimate (column 1, normalized)
};
EndpointMatrix shooting_matrix(Regime r, const GroundState& gs, double beta, double h_max = 1e-4);

/// det A(beta) evaluated through the compound (wedge) system: the 6 pairwise
/// minors of two shooting columns obey a linear ODE, so the determinant is
/// obtained without the exponential cancellation of multiplying the columns
/// out. Renormalized on the fly; the returned value is scaled by the final
/// wedge norm (sign and zeros are what matter).
struct CompoundDet {
    double value = 0.0; // w_{fg}(1) / |w(1)|
    double err = 0.0;   // step-halving estimate on `value`
};
CompoundDet compound_det(Regime r, const GroundState& gs, double beta, double h_max = 1e-4);

/// Locates an eigenvalue near `beta_guess` as a sign change of det A(beta),
/// bisected to relative width `rel_tol`. Throws if no bracket is found within
/// a +/-10% window.
double refine_beta_by_det(Regime r, const GroundState& gs, double beta_guess,
                          double rel_tol = 1e-10, double h_max = 1e-4);

/// G_n(mu) = f_{n,mu}^{[1]}(1) evaluated at the n-th positive eigenvalue.
double g_value(Regime r, const GroundState& gs, double beta, double* err = nullptr,
               double h_max = 1e-4);
double G_n(Regime r, double mu, int n, const SpectralData* sd = nullptr);

enum class CertStatus { Certified, Failed, Unresolved, DegenerateEmpty };

struct GenericityCertificate {
    Regime regime;
    double mu = 0.0;
    int n_checked = 0;
    Eigen::VectorXd betas;     // eigenvalues used, n = 1..n_checked
    Eigen::VectorXd G_values;
    Eigen::VectorXd margins;   // |G_n| / (10 x integrator error estimate)
    double min_margin = 0.0;
    CertStatus status = CertStatus::DegenerateEmpty;
    int offending_n = 0;       // for Failed / Unresolved

    bool certified() const {
        return status == CertStatus::Certified || status == CertStatus::DegenerateEmpty;
    }
    std::string to_text() const;
};

/// Certifies |G_n(mu)| > 10 x integrator error for n <= N_max, with each
/// matrix eigenvalue cross-validated against the det-based shooting root.
GenericityCertificate certify(Regime r, double mu, int N_max, int M = 512);
GenericityCertificate certify(Regime r, const GroundState& gs, const SpectralData& sd, int N_max);

struct ScanBracket {
    int n = 0;
    double mu_lo = 0.0, mu_hi = 0.0;
};

/// Sign-change brackets of G_n over an ascending mu grid, each refined by
/// bisection to width 1e-6. The refinement evaluates `G` (mu) for fixed n.
std::vector<ScanBracket> scan(Regime r, const std::vector<double>& mu_grid, int n_lo, int n_hi,
                              int M = 256, int threads = 1);

/// Bracketing core, exposed for constructed inputs: values of one G_n on the
/// grid plus a callable for refinement.
std::vector<ScanBracket> find_sign_brackets(int n, const std::vector<double>& mu_grid,
                                            const Eigen::VectorXd& values,
                                            const std::function<double(double)>& G,
                                            double width = 1e-6);

} // namespace nlsbox

#endif
