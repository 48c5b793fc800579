#ifndef NLSBOX_MOMENTS_HPP
#define NLSBOX_MOMENTS_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace nlsbox {

/// Moment data: find a real nu on (0,T) with
///   int nu = 0,  int (T-t) nu = 0,  int (T-t)^2/2 nu = d0,
///   int nu e^{-i beta_n t} = d_n,  n = 1..N.
struct MomentProblem {
    double T = 0.0;
    Eigen::VectorXd betas;  // ascending positive, gaps increasing
    double d0 = 0.0;
    Eigen::VectorXcd d;
    int n_t = 0;            // output grid resolution (samples = n_t)

    MomentProblem(double T_, Eigen::VectorXd betas_, double d0_, Eigen::VectorXcd d_, int n_t_);
};

struct IllPosedMoments : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Minimal-L2-norm solution as an explicit combination of the constraint
/// functions {1, T-t, (T-t)^2/2, cos(b_n t), sin(b_n t)}: the Gram system is
/// assembled from closed-form integrals and solved with a fixed Tikhonov floor.
class MomentSolution {
public:
    double T = 0.0;
    Eigen::VectorXd betas;
    double c_poly[3] = {0.0, 0.0, 0.0}; // coefficients of 1, (T-t), (T-t)^2/2
    Eigen::VectorXd a_cos, b_sin;       // per frequency
    int n_t = 0;

    double gram_condition = 0.0;
    double tikhonov = 0.0;
    double lambda_norm = 0.0;   // largest singular value of the solution map
    double residual = 0.0;      // Euclidean norm of the constraint residual

    double nu(double t) const;      // the density
    double U(double t) const;       // int_0^t nu
    double intU(double t) const;    // int_0^t U
    Eigen::VectorXd nu_grid() const;
    Eigen::VectorXd U_grid() const;
    Eigen::VectorXd time_grid() const;
    double l2_norm() const;         // ||nu||_{L2(0,T)} from the Gram form

    /// Adds another solution over the same frequencies (used by the Newton loop
    /// to accumulate control increments).
    void add_scaled(const MomentSolution& other, double scale);
};

MomentSolution solve_moments(const MomentProblem& mp);

/// U(t) = int_0^t nu as a grid function; checks that the first two moments of
/// nu vanish (they force U(T) = 0 and int U = 0) before integrating.
Eigen::VectorXd antiderivative_U(const Eigen::VectorXd& nu, double T, double tol = 1e-8);

/// Gram matrix of the constraint functions (exposed for testing).
Eigen::MatrixXd moment_gram(double T, const Eigen::VectorXd& betas);

/// Closed-form moments of a MomentSolution against the constraint functions,
/// ordered as the rows of the Gram matrix.
Eigen::VectorXd applied_moments(const MomentSolution& s);

} // namespace nlsbox

#endif
