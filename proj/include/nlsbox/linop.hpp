#ifndef NLSBOX_LINOP_HPP
#define NLSBOX_LINOP_HPP

#include <Eigen/Dense>
#include <string>

#include "nlsbox/groundstate.hpp"

namespace nlsbox {

enum class Which { Minus, Plus };
enum class Flavor { L, M };

/// Sine-basis Gram matrix of multiplication by q: Q_mn = 2 int q sin(m.) sin(n.),
/// assembled from oversampled cosine moments of q (exact up to aliasing of the
/// even periodic extension, which is smooth for q = phi^2).
Eigen::MatrixXd multiplication_gram(const GroundState& gs, int M, double factor = 1.0);

/// Scalar operator L^- = -Lap +/- mu -/+ phi^2 or L^+ = -Lap +/- mu -/+ 3 phi^2
/// as a symmetric M x M matrix in the sine basis.
Eigen::MatrixXd assemble_scalar(Regime r, const GroundState& gs, Which which, int M);

struct BlockOperator {
    Regime regime;
    double mu = 0.0;
    Flavor flavor = Flavor::M;
    int M = 0;
    Eigen::MatrixXd mat;     // 2M x 2M
    Eigen::MatrixXd Lminus;  // the scalar factors, kept for the eigensolver
    Eigen::MatrixXd Lplus;
};

/// Block operator: flavor L gives [[0, L^-], [-L^+, 0]]; flavor M gives
/// diag(-Lap, Lap) + couplings, the J-similar real form of i*L.
BlockOperator assemble_block(Regime r, const GroundState& gs, Flavor f, int M);

/// Sine coefficients of the control profile (x phi)', m = 1..M. The profile
/// does not vanish at x = 1, so the cosine-moment route with Euler-Maclaurin
/// boundary corrections is used instead of plain trapezoid sums.
Eigen::VectorXd control_profile_coeffs(const GroundState& gs, int M);

/// Row-major float64 dump with a 16-byte header (8-byte magic, uint64 rows).
void dump_matrix(const std::string& path, const Eigen::MatrixXd& A);
Eigen::MatrixXd load_matrix(const std::string& path);

} // namespace nlsbox

#endif
