#ifndef NLSBOX_DISCRETIZATION_HPP
#define NLSBOX_DISCRETIZATION_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace nlsbox {

using Complex = std::complex<double>;

/// Interior collocation points x_j = j/(M+1), j = 1..M, of the sine basis
/// sin(n pi x) on (0,1) with homogeneous Dirichlet ends.
struct SineGrid {
    int M = 0;

    double dx() const { return 1.0 / (M + 1); }
    double point(int j) const { return (j + 1) * dx(); } // j = 0..M-1
    Eigen::VectorXd points() const;
};

enum class Rep { Point, Coefficient };

/// Complex grid function on (0,1); Dirichlet ends are implicit. `v` holds either
/// point values at the grid or sine coefficients a_n of f = sum a_n sin(n pi x).
struct StateField {
    SineGrid grid;
    Rep rep = Rep::Point;
    Eigen::VectorXcd v;

    StateField() = default;
    StateField(SineGrid g, Rep r) : grid(g), rep(r), v(Eigen::VectorXcd::Zero(g.M)) {}
};

/// Cached DST-I matrix S_{jn} = sin((j+1)(n+1) pi / (M+1)); S is symmetric and
/// S * S = (M+1)/2 * Id, so the transform pair is an exact round trip.
const Eigen::MatrixXd& sine_matrix(int M);

StateField sine_forward(const StateField& f);  // point -> coefficient
StateField sine_inverse(const StateField& f);  // coefficient -> point
StateField to_rep(const StateField& f, Rep r);

/// Discrete H^s_(0)-type norm (1/2 sum |(n pi)^s a_n|^2)^{1/2}.
double h_norm(const StateField& f, double s);

/// Multiplies sine coefficient n by (n pi)^2.
StateField laplacian_apply(const StateField& f);

/// L2 inner product int f conj(g) dx, exact for the sine interpolants.
Complex l2_inner(const StateField& f, const StateField& g);

StateField field_from_function(const SineGrid& g, const std::function<Complex(double)>& fn);

/// Sine coefficients a_n (n = 1..M) of a smooth callable, computed on an
/// oversampled trapezoid grid; spectrally accurate when the odd periodic
/// extension of f is smooth.
Eigen::VectorXd sine_coeffs_of(const std::function<double(double)>& f, int M, int oversample = 4);

/// Cosine coefficients c_p = 2 int f cos(p pi x) dx, p = 0..P, same scheme.
Eigen::VectorXd cosine_coeffs_of(const std::function<double(double)>& f, int P, int oversample = 4);

} // namespace nlsbox

#endif
