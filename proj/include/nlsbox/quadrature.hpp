#ifndef NLSBOX_QUADRATURE_HPP
#define NLSBOX_QUADRATURE_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace nlsbox::quad {

/// Composite Simpson on a uniform grid of samples (any count >= 3; an odd
/// interval at the end is handled by a 3/8 panel).
double simpson(const Eigen::VectorXd& f, double h);
std::complex<double> simpson(const Eigen::VectorXcd& f, double h);

/// Composite Gauss-Legendre (5 nodes per panel) of a callable on [a, b].
double gauss(const std::function<double(double)>& f, double a, double b, int panels);
std::complex<double> gauss_c(const std::function<std::complex<double>(double)>& f,
                             double a, double b, int panels);

/// Filon-type quadrature of f(t) e^{-i w t} dt over [0, T] where f is given by
/// uniform samples: f is replaced by its piecewise-quadratic interpolant and the
/// trigonometric moments are integrated exactly, so the error is O(h^3 f''')
/// uniformly in w. Sample count must be odd.
std::complex<double> filon_exp(const Eigen::VectorXd& f, double T, double w);

/// \int_0^T (T-t)^p f(t) dt for p = 0, 1, 2 by composite Simpson.
double poly_moment(const Eigen::VectorXd& f, double T, int p);

} // namespace nlsbox::quad

#endif
