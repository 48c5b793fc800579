#include "nlsbox/control_signal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nlsbox/quadrature.hpp"

namespace nlsbox {

namespace {

// Spectral derivative of a grid function vanishing at both ends: expand the
// interior values in sin(k pi t / T) and differentiate the series.
Eigen::VectorXd sine_derivative(const Eigen::VectorXd& u, double T) {
    const int n = int(u.size());
    const int m = n - 2; // interior points
    Eigen::VectorXd b(m);
    for (int k = 1; k <= m; ++k) {
        double s = 0.0;
        for (int j = 1; j <= m; ++j) s += u(j) * std::sin(M_PI * k * j / (m + 1));
        b(k - 1) = 2.0 * s / (m + 1);
    }
    Eigen::VectorXd du(n);
    for (int j = 0; j < n; ++j) {
        const double tt = double(j) / (n - 1);
        double s = 0.0;
        for (int k = 1; k <= m; ++k) s += b(k - 1) * (k * M_PI / T) * std::cos(M_PI * k * tt);
        du(j) = s;
    }
    return du;
}

Eigen::VectorXd cumulative_integral(const Eigen::VectorXd& f, double h) {
    const int n = int(f.size());
    Eigen::VectorXd F(n);
    F(0) = 0.0;
    for (int i = 0; i + 2 < n; i += 2) {
        F(i + 1) = F(i) + h * (5.0 * f(i) + 8.0 * f(i + 1) - f(i + 2)) / 12.0;
        F(i + 2) = F(i) + h * (f(i) + 4.0 * f(i + 1) + f(i + 2)) / 3.0;
    }
    if ((n - 1) % 2 == 1)
        F(n - 1) = F(n - 2) + h * (-f(n - 3) + 8.0 * f(n - 2) + 5.0 * f(n - 1)) / 12.0;
    return F;
}

} // namespace

void ControlSignal::check_invariants(double tol) const {
    const double scale = 1.0 + u.cwiseAbs().maxCoeff();
    if (std::abs(u(0)) > tol * scale || std::abs(u(u.size() - 1)) > tol * scale)
        throw std::invalid_argument("ControlSignal: u must vanish at both ends");
    const double mean = quad::simpson(u, T / (u.size() - 1));
    if (std::abs(mean) > tol * scale * std::max(T, 1.0)) {
        std::ostringstream os;
        os << "ControlSignal: int u = " << mean << " violates the zero-mean constraint";
        throw std::invalid_argument(os.str());
    }
}

ControlSignal ControlSignal::zero(double T, int n_t) {
    ControlSignal c;
    c.T = T;
    c.t = Eigen::VectorXd::LinSpaced(n_t, 0.0, T);
    c.u = Eigen::VectorXd::Zero(n_t);
    c.udot = Eigen::VectorXd::Zero(n_t);
    c.intu = Eigen::VectorXd::Zero(n_t);
    return c;
}

ControlSignal ControlSignal::from_grid(double T, const Eigen::VectorXd& u, double tol) {
    if (u.size() < 5) throw std::invalid_argument("ControlSignal: need at least 5 samples");
    ControlSignal c;
    c.T = T;
    c.t = Eigen::VectorXd::LinSpaced(u.size(), 0.0, T);
    c.u = u;
    c.check_invariants(tol);
    c.udot = sine_derivative(u, T);
    c.intu = cumulative_integral(u, T / (u.size() - 1));
    return c;
}

ControlSignal ControlSignal::from_form(const MomentSolution& s, double tol) {
    ControlSignal c;
    c.T = s.T;
    const int n = s.n_t;
    c.t = Eigen::VectorXd::LinSpaced(n, 0.0, s.T);
    c.u.resize(n);
    c.udot.resize(n);
    c.intu.resize(n);
    for (int i = 0; i < n; ++i) {
        const double tt = c.t(i);
        c.u(i) = s.U(tt);      // the control is the antiderivative of nu
        c.udot(i) = s.nu(tt);
        c.intu(i) = s.intU(tt);
    }
    c.form = s;
    c.check_invariants(tol);
    return c;
}

double ControlSignal::hermite(const Eigen::VectorXd& val, const Eigen::VectorXd& slope,
                              double tt) const {
    const int n = n_t();
    const double h = T / (n - 1);
    if (tt <= 0.0) return val(0);
    if (tt >= T) return val(n - 1);
    int i = std::min(int(tt / h), n - 2);
    const double s = (tt - i * h) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * val(i) + h * h10 * slope(i) + h01 * val(i + 1) + h * h11 * slope(i + 1);
}

double ControlSignal::u_at(double tt) const {
    if (form) return form->U(tt);
    return hermite(u, udot, tt);
}

double ControlSignal::udot_at(double tt) const {
    if (form) return form->nu(tt);
    // Linear interpolation of the spectral derivative.
    const int n = n_t();
    const double h = T / (n - 1);
    if (tt <= 0.0) return udot(0);
    if (tt >= T) return udot(n - 1);
    const int i = std::min(int(tt / h), n - 2);
    const double s = (tt - i * h) / h;
    return (1.0 - s) * udot(i) + s * udot(i + 1);
}

double ControlSignal::intu_at(double tt) const {
    if (form) return form->intU(tt);
    return hermite(intu, u, tt);
}

void ControlSignal::add_scaled(const ControlSignal& other, double scale) {
    if (std::abs(other.T - T) > 1e-12 || other.n_t() != n_t())
        throw std::invalid_argument("ControlSignal::add_scaled: grid mismatch");
    if (form && other.form) {
        form->add_scaled(*other.form, scale);
        for (int i = 0; i < n_t(); ++i) {
            const double tt = t(i);
            u(i) = form->U(tt);
            udot(i) = form->nu(tt);
            intu(i) = form->intU(tt);
        }
        return;
    }
    form.reset();
    u += scale * other.u;
    udot += scale * other.udot;
    intu += scale * other.intu;
}

} // namespace nlsbox
