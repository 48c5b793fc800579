#include "nlsbox/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace nlsbox::quad {

namespace {

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
const double kGx[5] = {-0.906179845938663992797626878299,
                       -0.538469310105683091036314420700,
                       0.0,
                       0.538469310105683091036314420700,
                       0.906179845938663992797626878299};
const double kGw[5] = {0.236926885056189087514264040720,
                       0.478628670499366468041291514836,
                       0.568888888888888888888888888889,
                       0.478628670499366468041291514836,
                       0.236926885056189087514264040720};

template <typename Scalar>
Scalar simpson_impl(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f, double h) {
    const Eigen::Index n = f.size();
    if (n < 3) throw std::invalid_argument("simpson: need at least 3 samples");
    Eigen::Index m = n;
    Scalar tail{};
    if (n % 2 == 0) { // peel a 3/8 panel off the end
        if (n < 4) throw std::invalid_argument("simpson: even sample count needs n >= 4");
        tail = (3.0 * h / 8.0) * (f(n - 4) + 3.0 * f(n - 3) + 3.0 * f(n - 2) + f(n - 1));
        m = n - 3;
    }
    Scalar s = f(0) + f(m - 1);
    for (Eigen::Index i = 1; i + 1 < m; i += 2) s += 4.0 * f(i);
    for (Eigen::Index i = 2; i + 1 < m; i += 2) s += 2.0 * f(i);
    return (h / 3.0) * s + tail;
}

} // namespace

double simpson(const Eigen::VectorXd& f, double h) { return simpson_impl<double>(f, h); }
std::complex<double> simpson(const Eigen::VectorXcd& f, double h) {
    return simpson_impl<std::complex<double>>(f, h);
}

double gauss(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double s = 0.0;
        for (int i = 0; i < 5; ++i) s += kGw[i] * f(mid + 0.5 * h * kGx[i]);
        total += 0.5 * h * s;
    }
    return total;
}

std::complex<double> gauss_c(const std::function<std::complex<double>(double)>& f,
                             double a, double b, int panels) {
    const double h = (b - a) / panels;
    std::complex<double> total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        std::complex<double> s = 0.0;
        for (int i = 0; i < 5; ++i) s += kGw[i] * f(mid + 0.5 * h * kGx[i]);
        total += 0.5 * h * s;
    }
    return total;
}

std::complex<double> filon_exp(const Eigen::VectorXd& f, double T, double w) {
    const Eigen::Index n = f.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("filon_exp: need an odd sample count >= 3");
    const double h = T / double(n - 1);
    const std::complex<double> I(0.0, 1.0);

    // Moments m_p = \int_{-1}^{1} s^p e^{-i w h s} ds on the reference panel.
    const double th = w * h;
    std::complex<double> m0, m1, m2;
    if (std::abs(th) < 1e-3) {
        const double t2 = th * th;
        m0 = std::complex<double>(2.0 * (1.0 - t2 / 6.0 + t2 * t2 / 120.0), 0.0);
        m1 = -I * (2.0 * th / 3.0) * (1.0 - t2 / 10.0 + t2 * t2 / 280.0);
        m2 = std::complex<double>(2.0 / 3.0 - t2 / 5.0 + t2 * t2 / 84.0, 0.0);
    } else {
        // \int s^p e^{a s} ds with a = -i th, evaluated between -1 and 1.
        const std::complex<double> a = -I * th;
        const std::complex<double> ea = std::exp(a), em = std::exp(-a);
        const std::complex<double> a2 = a * a, a3 = a2 * a;
        m0 = (ea - em) / a;
        m1 = ea * (1.0 / a - 1.0 / a2) - em * (-1.0 / a - 1.0 / a2);
        m2 = ea * (1.0 / a - 2.0 / a2 + 2.0 / a3) - em * (1.0 / a + 2.0 / a2 + 2.0 / a3);
    }

    std::complex<double> total = 0.0;
    for (Eigen::Index j = 0; j + 2 < n; j += 2) {
        const double tc = (j + 1) * h; // panel center
        const double fm = f(j), fc = f(j + 1), fp = f(j + 2);
        // Quadratic through (-1, fm), (0, fc), (1, fp) in the panel variable s.
        const double c0 = fc;
        const double c1 = 0.5 * (fp - fm);
        const double c2 = 0.5 * (fp - 2.0 * fc + fm);
        total += h * std::exp(-I * w * tc) * (c0 * m0 + c1 * m1 + c2 * m2);
    }
    return total;
}

double poly_moment(const Eigen::VectorXd& f, double T, int p) {
    const Eigen::Index n = f.size();
    const double h = T / double(n - 1);
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = T - i * h;
        double wp = 1.0;
        for (int q = 0; q < p; ++q) wp *= w;
        g(i) = wp * f(i);
    }
    return simpson(g, h);
}

} // namespace nlsbox::quad
