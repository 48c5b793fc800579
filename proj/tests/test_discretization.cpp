#include <doctest.h>

#include <cmath>
#include <random>

#include "nlsbox/discretization.hpp"
#include "nlsbox/quadrature.hpp"
#include "oracles.hpp"

using namespace nlsbox;

namespace {

StateField random_field(int M, unsigned seed, int max_mode) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    StateField f(SineGrid{M}, Rep::Coefficient);
    for (int n = 0; n < max_mode; ++n) f.v(n) = Complex(g(rng), g(rng)) / double((n + 1) * (n + 1));
    return to_rep(f, Rep::Point);
}

} // namespace

TEST_CASE("transform round trip and single-mode orthogonality") {
    const int M = 128;
    SineGrid grid{M};

    StateField s1(grid, Rep::Point);
    for (int j = 0; j < M; ++j) s1.v(j) = std::sin(M_PI * grid.point(j));
    const StateField c1 = sine_forward(s1);
    CHECK(std::abs(c1.v(0) - 1.0) < 1e-12);
    for (int n = 1; n < M; ++n) CHECK(std::abs(c1.v(n)) < 1e-12);

    StateField zero(grid, Rep::Point);
    const StateField cz = sine_forward(zero);
    CHECK(cz.v.norm() == 0.0);

    const StateField f = random_field(M, 3, M);
    const StateField back = sine_inverse(sine_forward(f));
    CHECK((back.v - f.v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Parseval matches quadrature") {
    const int M = 256;
    const StateField f = random_field(M, 11, 40);
    const StateField c = sine_forward(f);
    const double parseval = 0.5 * c.v.squaredNorm();
    // Quadrature of |f|^2 over (0,1) via fine evaluation of the sine series.
    auto fval = [&](double x) {
        Complex v = 0.0;
        for (int n = 1; n <= M; ++n) v += c.v(n - 1) * std::sin(n * M_PI * x);
        return std::norm(v);
    };
    const double ref = oracles::integrate(fval, 0.0, 1.0, 1e-13);
    CHECK(parseval == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("h_norm single-mode scalings") {
    const int M = 64;
    SineGrid grid{M};
    StateField s1(grid, Rep::Coefficient);
    s1.v(0) = 1.0; // sin(pi x)
    CHECK(h_norm(s1, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(h_norm(s1, 3.0) ==
          doctest::Approx(std::pow(M_PI, 3) / std::sqrt(2.0)).epsilon(1e-14));
    StateField s2(grid, Rep::Coefficient);
    s2.v(1) = 1.0; // sin(2 pi x)
    CHECK(h_norm(s2, 1.0) == doctest::Approx(2.0 * M_PI / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("laplacian eigenfunctions and finite-difference oracle") {
    const int M = 256;
    SineGrid grid{M};
    for (int mode : {1, 3}) {
        StateField s(grid, Rep::Coefficient);
        s.v(mode - 1) = 1.0;
        const StateField L = laplacian_apply(s);
        CHECK(std::abs(L.v(mode - 1) - double(mode * mode) * M_PI * M_PI) < 1e-10);
    }

    // Same smooth function on two grids: the deviation from 4th-order finite
    // differences must drop by ~2^4 under doubling.
    StateField coeffs(SineGrid{8}, Rep::Coefficient);
    {
        std::mt19937 rng(5);
        std::normal_distribution<double> g;
        for (int n = 0; n < 8; ++n) coeffs.v(n) = Complex(g(rng), g(rng));
    }
    auto fd_deviation = [&](int Mloc) {
        SineGrid gl{Mloc};
        StateField f(gl, Rep::Coefficient);
        f.v.setZero();
        f.v.head(8) = coeffs.v;
        const StateField Lf = to_rep(laplacian_apply(f), Rep::Point);
        const StateField fp = to_rep(f, Rep::Point);
        std::vector<double> fr(Mloc + 2), fi(Mloc + 2);
        fr[0] = fi[0] = fr[Mloc + 1] = fi[Mloc + 1] = 0.0;
        for (int j = 0; j < Mloc; ++j) {
            fr[j + 1] = fp.v(j).real();
            fi[j + 1] = fp.v(j).imag();
        }
        const double h = gl.dx();
        double err = 0.0;
        for (int j = 2; j < Mloc - 2; ++j) {
            const double d2r = oracles::second_derivative4(fr, j + 1, h);
            const double d2i = oracles::second_derivative4(fi, j + 1, h);
            err = std::max(err, std::abs(-d2r - Lf.v(j).real()));
            err = std::max(err, std::abs(-d2i - Lf.v(j).imag()));
        }
        return err;
    };
    const double e1 = fd_deviation(256), e2 = fd_deviation(512);
    CHECK(e1 < 5e-3);
    CHECK(e1 / e2 > 12.0);
}

TEST_CASE("coefficient extraction of smooth callables") {
    const int M = 64;
    const auto a = sine_coeffs_of([](double x) { return std::sin(3.0 * M_PI * x); }, M);
    for (int n = 1; n <= M; ++n)
        CHECK(std::abs(a(n - 1) - (n == 3 ? 1.0 : 0.0)) < 1e-13);
    const auto c = cosine_coeffs_of([](double x) { return std::cos(2.0 * M_PI * x); }, M);
    for (int p = 0; p <= M; ++p)
        CHECK(std::abs(c(p) - (p == 2 ? 1.0 : 0.0)) < 1e-13);
}

TEST_CASE("filon quadrature handles high frequencies") {
    const int n = 2001;
    const double T = 1.0;
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) {
        const double t = T * double(i) / (n - 1);
        f(i) = std::sin(2.0 * M_PI * t) + 0.3 * t * (1.0 - t);
    }
    for (double w : {0.0, 5.0, 300.0, 2500.0}) {
        const auto got = quad::filon_exp(f, T, w);
        const double re = oracles::integrate(
            [&](double t) {
                return (std::sin(2.0 * M_PI * t) + 0.3 * t * (1.0 - t)) * std::cos(w * t);
            },
            0.0, T, 1e-14);
        const double im = oracles::integrate(
            [&](double t) {
                return -(std::sin(2.0 * M_PI * t) + 0.3 * t * (1.0 - t)) * std::sin(w * t);
            },
            0.0, T, 1e-14);
        CHECK(got.real() == doctest::Approx(re).epsilon(5e-8));
        CHECK(std::abs(got.imag() - im) < 5e-9);
    }
}
