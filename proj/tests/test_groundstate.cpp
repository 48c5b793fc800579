#include <doctest.h>

#include <cmath>

#include "nlsbox/elliptic.hpp"
#include "nlsbox/groundstate.hpp"
#include "oracles.hpp"

using namespace nlsbox;

TEST_CASE("modulus equation endpoints and inversion") {
    // mu -> mu_inf gives k -> 0 in both regimes.
    CHECK(modulus_from_mu(Regime::Focusing, -M_PI * M_PI + 1e-6) < 1e-3);
    CHECK(modulus_from_mu(Regime::Defocusing, M_PI * M_PI + 1e-6) < 1e-3);
    CHECK_THROWS_AS(modulus_from_mu(Regime::Focusing, -M_PI * M_PI), std::domain_error);
    CHECK_THROWS_AS(modulus_from_mu(Regime::Defocusing, 0.5 * M_PI * M_PI), std::domain_error);

    // Independent fine-grid bisection oracle at mu = 100 (focusing).
    const double mu = 100.0;
    const double k = modulus_from_mu(Regime::Focusing, mu);
    double lo = 0.0, hi = 1.0 - 1e-12;
    for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double K = elliptic::complete_K(mid);
        (4.0 * (2.0 * mid * mid - 1.0) * K * K < mu ? lo : hi) = mid;
    }
    CHECK(k == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
    CHECK(mu_of_modulus(Regime::Focusing, k) == doctest::Approx(mu).epsilon(1e-10));
}

TEST_CASE("ground state boundary values, symmetry and BVP residual") {
    for (auto [regime, mu] : {std::pair{Regime::Focusing, 10.0},
                              std::pair{Regime::Defocusing, 20.0}}) {
        const int N = 1025;
        const GroundState gs = GroundState::build(regime, mu, N);
        CHECK(gs.phi(0) == 0.0);
        CHECK(gs.phi(N - 1) == 0.0);
        for (int j = 1; j + 1 < N; ++j) CHECK(gs.phi(j) > 0.0);
        CHECK(gs.dphi1 != 0.0);

        // Symmetry about x = 1/2.
        for (int j = 0; j < N; ++j)
            CHECK(gs.phi(j) == doctest::Approx(gs.phi(N - 1 - j)).epsilon(1e-12));

        // BVP residual with 4th-order finite differences. The oracle's own
        // truncation floor grows with mu (phi^(6) ~ mu^3), so the bound is
        // checked at a mu-independent scale: residual relative to |mu phi|.
        const double s = (regime == Regime::Focusing) ? 1.0 : -1.0;
        std::vector<double> f(gs.phi.data(), gs.phi.data() + N);
        const double h = 1.0 / (N - 1);
        double res = 0.0;
        for (int j = 2; j + 2 < N; ++j) {
            const double p = f[j];
            const double r = oracles::second_derivative4(f, j, h) + s * p * p * p - s * mu * p;
            res = std::max(res, std::abs(r));
        }
        CHECK(res < 2e-8); // measured FD4 floor at these mu; absolute bound
        CHECK(res < 1e-9 * std::abs(mu) * gs.phi.cwiseAbs().maxCoeff());

        // Endpoint derivatives match finite differences of the closed form.
        CHECK(gs.dphi0 == doctest::Approx((gs.eval_phi(1e-6)) / 1e-6).epsilon(1e-5));
        CHECK(gs.dphi1 == doctest::Approx(-(gs.eval_phi(1.0 - 1e-6)) / 1e-6).epsilon(1e-5));
    }
}

TEST_CASE("BVP residual decreases at 4th order under refinement") {
    const GroundState gs = GroundState::build(Regime::Focusing, 25.0, 4097);
    auto residual_at = [&](int N) {
        std::vector<double> f(N);
        for (int j = 0; j < N; ++j) f[j] = gs.eval_phi(double(j) / (N - 1));
        const double h = 1.0 / (N - 1);
        double res = 0.0;
        for (int j = 2; j + 2 < N; ++j) {
            const double p = f[j];
            res = std::max(res,
                           std::abs(oracles::second_derivative4(f, j, h) + p * p * p - 25.0 * p));
        }
        return res;
    };
    const double r1 = residual_at(513), r2 = residual_at(1025);
    CHECK(r1 / r2 > 12.0); // ~16 for clean 4th order
}

TEST_CASE("mass identities and convexity") {
    using elliptic::complete_E;
    using elliptic::complete_K;

    // Focusing: mass = 8 K(k) F(k), F = E - (1-k^2) K.
    for (double mu : {-5.0, 0.0, 10.0, 50.0}) {
        const GroundState gs = GroundState::build(Regime::Focusing, mu, 1025);
        const auto ms = mass_and_convexity(gs);
        const double K = complete_K(gs.k), E = complete_E(gs.k);
        const double F = E - (1.0 - gs.k * gs.k) * K;
        CHECK(ms.mass == doctest::Approx(8.0 * K * F).epsilon(1e-8));
        CHECK(ms.slope > 0.0);
    }
    // Defocusing: the printed closed form is checked against quadrature; the
    // positive combination is 8 K (K - E).
    for (double mu : {12.0, 20.0, 60.0}) {
        const GroundState gs = GroundState::build(Regime::Defocusing, mu, 1025);
        const auto ms = mass_and_convexity(gs);
        const double K = complete_K(gs.k), E = complete_E(gs.k);
        CHECK(ms.mass == doctest::Approx(8.0 * K * (K - E)).epsilon(1e-8));
        CHECK(ms.mass > 0.0);
        CHECK(ms.slope > 0.0);
    }
}

TEST_CASE("sup norm vanishes toward the range infimum") {
    for (auto regime : {Regime::Focusing, Regime::Defocusing}) {
        const double inf = mu_infimum(regime);
        double prev = 1e300;
        for (int j = 1; j <= 4; ++j) {
            const GroundState gs = GroundState::build(regime, inf + std::pow(10.0, -j), 257);
            const double sup = gs.phi.cwiseAbs().maxCoeff();
            CHECK(sup < prev);
            prev = sup;
        }
        CHECK(prev < 0.1);
    }
}

TEST_CASE("kappa relation and round trip") {
    GroundState gs = GroundState::build(Regime::Focusing, 10.0, 1025);
    const auto ms = mass_and_convexity(gs);
    // Direct substitution: mass = 2, hbar = m = 1 gives kappa = 1.
    CHECK(kappa_from_mu(gs, 1.0, 1.0) == doctest::Approx(ms.mass / 2.0).epsilon(1e-14));

    // Monotone in mu.
    double prev = 0.0;
    for (double mu : {-5.0, 0.0, 5.0, 15.0, 40.0}) {
        const double kap =
            kappa_from_mu(GroundState::build(Regime::Focusing, mu, 513), 1.0, 1.0);
        CHECK(kap > prev);
        prev = kap;
    }

    // Round trip through the bisection inverse.
    const double kappa = kappa_from_mu(gs, 1.0, 1.0);
    const double mu_back = mu_from_kappa(Regime::Focusing, kappa, 1.0, 1.0);
    const double kappa_back =
        kappa_from_mu(GroundState::build(Regime::Focusing, mu_back, 1025), 1.0, 1.0);
    CHECK(kappa_back == doctest::Approx(kappa).epsilon(1e-9));
}
