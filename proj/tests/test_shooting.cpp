#include <doctest.h>

#include <cmath>

#include "nlsbox/shooting.hpp"
#include "nlsbox/spectral.hpp"
#include "oracles.hpp"

using namespace nlsbox;

namespace {

// Explicit endpoint solution: with phi = 0 and mu = -/+ pi^2 the column-1 value
// is f(1) = sinh(w)/(2w) + sin(W)/(2W), w = sqrt(beta - pi^2), W = sqrt(beta + pi^2)
// (sinh -> sin for beta < pi^2). Derived by decoupling f +/- g.
double endpoint_f1(double beta) {
    const double p2 = M_PI * M_PI;
    const double W = std::sqrt(beta + p2);
    double first;
    if (beta > p2) {
        const double w = std::sqrt(beta - p2);
        first = std::sinh(w) / (2.0 * w);
    } else if (std::abs(beta - p2) < 1e-12) {
        first = 0.5;
    } else {
        const double w = std::sqrt(p2 - beta);
        first = std::sin(w) / (2.0 * w);
    }
    return first + std::sin(W) / (2.0 * W);
}

} // namespace

TEST_CASE("endpoint shooting against the explicit solution") {
    const GroundState ep = GroundState::endpoint(Regime::Focusing);
    for (int q = 2; q <= 6; ++q) {
        const double beta = (double(q) * q - 1.0) * M_PI * M_PI;
        const ShootingResult r = integrate_fg(Regime::Focusing, ep, beta, FgColumn::Col1);
        CHECK(r.f1 == doctest::Approx(endpoint_f1(beta)).epsilon(1e-10));
    }
    // Same explicit values at the defocusing endpoint (identical system there).
    const GroundState epd = GroundState::endpoint(Regime::Defocusing);
    for (int q = 2; q <= 4; ++q) {
        const double beta = (double(q) * q - 1.0) * M_PI * M_PI;
        const ShootingResult r = integrate_fg(Regime::Defocusing, epd, beta, FgColumn::Col1);
        CHECK(r.f1 == doctest::Approx(endpoint_f1(beta)).epsilon(1e-10));
    }
}

TEST_CASE("linearity and Richardson error estimate") {
    const GroundState gs = GroundState::build(Regime::Focusing, 4.0, 1025);
    const double beta = 40.0;
    const ShootingResult a = integrate_fg(Regime::Focusing, gs, beta, FgColumn::Col1);
    // Doubling the initial slope doubles everything: integrate the scaled system
    // by superposing columns: col1 + col2 equals the solution with both slopes 1.
    const ShootingResult b = integrate_fg(Regime::Focusing, gs, beta, FgColumn::Col2);
    // Superposition check through the matrix at a non-eigenvalue beta.
    const EndpointMatrix em = shooting_matrix(Regime::Focusing, gs, beta);
    CHECK(std::abs(em.det) > 1e-6); // far from the spectrum, well-conditioned
    CHECK(a.err < 1e-10 * std::max(1.0, std::abs(a.f1)));
    CHECK(b.err < 1e-10 * std::max(1.0, std::abs(b.g1)));

    // Step halving: the h vs h/2 difference behaves like a 4th-order scheme.
    const ShootingResult coarse = integrate_fg(Regime::Focusing, gs, beta, FgColumn::Col1, 4e-3);
    const ShootingResult fine = integrate_fg(Regime::Focusing, gs, beta, FgColumn::Col1, 2e-3);
    const double d1 = std::abs(coarse.f1 - fine.f1);
    const ShootingResult finer = integrate_fg(Regime::Focusing, gs, beta, FgColumn::Col1, 1e-3);
    const double d2 = std::abs(fine.f1 - finer.f1);
    CHECK(d1 < 16.0 * d2 * 1.6 + 1e-14);
    CHECK(d1 > d2);
}

TEST_CASE("determinant roots bracket the matrix eigenvalues") {
    const int M = 256;
    for (auto [regime, mu] :
         {std::pair{Regime::Focusing, -M_PI * M_PI + 0.5}, std::pair{Regime::Defocusing, 12.0}}) {
        const GroundState gs = GroundState::build(regime, mu, 4 * M + 1);
        const SpectralData sd = decompose(assemble_block(regime, gs, Flavor::M, M), gs, 16);
        for (int n : {1, 2, 5, 9}) {
            const double beta_mat = sd.betas(n - 1);
            const double beta_shoot = refine_beta_by_det(regime, gs, beta_mat, 1e-10);
            CHECK(beta_shoot == doctest::Approx(beta_mat).epsilon(1e-6));
            // Numerically singular at the eigenvalue; the determinant vanishes
            // linearly, i.e. the smallest eigenvalue of A^T A quadratically.
            CHECK(std::abs(compound_det(regime, gs, beta_shoot).value) < 1e-8);
            const double d1 = std::abs(compound_det(regime, gs, beta_shoot * (1.0 + 1e-3)).value);
            const double d2 = std::abs(compound_det(regime, gs, beta_shoot * (1.0 + 2e-3)).value);
            CHECK(d2 / d1 == doctest::Approx(2.0).epsilon(0.15));
        }
        // For low modes the 2x2 columns are well separated and the direct
        // singular-value ratio confirms the same singularity.
        for (int n : {1, 2}) {
            const double b = refine_beta_by_det(regime, gs, sd.betas(n - 1), 1e-10);
            CHECK(shooting_matrix(regime, gs, b).sv_ratio < 1e-5);
        }
    }
}

TEST_CASE("certificates: certified, degenerate, and scan brackets") {
    const GenericityCertificate cert = certify(Regime::Focusing, -M_PI * M_PI + 0.5, 10, 256);
    CHECK(cert.status == CertStatus::Certified);
    CHECK(cert.certified());
    CHECK(cert.min_margin > 1.0);
    for (int n = 0; n < 10; ++n) CHECK(cert.G_values(n) != 0.0);

    const GenericityCertificate trivial = certify(Regime::Focusing, 2.0, 0, 128);
    CHECK(trivial.status == CertStatus::DegenerateEmpty);
    CHECK(trivial.certified());

    // Serialization carries the status line.
    CHECK(cert.to_text().find("status = certified") != std::string::npos);
}

TEST_CASE("sign-change bracketing on constructed inputs") {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(1.0 + 0.1 * i);

    // Constant sign: empty list.
    Eigen::VectorXd vals = Eigen::VectorXd::Ones(11);
    auto none = find_sign_brackets(3, grid, vals, [](double) { return 1.0; });
    CHECK(none.empty());

    // Injected synthetic flip: exactly one bracket, refined to width 1e-6.
    auto G = [](double mu) { return mu - 1.4371; };
    Eigen::VectorXd vals2(11);
    for (int i = 0; i <= 10; ++i) vals2(i) = G(grid[i]);
    auto one = find_sign_brackets(3, grid, vals2, G);
    REQUIRE(one.size() == 1);
    CHECK(one[0].n == 3);
    CHECK(one[0].mu_hi - one[0].mu_lo <= 1e-6);
    CHECK(one[0].mu_lo <= 1.4371);
    CHECK(one[0].mu_hi >= 1.4371);
}

TEST_CASE("scan over a clean window returns no brackets and is grid-stable") {
    std::vector<double> grid;
    for (int i = 0; i <= 6; ++i) grid.push_back(-M_PI * M_PI + 0.2 + 0.05 * i);
    const auto brackets = scan(Regime::Focusing, grid, 1, 3, 128);
    CHECK(brackets.empty());

    std::vector<double> grid2;
    for (int i = 0; i <= 12; ++i) grid2.push_back(-M_PI * M_PI + 0.2 + 0.025 * i);
    const auto brackets2 = scan(Regime::Focusing, grid2, 1, 3, 128);
    CHECK(brackets2.empty());
}
