#include <doctest.h>

#include <cmath>
#include <random>

#include "nlsbox/discretization.hpp"
#include "nlsbox/spectral.hpp"
#include "oracles.hpp"

using namespace nlsbox;

namespace {

SpectralData spectrum_at(Regime r, double mu, int M, int n_keep) {
    const GroundState gs = GroundState::build(r, mu, 4 * M + 1);
    return decompose(assemble_block(r, gs, Flavor::M, M), gs, n_keep);
}

Eigen::VectorXcd apply_real(const Eigen::MatrixXd& A, const Eigen::VectorXcd& z) {
    return A * z.real() + Complex(0.0, 1.0) * (A * z.imag());
}

} // namespace

TEST_CASE("endpoint spectrum equals [(n+1)^2 - 1] pi^2") {
    const int M = 256;
    const GroundState ep = GroundState::endpoint(Regime::Focusing);
    const SpectralData sd = decompose(assemble_block(Regime::Focusing, ep, Flavor::M, M), ep, 24);
    for (int n = 1; n <= 20; ++n) {
        const double expect = (double(n + 1) * (n + 1) - 1.0) * M_PI * M_PI;
        CHECK(sd.betas(n - 1) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(sd.n_star == 1);
    CHECK(sd.n_star_stable);
    CHECK(sd.fitted_asymptotic_C() == doctest::Approx(M_PI * M_PI).epsilon(1e-10));

    // Small perturbation of the endpoint keeps the offset.
    const SpectralData sp = spectrum_at(Regime::Focusing, -M_PI * M_PI + 0.05, M, 24);
    CHECK(sp.n_star == 1);
    CHECK(sp.n_star_stable);
}

TEST_CASE("product reduction matches the direct 2M eigensolve") {
    const int M = 96;
    const double mu = 5.0;
    const GroundState gs = GroundState::build(Regime::Focusing, mu, 4 * M + 1);
    const BlockOperator opM = assemble_block(Regime::Focusing, gs, Flavor::M, M);
    const SpectralData sd = decompose(opM, gs, 16);

    Eigen::EigenSolver<Eigen::MatrixXd> es(opM.mat, false);
    std::vector<double> pos;
    for (int i = 0; i < 2 * M; ++i) {
        const auto lam = es.eigenvalues()(i);
        if (lam.real() > 1e-6 && std::abs(lam.imag()) < 1e-6 * std::abs(lam)) pos.push_back(lam.real());
    }
    std::sort(pos.begin(), pos.end());
    REQUIRE(int(pos.size()) >= 16);
    for (int n = 0; n < 16; ++n)
        CHECK(sd.betas(n) == doctest::Approx(pos[n]).epsilon(1e-10));

    // Sp(L) = i Sp(M): the L-form eigenvalues are +/- i beta.
    const BlockOperator opL = assemble_block(Regime::Focusing, gs, Flavor::L, M);
    Eigen::EigenSolver<Eigen::MatrixXd> esL(opL.mat, false);
    std::vector<double> imag_pos;
    for (int i = 0; i < 2 * M; ++i) {
        const auto lam = esL.eigenvalues()(i);
        if (lam.imag() > 1e-6) {
            CHECK(std::abs(lam.real()) < 1e-6 * std::abs(lam.imag()) + 1e-6);
            imag_pos.push_back(lam.imag());
        }
    }
    std::sort(imag_pos.begin(), imag_pos.end());
    REQUIRE(int(imag_pos.size()) >= 16);
    for (int n = 0; n < 16; ++n)
        CHECK(sd.betas(n) == doctest::Approx(imag_pos[n]).epsilon(1e-8));
}

TEST_CASE("eigenvector relations in both forms") {
    const int M = 128;
    for (auto [regime, mu] :
         {std::pair{Regime::Focusing, -M_PI * M_PI + 0.5}, std::pair{Regime::Defocusing, 13.0}}) {
        const GroundState gs = GroundState::build(regime, mu, 4 * M + 1);
        const BlockOperator opM = assemble_block(regime, gs, Flavor::M, M);
        const BlockOperator opL = assemble_block(regime, gs, Flavor::L, M);
        const SpectralData sd = decompose(opM, gs, 20);
        const Complex I(0.0, 1.0);
        for (int n = 0; n < 20; n += 3) {
            const double beta = sd.betas(n);
            // M V = beta V and M^T W = beta W.
            CHECK((opM.mat * sd.V_plus[n] - beta * sd.V_plus[n]).norm() <
                  1e-7 * beta * sd.V_plus[n].norm());
            CHECK((opM.mat.transpose() * sd.W_plus[n] - beta * sd.W_plus[n]).norm() <
                  1e-7 * beta * sd.W_plus[n].norm());
            // L Phi^+ = i beta Phi^+, L Phi^- = -i beta Phi^-.
            const Eigen::VectorXcd r1 =
                apply_real(opL.mat, sd.Phi_plus[n]) - I * beta * sd.Phi_plus[n];
            CHECK(r1.norm() < 1e-7 * beta * sd.Phi_plus[n].norm());
            const Eigen::VectorXcd phim = sd.Phi_plus[n].conjugate();
            const Eigen::VectorXcd r2 = apply_real(opL.mat, phim) + I * beta * phim;
            CHECK(r2.norm() < 1e-7 * beta * phim.norm());
            // L^* Psi^+ = -i beta Psi^+.
            const Eigen::VectorXcd r3 =
                apply_real(opL.mat.transpose(), sd.Psi_plus[n]) + I * beta * sd.Psi_plus[n];
            CHECK(r3.norm() < 1e-7 * beta * sd.Psi_plus[n].norm());
        }
    }
}

TEST_CASE("biorthogonality across families and the null space") {
    const int M = 256;
    for (auto [regime, mu] :
         {std::pair{Regime::Focusing, -M_PI * M_PI + 0.5}, std::pair{Regime::Defocusing, 15.0}}) {
        const SpectralData sd = spectrum_at(regime, mu, M, 24);
        for (int mth = 0; mth < 20; ++mth) {
            for (int n = 0; n < 20; ++n) {
                const Complex pp = inner2(sd.Phi_plus[mth], sd.Psi_plus[n]);
                const Complex pm = inner2(sd.Phi_plus[mth], sd.Psi_plus[n].conjugate());
                const double target = (mth == n) ? 1.0 : 0.0;
                CHECK(std::abs(pp - target) < 1e-8);
                CHECK(std::abs(pm) < 1e-8);
            }
            // Oscillatory modes against the generalized null space.
            CHECK(std::abs(inner2(sd.Phi_plus[mth], sd.Psi0_plus)) < 1e-7);
            CHECK(std::abs(inner2(sd.Phi_plus[mth], sd.Psi0_minus)) < 1e-7);
            CHECK(std::abs(inner2(sd.Phi0_plus, sd.Psi_plus[mth])) < 1e-7);
            CHECK(std::abs(inner2(sd.Phi0_minus, sd.Psi_plus[mth])) < 1e-7);
        }
        CHECK(std::abs(inner2(sd.Phi0_plus, sd.Psi0_minus)) < 1e-10);
        CHECK(std::abs(inner2(sd.Phi0_minus, sd.Psi0_plus)) < 1e-10);
        CHECK(inner2(sd.Phi0_plus, sd.Psi0_plus).real() ==
              doctest::Approx(sd.null_pairing).epsilon(1e-10));
        CHECK(std::abs(sd.null_pairing) > 1e-4);
    }
}

TEST_CASE("eigenvector asymptotics with the anchored normalization") {
    const int M = 256;
    const SpectralData sd = spectrum_at(Regime::Focusing, 10.0, M, 64);
    const Eigen::MatrixXd& S = sine_matrix(M);
    double c_first = 0.0, c_second = 0.0;
    for (int n = 0; n < sd.n_keep; ++n) {
        const Eigen::VectorXd first = S * sd.V_plus[n].head(M);
        const Eigen::VectorXd second = S * sd.V_plus[n].tail(M);
        Eigen::VectorXd target(M);
        for (int j = 0; j < M; ++j)
            target(j) = 2.0 * std::sin((n + 1 + sd.n_star) * M_PI * (j + 1) / double(M + 1));
        const double dev = (first - target).cwiseAbs().maxCoeff() * (n + 1);
        const double dev2 = second.cwiseAbs().maxCoeff() * (n + 1) * (n + 1);
        c_first = std::max(c_first, dev);
        c_second = std::max(c_second, dev2);
    }
    CHECK(c_first < 100.0);
    CHECK(c_second < 300.0);

    // Fitted constants stable under refinement (M -> 2M, same retained range).
    const SpectralData sd2 = spectrum_at(Regime::Focusing, 10.0, 2 * M, 64);
    const Eigen::MatrixXd& S2 = sine_matrix(2 * M);
    double c_first2 = 0.0;
    for (int n = 0; n < 64; ++n) {
        const Eigen::VectorXd first = S2 * sd2.V_plus[n].head(2 * M);
        Eigen::VectorXd target(2 * M);
        for (int j = 0; j < 2 * M; ++j)
            target(j) = 2.0 * std::sin((n + 1 + sd2.n_star) * M_PI * (j + 1) / double(2 * M + 1));
        c_first2 = std::max(c_first2, (first - target).cwiseAbs().maxCoeff() * (n + 1));
    }
    CHECK(std::abs(c_first2 - c_first) < 0.5 * c_first);
}

TEST_CASE("Gamma coefficients: quadrature vs boundary formula and tail law") {
    const int M = 512;
    for (auto [regime, mu] :
         {std::pair{Regime::Focusing, 10.0}, std::pair{Regime::Defocusing, 15.0}}) {
        const GroundState gs = GroundState::build(regime, mu, 4 * M + 1);
        const SpectralData sd = decompose(assemble_block(regime, gs, Flavor::M, M), gs, M / 4);

        CHECK(sd.Gamma0_minus > 0.0);
        const auto ms = mass_and_convexity(gs);
        CHECK(sd.Gamma0_minus == doctest::Approx(0.5 * ms.mass).epsilon(1e-9));

        for (int n = 0; n < sd.n_keep / 2; ++n) {
            const Complex bd = gamma_boundary(sd, gs, n);
            CHECK(std::abs(sd.Gamma_plus(n) - bd) < 1e-5 * std::abs(bd));
        }
        // Tail law: n^2 |Gamma_n - (-1)^{n + n* + 1} phi'(1) / (pi n)| bounded.
        double worst = 0.0;
        for (int n = 10; n <= sd.n_keep; ++n) {
            const double lead =
                ((n + sd.n_star) % 2 == 0 ? -1.0 : 1.0) * gs.dphi1 / (M_PI * n);
            worst = std::max(worst,
                             double(n) * n * std::abs(sd.Gamma_plus(n - 1) - Complex(lead)));
        }
        CHECK(worst < 50.0 * std::abs(gs.dphi1));
    }
}

TEST_CASE("H3-type coefficient bound with constant stable under doubling") {
    auto bound_constant = [](int M) {
        const SpectralData sd = spectrum_at(Regime::Focusing, 6.0, M, M / 4);
        std::mt19937 rng(23);
        std::normal_distribution<double> g;
        double cmax = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            SineGrid grid{M};
            StateField z1(grid, Rep::Coefficient), z2(grid, Rep::Coefficient);
            for (int k = 0; k < 20; ++k) {
                z1.v(k) = g(rng);
                z2.v(k) = g(rng);
            }
            Eigen::VectorXcd Z(2 * M);
            Z.head(M) = z1.v;
            Z.tail(M) = z2.v;
            const double h3 = std::sqrt(std::pow(h_norm(z1, 3.0), 2) + std::pow(h_norm(z2, 3.0), 2));
            double sum = 0.0;
            for (int n = 1; n <= sd.n_keep; ++n) {
                const Complex c = inner2(Z, sd.Psi_plus[n - 1].conjugate());
                sum += std::pow(double(n) * n * n * std::abs(c), 2);
            }
            cmax = std::max(cmax, std::sqrt(sum) / h3);
        }
        return cmax;
    };
    const double c1 = bound_constant(128), c2 = bound_constant(256);
    CHECK(c1 < 10.0);
    CHECK(std::abs(c2 - c1) < 0.25 * c1);
}

TEST_CASE("curve tracking: degenerate scan and endpoint anchoring") {
    // mu fixed: constant curves.
    const auto flat = track_curves(Regime::Focusing, 3.0, 3.0 + 1e-12, 2, 4, 96);
    for (const auto& cv : flat) {
        CHECK(!cv.crossing_flagged);
        for (const auto& pt : cv.points)
            CHECK(pt.beta == doctest::Approx(cv.points.front().beta).epsilon(1e-8));
    }
    // Anchoring at the admissible-range end.
    const double inf = -M_PI * M_PI;
    const auto curves = track_curves(Regime::Focusing, inf + 1e-6, inf + 0.3, 6, 4, 128);
    for (const auto& cv : curves) {
        const double expect = (double(cv.n + 1) * (cv.n + 1) - 1.0) * M_PI * M_PI;
        CHECK(cv.points.front().beta == doctest::Approx(expect).epsilon(1e-4));
        // Continuity along the curve: no jumps beyond the sample spacing scale.
        for (std::size_t j = 1; j < cv.points.size(); ++j)
            CHECK(std::abs(cv.points[j].beta - cv.points[j - 1].beta) < 2.0);
    }
}
