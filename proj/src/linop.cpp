#include "nlsbox/linop.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nlsbox/discretization.hpp"

namespace nlsbox {

namespace {

Eigen::MatrixXd gram_from_cosines(const Eigen::VectorXd& c, int M, double factor) {
    Eigen::MatrixXd Q(M, M);
    for (int m = 1; m <= M; ++m)
        for (int n = m; n <= M; ++n) {
            const double val = 0.5 * factor * (c(n - m) - c(n + m));
            Q(m - 1, n - 1) = val;
            Q(n - 1, m - 1) = val;
        }
    return Q;
}

double sign_mu(Regime r) { return r == Regime::Focusing ? 1.0 : -1.0; }

} // namespace

Eigen::MatrixXd multiplication_gram(const GroundState& gs, int M, double factor) {
    if (!gs.is_endpoint && gs.x.size() < M)
        throw std::invalid_argument("multiplication_gram: ground-state resolution below matrix size");
    const auto c = cosine_coeffs_of([&](double xx) { return gs.eval_phi2(xx); }, 2 * M, 4);
    return gram_from_cosines(c, M, factor);
}

Eigen::MatrixXd assemble_scalar(Regime r, const GroundState& gs, Which which, int M) {
    const double s = sign_mu(r); // +1 focusing, -1 defocusing
    const double phi_factor = (which == Which::Minus) ? 1.0 : 3.0;
    Eigen::MatrixXd A = multiplication_gram(gs, M, -s * phi_factor);
    for (int n = 1; n <= M; ++n) A(n - 1, n - 1) += (n * M_PI) * (n * M_PI) + s * gs.mu;
    return A;
}

BlockOperator assemble_block(Regime r, const GroundState& gs, Flavor f, int M) {
    BlockOperator op;
    op.regime = r;
    op.mu = gs.mu;
    op.flavor = f;
    op.M = M;
    op.Lminus = assemble_scalar(r, gs, Which::Minus, M);
    op.Lplus = assemble_scalar(r, gs, Which::Plus, M);
    op.mat.setZero(2 * M, 2 * M);
    if (f == Flavor::L) {
        op.mat.topRightCorner(M, M) = op.Lminus;
        op.mat.bottomLeftCorner(M, M) = -op.Lplus;
    } else {
        // A = -Lap +/- mu -/+ 2 phi^2 = (L^- + L^+)/2, B = -/+ phi^2 = (L^+ - L^-)/2
        const Eigen::MatrixXd A = 0.5 * (op.Lminus + op.Lplus);
        const Eigen::MatrixXd B = 0.5 * (op.Lplus - op.Lminus);
        op.mat.topLeftCorner(M, M) = A;
        op.mat.topRightCorner(M, M) = B;
        op.mat.bottomLeftCorner(M, M) = -B;
        op.mat.bottomRightCorner(M, M) = -A;
    }
    return op;
}

Eigen::VectorXd control_profile_coeffs(const GroundState& gs, int M) {
    const int R = 8 * M;
    const double h = 1.0 / R;
    Eigen::VectorXd g(R - 1);
    for (int j = 1; j < R; ++j) {
        const double xx = j * h;
        g(j - 1) = xx * gs.eval_phi(xx);
    }
    // phi''' (1) from the stationary equation; g = x phi has g'''(1) = phi'''(1).
    const double g3_1 = sign_mu(gs.regime) * gs.mu * gs.dphi1;

    Eigen::VectorXd p(M);
    for (int m = 1; m <= M; ++m) {
        double trap = 0.0;
        for (int j = 1; j < R; ++j) trap += g(j - 1) * std::cos(M_PI * m * j * h);
        trap *= h; // integrand vanishes at both ends
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        const double mp = m * M_PI;
        double integral = trap - (h * h / 12.0) * sgn * gs.dphi1 +
                          (h * h * h * h / 720.0) * sgn * (g3_1 - 3.0 * mp * mp * gs.dphi1);
        p(m - 1) = -2.0 * mp * integral;
    }
    return p;
}

void dump_matrix(const std::string& path, const Eigen::MatrixXd& A) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_matrix: cannot open " + path);
    char magic[8] = {'N', 'L', 'S', 'B', 'M', 'A', 'T', '\0'};
    out.write(magic, 8);
    const std::uint64_t rows = std::uint64_t(A.rows());
    out.write(reinterpret_cast<const char*>(&rows), 8);
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            const double v = A(i, j);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
}

Eigen::MatrixXd load_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_matrix: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, "NLSBMAT\0", 8) != 0)
        throw std::runtime_error("load_matrix: bad magic in " + path);
    std::uint64_t rows = 0;
    in.read(reinterpret_cast<char*>(&rows), 8);
    Eigen::MatrixXd A(rows, rows);
    for (std::uint64_t i = 0; i < rows; ++i)
        for (std::uint64_t j = 0; j < rows; ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), 8);
            A(i, j) = v;
        }
    if (!in) throw std::runtime_error("load_matrix: truncated file " + path);
    return A;
}

} // namespace nlsbox
