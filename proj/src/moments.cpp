#include "nlsbox/moments.hpp"

#include <cmath>
#include <sstream>

#include "nlsbox/quadrature.hpp"

namespace nlsbox {

namespace {

// sin(wT)/w and (1-cos(wT))/w with stable small-argument series.
double S_of(double w, double T) {
    const double z = w * T;
    if (std::abs(z) < 1e-4) return T * (1.0 - z * z / 6.0 + z * z * z * z / 120.0);
    return std::sin(z) / w;
}
double C_of(double w, double T) {
    const double z = w * T;
    if (std::abs(z) < 1e-4) return 0.5 * w * T * T * (1.0 - z * z / 12.0 + z * z * z * z / 360.0);
    return (1.0 - std::cos(z)) / w;
}

// I_c^k = int_0^T s^k cos(beta s) ds and I_s^k likewise with sin.
void poly_trig(double beta, double T, double Ic[3], double Is[3]) {
    const double bT = beta * T;
    const double sn = std::sin(bT), cs = std::cos(bT);
    const double b2 = beta * beta, b3 = b2 * beta;
    Ic[0] = sn / beta;
    Is[0] = (1.0 - cs) / beta;
    Ic[1] = (cs + bT * sn - 1.0) / b2;
    Is[1] = (sn - bT * cs) / b2;
    Ic[2] = (2.0 * bT * cs + (bT * bT - 2.0) * sn) / b3;
    Is[2] = (2.0 * bT * sn - (bT * bT - 2.0) * cs - 2.0) / b3;
}

} // namespace

MomentProblem::MomentProblem(double T_, Eigen::VectorXd betas_, double d0_, Eigen::VectorXcd d_,
                             int n_t_)
    : T(T_), betas(std::move(betas_)), d0(d0_), d(std::move(d_)), n_t(n_t_) {
    if (T <= 0.0) throw std::invalid_argument("MomentProblem: T must be positive");
    const int N = int(betas.size());
    if (d.size() != N) throw std::invalid_argument("MomentProblem: betas/d size mismatch");
    if (n_t < 20 * N) throw std::invalid_argument("MomentProblem: n_t must be >= 20 N");
    double prev_gap = 0.0;
    for (int i = 0; i < N; ++i) {
        if (betas(i) <= 0.0) throw std::invalid_argument("MomentProblem: frequencies must be positive");
        if (i > 0) {
            const double gap = betas(i) - betas(i - 1);
            if (gap <= 0.0) throw std::invalid_argument("MomentProblem: frequencies must ascend");
            if (gap < prev_gap * (1.0 - 1e-9))
                throw std::invalid_argument("MomentProblem: frequency gaps must be nondecreasing");
            prev_gap = gap;
        }
    }
}

Eigen::MatrixXd moment_gram(double T, const Eigen::VectorXd& betas) {
    const int N = int(betas.size());
    const int m = 3 + 2 * N;
    Eigen::MatrixXd G(m, m);

    // Polynomial block: 1, (T-t), (T-t)^2/2.
    G(0, 0) = T;
    G(0, 1) = G(1, 0) = T * T / 2.0;
    G(0, 2) = G(2, 0) = T * T * T / 6.0;
    G(1, 1) = T * T * T / 3.0;
    G(1, 2) = G(2, 1) = T * T * T * T / 8.0;
    G(2, 2) = T * T * T * T * T / 20.0;

    for (int i = 0; i < N; ++i) {
        const double b = betas(i);
        double Ic[3], Is[3];
        poly_trig(b, T, Ic, Is);
        const double sn = std::sin(b * T), cs = std::cos(b * T);
        for (int k = 0; k < 3; ++k) {
            const double scale = (k == 2) ? 0.5 : 1.0; // the (T-t)^2 basis carries 1/2
            const double pc = scale * (cs * Ic[k] + sn * Is[k]); // int (T-t)^k cos
            const double ps = scale * (sn * Ic[k] - cs * Is[k]); // int (T-t)^k sin
            G(k, 3 + 2 * i) = G(3 + 2 * i, k) = pc;
            G(k, 4 + 2 * i) = G(4 + 2 * i, k) = ps;
        }
        for (int j = i; j < N; ++j) {
            const double a = betas(j);
            const double cc = 0.5 * (S_of(a - b, T) + S_of(a + b, T));
            const double ss = 0.5 * (S_of(a - b, T) - S_of(a + b, T));
            // int sin(a t) cos(b t) and int sin(b t) cos(a t)
            const double sc = 0.5 * (C_of(a - b, T) + C_of(a + b, T));
            const double cs2 = 0.5 * (C_of(b - a, T) + C_of(a + b, T));
            G(3 + 2 * i, 3 + 2 * j) = G(3 + 2 * j, 3 + 2 * i) = cc;
            G(4 + 2 * i, 4 + 2 * j) = G(4 + 2 * j, 4 + 2 * i) = ss;
            G(3 + 2 * i, 4 + 2 * j) = G(4 + 2 * j, 3 + 2 * i) = sc;   // cos(b.) sin(a.)
            G(4 + 2 * i, 3 + 2 * j) = G(3 + 2 * j, 4 + 2 * i) = cs2;  // sin(b.) cos(a.)
        }
    }
    return G;
}

MomentSolution solve_moments(const MomentProblem& mp) {
    const int N = int(mp.betas.size());
    const int m = 3 + 2 * N;
    const Eigen::MatrixXd G = moment_gram(mp.T, mp.betas);

    Eigen::VectorXd b(m);
    b(0) = 0.0;
    b(1) = 0.0;
    b(2) = mp.d0;
    for (int i = 0; i < N; ++i) {
        b(3 + 2 * i) = mp.d(i).real();
        b(4 + 2 * i) = -mp.d(i).imag();
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    const Eigen::VectorXd ev = eig.eigenvalues();
    const double lam_max = ev.maxCoeff();
    const double lam_min = ev.minCoeff();
    const double cond = lam_max / std::max(lam_min, 1e-300);
    if (lam_min <= 0.0 || cond > 1e14) {
        int im = 1;
        double gap = 1e300;
        for (int i = 1; i < N; ++i)
            if (mp.betas(i) - mp.betas(i - 1) < gap) {
                gap = mp.betas(i) - mp.betas(i - 1);
                im = i;
            }
        std::ostringstream os;
        os << "solve_moments: Gram condition " << cond << " exceeds 1e14; nearest frequencies "
           << mp.betas(im - 1) << " and " << mp.betas(im);
        throw IllPosedMoments(os.str());
    }

    const double eps = 1e-12 * G.trace();
    const Eigen::VectorXd c =
        eig.eigenvectors() *
        ((eig.eigenvectors().transpose() * b).array() / (ev.array() + eps)).matrix();

    MomentSolution s;
    s.T = mp.T;
    s.betas = mp.betas;
    s.n_t = mp.n_t;
    s.c_poly[0] = c(0);
    s.c_poly[1] = c(1);
    s.c_poly[2] = c(2);
    s.a_cos.resize(N);
    s.b_sin.resize(N);
    for (int i = 0; i < N; ++i) {
        s.a_cos(i) = c(3 + 2 * i);
        s.b_sin(i) = c(4 + 2 * i);
    }
    s.gram_condition = cond;
    s.tikhonov = eps;
    s.residual = (G * c - b).norm();
    double lam = 0.0;
    for (int i = 0; i < m; ++i) lam = std::max(lam, std::sqrt(ev(i)) / (ev(i) + eps));
    s.lambda_norm = lam;
    return s;
}

double MomentSolution::nu(double t) const {
    const double w = T - t;
    double v = c_poly[0] + c_poly[1] * w + c_poly[2] * 0.5 * w * w;
    for (int i = 0; i < betas.size(); ++i)
        v += a_cos(i) * std::cos(betas(i) * t) + b_sin(i) * std::sin(betas(i) * t);
    return v;
}

double MomentSolution::U(double t) const {
    const double w = T - t;
    double v = c_poly[0] * t + c_poly[1] * 0.5 * (T * T - w * w) +
               c_poly[2] * (T * T * T - w * w * w) / 6.0;
    for (int i = 0; i < betas.size(); ++i) {
        const double bt = betas(i) * t;
        v += a_cos(i) * std::sin(bt) / betas(i) + b_sin(i) * (1.0 - std::cos(bt)) / betas(i);
    }
    return v;
}

double MomentSolution::intU(double t) const {
    const double w = T - t;
    double v = 0.5 * c_poly[0] * t * t +
               0.5 * c_poly[1] * (T * T * t + (w * w * w - T * T * T) / 3.0) +
               c_poly[2] * (T * T * T * t + (w * w * w * w - T * T * T * T) / 4.0) / 6.0;
    for (int i = 0; i < betas.size(); ++i) {
        const double bt = betas(i) * t;
        v += a_cos(i) * (1.0 - std::cos(bt)) / (betas(i) * betas(i)) +
             b_sin(i) * (t - std::sin(bt) / betas(i)) / betas(i);
    }
    return v;
}

Eigen::VectorXd MomentSolution::time_grid() const {
    return Eigen::VectorXd::LinSpaced(n_t, 0.0, T);
}

Eigen::VectorXd MomentSolution::nu_grid() const {
    Eigen::VectorXd out(n_t);
    for (int i = 0; i < n_t; ++i) out(i) = nu(T * double(i) / (n_t - 1));
    return out;
}

Eigen::VectorXd MomentSolution::U_grid() const {
    Eigen::VectorXd out(n_t);
    for (int i = 0; i < n_t; ++i) out(i) = U(T * double(i) / (n_t - 1));
    return out;
}

double MomentSolution::l2_norm() const {
    const int N = int(betas.size());
    Eigen::VectorXd c(3 + 2 * N);
    c(0) = c_poly[0];
    c(1) = c_poly[1];
    c(2) = c_poly[2];
    for (int i = 0; i < N; ++i) {
        c(3 + 2 * i) = a_cos(i);
        c(4 + 2 * i) = b_sin(i);
    }
    const Eigen::MatrixXd G = moment_gram(T, betas);
    return std::sqrt(std::max(0.0, double(c.transpose() * G * c)));
}

void MomentSolution::add_scaled(const MomentSolution& other, double scale) {
    if (other.betas.size() != betas.size() || (other.betas - betas).norm() > 1e-12)
        throw std::invalid_argument("MomentSolution::add_scaled: frequency sets differ");
    for (int k = 0; k < 3; ++k) c_poly[k] += scale * other.c_poly[k];
    a_cos += scale * other.a_cos;
    b_sin += scale * other.b_sin;
}

Eigen::VectorXd applied_moments(const MomentSolution& s) {
    const int N = int(s.betas.size());
    Eigen::VectorXd c(3 + 2 * N);
    c(0) = s.c_poly[0];
    c(1) = s.c_poly[1];
    c(2) = s.c_poly[2];
    for (int i = 0; i < N; ++i) {
        c(3 + 2 * i) = s.a_cos(i);
        c(4 + 2 * i) = s.b_sin(i);
    }
    return moment_gram(s.T, s.betas) * c;
}

Eigen::VectorXd antiderivative_U(const Eigen::VectorXd& nu, double T, double tol) {
    const int n = int(nu.size());
    if (n < 3) throw std::invalid_argument("antiderivative_U: need at least 3 samples");
    const double h = T / (n - 1);
    const double m0 = quad::simpson(nu, h);
    const double m1 = quad::poly_moment(nu, T, 1);
    const double scale = 1.0 + nu.cwiseAbs().maxCoeff() * T;
    if (std::abs(m0) > tol * scale || std::abs(m1) > tol * scale) {
        std::ostringstream os;
        os << "antiderivative_U: contract violation, int nu = " << m0 << ", int (T-t) nu = " << m1;
        throw std::invalid_argument(os.str());
    }
    Eigen::VectorXd U(n);
    U(0) = 0.0;
    for (int i = 0; i + 2 < n; i += 2) {
        U(i + 1) = U(i) + h * (5.0 * nu(i) + 8.0 * nu(i + 1) - nu(i + 2)) / 12.0;
        U(i + 2) = U(i) + h * (nu(i) + 4.0 * nu(i + 1) + nu(i + 2)) / 3.0;
    }
    if ((n - 1) % 2 == 1) // trailing interval when the count is even
        U(n - 1) = U(n - 2) + h * (-nu(n - 3) + 8.0 * nu(n - 2) + 5.0 * nu(n - 1)) / 12.0;
    return U;
}

} // namespace nlsbox
