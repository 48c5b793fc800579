#include "nlsbox/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>

#include "nlsbox/discretization.hpp"

namespace nlsbox {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

std::complex<double> inner2(const VectorXcd& u, const VectorXcd& v) {
    return 0.5 * v.dot(u); // dot conjugates its first argument
}

double SpectralData::fitted_asymptotic_C() const {
    double c = 0.0;
    for (int n = 1; n <= n_keep; ++n) {
        const double pred = double(n + n_star) * (n + n_star) * M_PI * M_PI;
        c = std::max(c, std::abs(betas(n - 1) - pred));
    }
    return c;
}

int estimate_n_star(const VectorXd& betas, bool* stable) {
    const int n = int(betas.size());
    if (n < 16) throw std::invalid_argument("estimate_n_star: need at least 16 retained modes");
    const int lo = (3 * n) / 4;
    int first = 0;
    bool ok = true;
    for (int i = lo; i < n; ++i) {
        const int est = int(std::lround(std::sqrt(betas(i)) / M_PI - (i + 1)));
        if (i == lo) first = est;
        else if (est != first) ok = false;
    }
    if (stable) *stable = ok;
    return first;
}

namespace {

struct RawMode {
    double lambda = 0.0; // refined beta^2
    int column = 0;
    bool unreliable = false;
};

} // namespace

SpectralData decompose(const BlockOperator& op, const GroundState& gs, int n_keep) {
    const int M = op.M;
    if (n_keep > M / 4)
        throw std::invalid_argument("decompose: n_keep must not exceed M/4");
    if (op.flavor != Flavor::M)
        throw std::invalid_argument("decompose: expects the M-form block operator");

    // beta^2 spectrum of C = L^- L^+ (the square of the block operator is
    // block-diagonal with this product on the (x + y) component).
    const MatrixXd C = op.Lminus * op.Lplus;
    Eigen::EigenSolver<MatrixXd> es(C, true);
    if (es.info() != Eigen::Success) throw std::runtime_error("decompose: eigensolver failed");
    const MatrixXcd V = es.eigenvectors();
    const MatrixXcd Vinv = Eigen::PartialPivLU<MatrixXcd>(V).inverse();
    const VectorXcd lam = es.eigenvalues();

    // Rayleigh-refined eigenvalues; left/right vectors are exactly biorthogonal
    // in the Euclidean dot product by construction.
    std::vector<RawMode> modes(M);
    std::vector<VectorXd> us(M), ss(M);
    for (int i = 0; i < M; ++i) {
        VectorXd u = V.col(i).real();
        VectorXd s = Vinv.row(i).real().transpose();
        const double imag_res = V.col(i).imag().norm();
        const double dot = s.dot(u);
        const double rq = (std::abs(dot) > 1e-300) ? s.dot(C * u) / dot : lam(i).real();
        modes[i].lambda = rq;
        modes[i].column = i;
        modes[i].unreliable = (imag_res > 1e-8 * u.norm()) ||
                              (std::abs(lam(i).imag()) > 1e-8 * std::abs(lam(i)) + 1e-8);
        us[i] = std::move(u);
        ss[i] = std::move(s);
    }
    std::sort(modes.begin(), modes.end(),
              [](const RawMode& a, const RawMode& b) { return a.lambda < b.lambda; });

    // Drop the generalized null space (one eigenvalue of C at zero) and any
    // spurious non-positive values left by rounding.
    const double lam_max = modes.back().lambda;
    const double floor = std::max(1e-10 * lam_max, 1e4 * 2.2e-16 * lam_max);
    std::size_t start = 0;
    while (start < modes.size() && modes[start].lambda <= floor) ++start;
    if (int(modes.size() - start) < n_keep)
        throw std::runtime_error("decompose: fewer positive modes than requested");

    SpectralData sd;
    sd.regime = op.regime;
    sd.mu = op.mu;
    sd.M = M;
    sd.n_keep = n_keep;
    sd.betas.resize(n_keep);
    sd.unreliable.assign(n_keep, false);
    for (int n = 0; n < n_keep; ++n) {
        sd.betas(n) = std::sqrt(modes[start + n].lambda);
        sd.unreliable[n] = modes[start + n].unreliable;
        // Nearly degenerate pair: flag both, keep going.
        const double b = modes[start + n].lambda;
        if (n + 1 < int(modes.size() - start)) {
            const double gap = modes[start + n + 1].lambda - b;
            if (gap < 1e-8 * b) sd.unreliable[n] = true;
        }
        if (n > 0 && b - modes[start + n - 1].lambda < 1e-8 * b) sd.unreliable[n] = true;
    }

    sd.n_star = estimate_n_star(sd.betas, &sd.n_star_stable);

    sd.V_plus.resize(n_keep);
    sd.W_plus.resize(n_keep);
    sd.Phi_plus.resize(n_keep);
    sd.Psi_plus.resize(n_keep);
    const std::complex<double> I(0.0, 1.0);
    for (int n = 0; n < n_keep; ++n) {
        const auto& mode = modes[start + n];
        const double beta = sd.betas(n);
        const VectorXd& u = us[mode.column];
        const VectorXd& s = ss[mode.column];
        const VectorXd v = op.Lplus * u / beta;
        const VectorXd d = op.Lminus * s / beta;

        VectorXd Vn(2 * M), Wn(2 * M);
        Vn.head(M) = 0.5 * (u + v);
        Vn.tail(M) = 0.5 * (u - v);
        Wn.head(M) = 0.5 * (s + d);
        Wn.tail(M) = 0.5 * (s - d);

        // Anchor: leading sine coefficient of the first component of V_n is +2.
        const int lead = n + sd.n_star; // 1-based mode index
        double cstar = (lead >= 1 && lead <= M) ? Vn(lead - 1) : 0.0;
        int arg = 0;
        const double cmax = Vn.head(M).cwiseAbs().maxCoeff(&arg);
        if (std::abs(cstar) < 1e-3 * cmax) {
            cstar = Vn(arg);
            sd.unreliable[n] = true;
        }
        const double alpha = 2.0 / cstar;
        Vn *= alpha;
        Wn /= alpha;

        const double pair = 0.5 * Vn.dot(Wn); // L2 pairing of V and W
        const double rho = 2.0 / pair;

        VectorXcd Phi(2 * M), Psi(2 * M);
        Phi.head(M) = (0.5 * (Vn.head(M) + Vn.tail(M))).cast<std::complex<double>>();
        Phi.tail(M) = I * (0.5 * (Vn.head(M) - Vn.tail(M))).cast<std::complex<double>>();
        Psi.head(M) = (0.5 * rho * (Wn.head(M) + Wn.tail(M))).cast<std::complex<double>>();
        Psi.tail(M) = I * (0.5 * rho * (Wn.head(M) - Wn.tail(M))).cast<std::complex<double>>();

        sd.V_plus[n] = std::move(Vn);
        sd.W_plus[n] = std::move(Wn);
        sd.Phi_plus[n] = std::move(Phi);
        sd.Psi_plus[n] = std::move(Psi);
    }

    // Null-space vectors and the control data tied to the ground state.
    sd.phi_coeffs = sine_coeffs_of([&](double xx) { return gs.eval_phi(xx); }, M);
    sd.dmu_phi_coeffs = gs.is_endpoint
                            ? VectorXd::Zero(M)
                            : sine_coeffs_of([&](double xx) { return gs.eval_dmu_phi(xx); }, M);
    sd.source_coeffs = gs.is_endpoint ? VectorXd::Zero(M) : control_profile_coeffs(gs, M);

    // Jordan chain: L (w, 0) = (0, phi) needs w = -(L^+)^{-1} phi, which is
    // the mu-derivative of phi taken with the regime's sign of mu.
    const double smu = (op.regime == Regime::Focusing) ? 1.0 : -1.0;
    sd.Phi0_plus = VectorXcd::Zero(2 * M);
    sd.Phi0_minus = VectorXcd::Zero(2 * M);
    sd.Psi0_plus = VectorXcd::Zero(2 * M);
    sd.Psi0_minus = VectorXcd::Zero(2 * M);
    sd.Phi0_plus.tail(M) = sd.phi_coeffs.cast<std::complex<double>>();
    sd.Phi0_minus.head(M) = (smu * sd.dmu_phi_coeffs).cast<std::complex<double>>();
    sd.Psi0_minus.head(M) = sd.phi_coeffs.cast<std::complex<double>>();
    sd.Psi0_plus.tail(M) = (smu * sd.dmu_phi_coeffs).cast<std::complex<double>>();
    sd.null_pairing = 0.5 * smu * sd.phi_coeffs.dot(sd.dmu_phi_coeffs);
    sd.Gamma0_minus = 0.25 * sd.phi_coeffs.squaredNorm(); // (1/2) int phi^2

    gamma_coefficients(sd, gs);
    return sd;
}

void gamma_coefficients(SpectralData& sd, const GroundState& gs) {
    const int M = sd.M;
    sd.Gamma_plus.resize(sd.n_keep);
    const VectorXcd p = sd.source_coeffs.cast<std::complex<double>>();
    for (int n = 0; n < sd.n_keep; ++n) {
        // <(x phi)' e1, Psi_n^-> = int (x phi)' Psi_n^{+,(1)}
        sd.Gamma_plus(n) = 0.5 * (p.array() * sd.Psi_plus[n].head(M).array()).sum();
    }
    (void)gs;
}

std::complex<double> gamma_boundary(const SpectralData& sd, const GroundState& gs, int n) {
    const int M = sd.M;
    const std::complex<double> I(0.0, 1.0);
    // Psi_n^+ = (f, -i g): recover g and differentiate its sine series at x = 1.
    std::complex<double> gp1 = 0.0;
    for (int k = 1; k <= M; ++k) {
        const std::complex<double> ghat = I * sd.Psi_plus[n](M + k - 1);
        gp1 += ghat * (k * M_PI) * ((k % 2 == 0) ? 1.0 : -1.0);
    }
    return gs.dphi1 * gp1 / sd.betas(n);
}

namespace {

SpectralData decompose_at(Regime r, double mu, int M, int n_keep) {
    const GroundState gs = GroundState::build(r, mu, 4 * M + 1);
    return decompose(assemble_block(r, gs, Flavor::M, M), gs, n_keep);
}

} // namespace

std::vector<EigenvalueCurve> track_curves(Regime r, double mu_start, double mu_end, int steps,
                                          int n_max, int M, int threads) {
    if (steps < 1) throw std::invalid_argument("track_curves: steps >= 1");
    const int n_keep = std::min(M / 4, std::max(16, n_max + 8));
    if (n_max > n_keep) throw std::invalid_argument("track_curves: n_max too large for M");

    std::vector<double> mus(steps + 1);
    for (int j = 0; j <= steps; ++j)
        mus[j] = mu_start + (mu_end - mu_start) * double(j) / steps;

    std::vector<VectorXd> spectra(steps + 1);
    const int nthreads = std::max(1, threads);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int j = next.fetch_add(1);
            if (j > steps) break;
            spectra[j] = decompose_at(r, mus[j], M, n_keep).betas;
        }
    };
    if (nthreads > 1) {
        std::vector<std::future<void>> pool;
        for (int t = 0; t < nthreads; ++t) pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    } else {
        worker();
    }

    std::vector<EigenvalueCurve> curves(n_max);
    for (int n = 0; n < n_max; ++n) {
        curves[n].n = n + 1;
        curves[n].points.push_back({mus[0], spectra[0](n)});
    }

    for (int j = 1; j <= steps; ++j) {
        const double dmu = mus[j] - mus[j - 1];
        for (int n = 0; n < n_max; ++n) {
            auto& cv = curves[n];
            const double prev = cv.points.back().beta;
            double vel = 0.0;
            if (cv.points.size() >= 2) {
                const auto& a = cv.points[cv.points.size() - 2];
                const auto& b = cv.points.back();
                if (b.mu != a.mu) vel = (b.beta - a.beta) / (b.mu - a.mu);
            }
            const double pred = prev + vel * dmu;
            // Nearest and second-nearest candidates in the new spectrum.
            int best = -1;
            double d1 = 1e300, d2 = 1e300;
            for (int i = 0; i < n_keep; ++i) {
                const double d = std::abs(spectra[j](i) - pred);
                if (d < d1) { d2 = d1; d1 = d; best = i; }
                else if (d < d2) { d2 = d; }
            }
            const double tol = std::max(std::abs(vel * dmu), 1e-8 * std::max(1.0, pred));
            if (d2 - d1 < 0.5 * tol) {
                // Ambiguous: bisect the mu step up to 10 levels.
                double lo = mus[j - 1], hi = mus[j];
                double blo = prev;
                bool resolved = false;
                for (int depth = 0; depth < 10 && !resolved; ++depth) {
                    const double mid = 0.5 * (lo + hi);
                    const VectorXd bm = decompose_at(r, mid, M, n_keep).betas;
                    const double predm = blo + vel * (mid - lo);
                    int bi = -1;
                    double e1 = 1e300, e2 = 1e300;
                    for (int i = 0; i < n_keep; ++i) {
                        const double d = std::abs(bm(i) - predm);
                        if (d < e1) { e2 = e1; e1 = d; bi = i; }
                        else if (d < e2) { e2 = d; }
                    }
                    if (e2 - e1 >= 0.5 * tol) {
                        lo = mid;
                        blo = bm(bi);
                        resolved = (hi - lo) < 1e-12 * std::max(1.0, std::abs(hi));
                    } else {
                        hi = mid;
                    }
                }
                if (!resolved) {
                    cv.crossing_flagged = true;
                    cv.crossing_mu = 0.5 * (lo + hi);
                }
            }
            cv.points.push_back({mus[j], spectra[j](best)});
        }
    }
    return curves;
}

} // namespace nlsbox
