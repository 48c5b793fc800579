#include "nlsbox/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include "nlsbox/linop.hpp"
#include "nlsbox/spectral.hpp"

namespace nlsbox {

namespace {

struct State4 {
    double f, df, g, dg;
};

// One RK4 sweep over [0,1] with S steps; phi^2 precomputed at half-steps.
State4 rk4_sweep(double s, double mu, double beta, const Eigen::VectorXd& phi2_half, int S,
                 FgColumn ic) {
    const double h = 1.0 / S;
    State4 y{0.0, 0.0, 0.0, 0.0};
    if (ic == FgColumn::Col1) y.df = 1.0;
    else y.dg = 1.0;

    auto rhs = [&](const State4& st, int half_index) {
        const double p2 = phi2_half(half_index);
        State4 d;
        d.f = st.df;
        d.g = st.dg;
        d.df = beta * st.g - s * (p2 - mu) * st.f;
        d.dg = beta * st.f - s * (3.0 * p2 - mu) * st.g;
        return d;
    };
    auto axpy = [](const State4& a, double c, const State4& b) {
        return State4{a.f + c * b.f, a.df + c * b.df, a.g + c * b.g, a.dg + c * b.dg};
    };

    for (int i = 0; i < S; ++i) {
        const State4 k1 = rhs(y, 2 * i);
        const State4 k2 = rhs(axpy(y, 0.5 * h, k1), 2 * i + 1);
        const State4 k3 = rhs(axpy(y, 0.5 * h, k2), 2 * i + 1);
        const State4 k4 = rhs(axpy(y, h, k3), 2 * i + 2);
        y.f += (h / 6.0) * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f);
        y.df += (h / 6.0) * (k1.df + 2.0 * k2.df + 2.0 * k3.df + k4.df);
        y.g += (h / 6.0) * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
        y.dg += (h / 6.0) * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg);
    }
    return y;
}

Eigen::VectorXd phi2_samples(const GroundState& gs, int S) {
    Eigen::VectorXd p(2 * S + 1);
    for (int i = 0; i <= 2 * S; ++i) p(i) = gs.eval_phi2(double(i) / (2 * S));
    return p;
}

} // namespace

ShootingResult integrate_fg(Regime r, const GroundState& gs, double beta, FgColumn ic,
                            double h_max) {
    if (beta < 0.0) throw std::domain_error("integrate_fg: beta must be nonnegative");
    const double s = (r == Regime::Focusing) ? 1.0 : -1.0;
    double h = std::min(h_max, beta > 1.0 ? 0.02 / std::sqrt(beta) : h_max);
    int S = int(std::ceil(1.0 / h));
    S += S % 2; // even so the half grid nests under doubling

    const Eigen::VectorXd p2_fine = phi2_samples(gs, 2 * S);
    Eigen::VectorXd p2_coarse(2 * S + 1);
    for (int i = 0; i <= 2 * S; ++i) p2_coarse(i) = p2_fine(2 * i);

    const State4 coarse = rk4_sweep(s, gs.mu, beta, p2_coarse, S, ic);
    const State4 fine = rk4_sweep(s, gs.mu, beta, p2_fine, 2 * S, ic);

    ShootingResult res;
    res.f1 = fine.f;
    res.df1 = fine.df;
    res.g1 = fine.g;
    res.dg1 = fine.dg;
    res.err = std::abs(fine.f - coarse.f) / 15.0;
    return res;
}

EndpointMatrix shooting_matrix(Regime r, const GroundState& gs, double beta, double h_max) {
    const ShootingResult c1 = integrate_fg(r, gs, beta, FgColumn::Col1, h_max);
    const ShootingResult c2 = integrate_fg(r, gs, beta, FgColumn::Col2, h_max);
    EndpointMatrix em;
    Eigen::Matrix2d A;
    A << c1.f1, c2.f1, c1.g1, c2.g1;
    const double n1 = A.col(0).norm(), n2 = A.col(1).norm();
    if (n1 > 0.0) A.col(0) /= n1;
    if (n2 > 0.0) A.col(1) /= n2;
    em.A = A;
    em.det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(A);
    em.sv_ratio = svd.singularValues()(1) / std::max(svd.singularValues()(0), 1e-300);
    em.err = c1.err / std::max(n1, 1e-300);
    return em;
}

namespace {

// Wedge coordinates w_ij of two shooting columns, y = (f, f', g, g'):
//   w12' = b w13,            w13' = w14 + w23,        w14' = d w13 + w24,
//   w23' = a w13 + w24,      w24' = a w14 + b w34 + d w23 - c w12,
//   w34' = -c w13,
// with a = -s (phi^2 - mu), d = -s (3 phi^2 - mu), b = c = beta, and the
// initial plane spanned by the two slope columns: w24(0) = 1. The determinant
// of the endpoint matrix is w13(1).
struct Wedge {
    double w12, w13, w14, w23, w24, w34;
};

double compound_sweep(double s, double mu, double beta, const Eigen::VectorXd& phi2_half,
                      int S) {
    const double h = 1.0 / S;
    Wedge w{0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
    double log_scale = 0.0;
    auto rhs = [&](const Wedge& y, int half) {
        const double p2 = phi2_half(half);
        const double a = -s * (p2 - mu);
        const double d = -s * (3.0 * p2 - mu);
        Wedge r;
        r.w12 = beta * y.w13;
        r.w13 = y.w14 + y.w23;
        r.w14 = d * y.w13 + y.w24;
        r.w23 = a * y.w13 + y.w24;
        r.w24 = a * y.w14 + beta * y.w34 + d * y.w23 - beta * y.w12;
        r.w34 = -beta * y.w13;
        return r;
    };
    auto axpy = [](const Wedge& x, double c, const Wedge& y) {
        return Wedge{x.w12 + c * y.w12, x.w13 + c * y.w13, x.w14 + c * y.w14,
                     x.w23 + c * y.w23, x.w24 + c * y.w24, x.w34 + c * y.w34};
    };
    auto norm = [](const Wedge& y) {
        return std::sqrt(y.w12 * y.w12 + y.w13 * y.w13 + y.w14 * y.w14 + y.w23 * y.w23 +
                         y.w24 * y.w24 + y.w34 * y.w34);
    };
    for (int i = 0; i < S; ++i) {
        const Wedge k1 = rhs(w, 2 * i);
        const Wedge k2 = rhs(axpy(w, 0.5 * h, k1), 2 * i + 1);
        const Wedge k3 = rhs(axpy(w, 0.5 * h, k2), 2 * i + 1);
        const Wedge k4 = rhs(axpy(w, h, k3), 2 * i + 2);
        w.w12 += (h / 6.0) * (k1.w12 + 2.0 * k2.w12 + 2.0 * k3.w12 + k4.w12);
        w.w13 += (h / 6.0) * (k1.w13 + 2.0 * k2.w13 + 2.0 * k3.w13 + k4.w13);
        w.w14 += (h / 6.0) * (k1.w14 + 2.0 * k2.w14 + 2.0 * k3.w14 + k4.w14);
        w.w23 += (h / 6.0) * (k1.w23 + 2.0 * k2.w23 + 2.0 * k3.w23 + k4.w23);
        w.w24 += (h / 6.0) * (k1.w24 + 2.0 * k2.w24 + 2.0 * k3.w24 + k4.w24);
        w.w34 += (h / 6.0) * (k1.w34 + 2.0 * k2.w34 + 2.0 * k3.w34 + k4.w34);
        const double n = norm(w);
        if (n > 1e100) {
            const double inv = 1.0 / n;
            w.w12 *= inv;
            w.w13 *= inv;
            w.w14 *= inv;
            w.w23 *= inv;
            w.w24 *= inv;
            w.w34 *= inv;
            log_scale += std::log(n);
        }
    }
    (void)log_scale; // only the normalized value is used
    return w.w13 / norm(w);
}

} // namespace

CompoundDet compound_det(Regime r, const GroundState& gs, double beta, double h_max) {
    if (beta < 0.0) throw std::domain_error("compound_det: beta must be nonnegative");
    const double s = (r == Regime::Focusing) ? 1.0 : -1.0;
    double h = std::min(h_max, beta > 1.0 ? 0.02 / std::sqrt(beta) : h_max);
    int S = int(std::ceil(1.0 / h));
    S += S % 2;
    const Eigen::VectorXd p2_fine = phi2_samples(gs, 2 * S);
    Eigen::VectorXd p2_coarse(2 * S + 1);
    for (int i = 0; i <= 2 * S; ++i) p2_coarse(i) = p2_fine(2 * i);
    CompoundDet out;
    const double coarse = compound_sweep(s, gs.mu, beta, p2_coarse, S);
    out.value = compound_sweep(s, gs.mu, beta, p2_fine, 2 * S);
    out.err = std::abs(out.value - coarse) / 15.0;
    return out;
}

double refine_beta_by_det(Regime r, const GroundState& gs, double beta_guess, double rel_tol,
                          double h_max) {
    auto det_at = [&](double b) { return compound_det(r, gs, b, h_max).value; };
    double w = 1e-4 * std::max(beta_guess, 1.0);
    double lo = beta_guess - w, hi = beta_guess + w;
    double dlo = det_at(lo), dhi = det_at(hi);
    int expand = 0;
    while (dlo * dhi > 0.0) {
        if (++expand > 11)
            throw std::runtime_error("refine_beta_by_det: no sign change near the guess");
        w *= 2.0;
        lo = std::max(beta_guess - w, 1e-8);
        hi = beta_guess + w;
        dlo = det_at(lo);
        dhi = det_at(hi);
    }
    while ((hi - lo) > rel_tol * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        const double dm = det_at(mid);
        if (dm == 0.0) return mid;
        if (dlo * dm < 0.0) {
            hi = mid;
            dhi = dm;
        } else {
            lo = mid;
            dlo = dm;
        }
    }
    return 0.5 * (lo + hi);
}

double g_value(Regime r, const GroundState& gs, double beta, double* err, double h_max) {
    const ShootingResult res = integrate_fg(r, gs, beta, FgColumn::Col1, h_max);
    if (err) *err = res.err;
    return res.f1;
}

double G_n(Regime r, double mu, int n, const SpectralData* sd) {
    const GroundState gs = GroundState::build(r, mu, 1025);
    double beta;
    if (sd && n <= sd->n_keep) {
        beta = sd->betas(n - 1);
    } else {
        const int M = 256;
        const SpectralData local = decompose(assemble_block(r, gs, Flavor::M, M), gs,
                                             std::min(M / 4, std::max(16, n + 8)));
        beta = local.betas(n - 1);
    }
    return g_value(r, gs, beta);
}

std::string GenericityCertificate::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "regime = " << regime_name(regime) << "\n";
    os << "mu = " << mu << "\n";
    os << "n_checked = " << n_checked << "\n";
    os << "# n beta G_n margin\n";
    for (int i = 0; i < n_checked; ++i)
        os << (i + 1) << " " << betas(i) << " " << G_values(i) << " " << margins(i) << "\n";
    os << "min_margin = " << min_margin << "\n";
    switch (status) {
        case CertStatus::Certified: os << "status = certified\n"; break;
        case CertStatus::Failed: os << "status = failed(" << offending_n << ")\n"; break;
        case CertStatus::Unresolved: os << "status = unresolved(" << offending_n << ")\n"; break;
        case CertStatus::DegenerateEmpty:
            os << "status = certified (degenerate: empty evidence)\n";
            break;
    }
    return os.str();
}

GenericityCertificate certify(Regime r, const GroundState& gs, const SpectralData& sd,
                              int N_max) {
    GenericityCertificate cert;
    cert.regime = r;
    cert.mu = gs.mu;
    cert.n_checked = N_max;
    if (N_max == 0) {
        cert.status = CertStatus::DegenerateEmpty;
        cert.min_margin = 0.0;
        return cert;
    }
    if (N_max > sd.n_keep)
        throw std::invalid_argument("certify: N_max exceeds the retained spectrum");

    cert.betas.resize(N_max);
    cert.G_values.resize(N_max);
    cert.margins.resize(N_max);
    cert.status = CertStatus::Certified;
    cert.min_margin = 1e300;

    for (int n = 1; n <= N_max; ++n) {
        const double beta_mat = sd.betas(n - 1);
        cert.betas(n - 1) = beta_mat;

        // Cross-validation: the endpoint system must be numerically singular at
        // the matrix eigenvalue (normalized compound determinant below the
        // integrator tolerance); if not immediately, the det root must sit at
        // the same place to relative 1e-6.
        const CompoundDet cd = compound_det(r, gs, beta_mat);
        if (std::abs(cd.value) > std::max(1e-5, 1e3 * cd.err)) {
            bool consistent = false;
            try {
                const double beta_shoot = refine_beta_by_det(r, gs, beta_mat);
                consistent = std::abs(beta_shoot - beta_mat) <= 1e-6 * std::abs(beta_mat);
            } catch (const std::exception&) {
            }
            if (!consistent) {
                cert.G_values(n - 1) = 0.0;
                cert.margins(n - 1) = 0.0;
                cert.status = CertStatus::Unresolved;
                cert.offending_n = n;
                cert.min_margin = 0.0;
                return cert;
            }
        }

        double err = 0.0;
        const double G = g_value(r, gs, beta_mat, &err);
        cert.G_values(n - 1) = G;
        const double threshold = 10.0 * std::max(err, 1e-14 * std::abs(G));
        const double margin = std::abs(G) / std::max(threshold, 1e-300);
        cert.margins(n - 1) = margin;
        cert.min_margin = std::min(cert.min_margin, margin);
        if (std::abs(G) <= threshold) {
            cert.status = CertStatus::Failed;
            cert.offending_n = n;
            return cert;
        }
    }
    return cert;
}

GenericityCertificate certify(Regime r, double mu, int N_max, int M) {
    const GroundState gs = GroundState::build(r, mu, 4 * M + 1);
    const SpectralData sd = decompose(assemble_block(r, gs, Flavor::M, M), gs,
                                      std::min(M / 4, std::max(16, N_max + 4)));
    return certify(r, gs, sd, N_max);
}

std::vector<ScanBracket> find_sign_brackets(int n, const std::vector<double>& mu_grid,
                                            const Eigen::VectorXd& values,
                                            const std::function<double(double)>& G,
                                            double width) {
    std::vector<ScanBracket> out;
    for (std::size_t i = 0; i + 1 < mu_grid.size(); ++i) {
        if (values(i) == 0.0 || values(i) * values(i + 1) >= 0.0) continue;
        double lo = mu_grid[i], hi = mu_grid[i + 1];
        double glo = values(i);
        while (hi - lo > width) {
            const double mid = 0.5 * (lo + hi);
            const double gm = G(mid);
            if (glo * gm <= 0.0) hi = mid;
            else {
                lo = mid;
                glo = gm;
            }
        }
        out.push_back({n, lo, hi});
    }
    return out;
}

std::vector<ScanBracket> scan(Regime r, const std::vector<double>& mu_grid, int n_lo, int n_hi,
                              int M, int threads) {
    if (mu_grid.size() < 2) throw std::invalid_argument("scan: need at least two mu samples");
    for (std::size_t i = 0; i + 1 < mu_grid.size(); ++i)
        if (mu_grid[i] >= mu_grid[i + 1]) throw std::invalid_argument("scan: grid must ascend");
    if (mu_grid.front() <= mu_infimum(r))
        throw std::domain_error("scan: grid leaves the admissible range");

    const int n_keep = std::min(M / 4, std::max(16, n_hi + 8));
    const std::size_t J = mu_grid.size();

    // One matrix decomposition per grid point (parallel), shooting for the rest.
    std::vector<Eigen::VectorXd> betas(J);
    std::vector<std::unique_ptr<GroundState>> states(J);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= J) break;
            states[j] = std::make_unique<GroundState>(GroundState::build(r, mu_grid[j], 4 * M + 1));
            betas[j] =
                decompose(assemble_block(r, *states[j], Flavor::M, M), *states[j], n_keep).betas;
        }
    };
    const int nt = std::max(1, threads);
    if (nt > 1) {
        std::vector<std::future<void>> pool;
        for (int t = 0; t < nt; ++t) pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    } else {
        worker();
    }

    std::vector<ScanBracket> out;
    for (int n = n_lo; n <= n_hi; ++n) {
        Eigen::VectorXd vals(J);
        for (std::size_t j = 0; j < J; ++j) vals(j) = g_value(r, *states[j], betas[j](n - 1));
        auto G_of_mu = [&](double mu) {
            const GroundState gs = GroundState::build(r, mu, 1025);
            // Continue the eigenvalue from the nearest grid sample by det search.
            std::size_t jn = 0;
            double best = 1e300;
            for (std::size_t j = 0; j < J; ++j) {
                const double d = std::abs(mu_grid[j] - mu);
                if (d < best) {
                    best = d;
                    jn = j;
                }
            }
            const double beta = refine_beta_by_det(r, gs, betas[jn](n - 1), 1e-10);
            return g_value(r, gs, beta);
        };
        auto brackets = find_sign_brackets(n, mu_grid, vals, G_of_mu);
        out.insert(out.end(), brackets.begin(), brackets.end());
    }
    return out;
}

} // namespace nlsbox
