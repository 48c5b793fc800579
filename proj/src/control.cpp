#include "nlsbox/control.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "nlsbox/quadrature.hpp"

namespace nlsbox {

namespace {

double phase_sign(Regime r) { return r == Regime::Focusing ? 1.0 : -1.0; }

// int_0^T U(t) e^{-i beta t} dt for a closed-form control, exact.
Complex duhamel_exact(const MomentSolution& s, double beta) {
    const Complex I(0.0, 1.0);
    const double T = s.T;
    const Complex a = -I * beta;

    // Polynomial part of U as q1 t + q2 t^2 + q3 t^3.
    const double q1 = s.c_poly[0] + s.c_poly[1] * T + 0.5 * s.c_poly[2] * T * T;
    const double q2 = -0.5 * s.c_poly[1] - 0.5 * s.c_poly[2] * T;
    const double q3 = s.c_poly[2] / 6.0;
    const Complex eaT = std::exp(a * T);
    Complex Ik = (eaT - 1.0) / a; // int t^0 e^{a t}
    Complex total = 0.0;
    double Tk = 1.0;
    const double q[4] = {0.0, q1, q2, q3};
    for (int k = 1; k <= 3; ++k) {
        Tk *= T;
        Ik = (Tk * eaT - double(k) * Ik) / a; // int t^k e^{a t}
        total += q[k] * Ik;
    }

    auto E = [&](double w) -> Complex { // int_0^T e^{i w t} dt
        if (std::abs(w * T) < 1e-8) return Complex(T, 0.5 * w * T * T);
        return (std::exp(I * w * T) - 1.0) / (I * w);
    };
    for (int k = 0; k < s.betas.size(); ++k) {
        const double bk = s.betas(k);
        // U-pieces a_k sin(bk t)/bk + b_k (1 - cos(bk t))/bk against e^{-i beta t}
        const Complex sin_int = (E(bk - beta) - E(-bk - beta)) / (2.0 * I);
        const Complex cos_int = (E(bk - beta) + E(-bk - beta)) / 2.0;
        total += (s.a_cos(k) / bk) * sin_int + (s.b_sin(k) / bk) * (E(-beta) - cos_int);
    }
    return total;
}

Complex duhamel_grid(const ControlSignal& U, double beta) {
    return quad::filon_exp(U.u, U.T, beta);
}

} // namespace

Eigen::VectorXd target_Z(const StateField& psi_f, Regime r, double mu, double T) {
    const StateField c = to_rep(psi_f, Rep::Coefficient);
    const int M = c.grid.M;
    const Complex rot = std::exp(Complex(0.0, -phase_sign(r) * mu * T));
    Eigen::VectorXd Z(2 * M);
    for (int n = 0; n < M; ++n) {
        const Complex z = c.v(n) * rot;
        Z(n) = z.real();
        Z(M + n) = z.imag();
    }
    return Z;
}

TargetCoefficients target_coefficients(const StateField& psi_f, const SpectralData& sd,
                                       const GroundState& gs, double T,
                                       const GenericityCertificate& cert, int N_ctrl,
                                       double ortho_tol) {
    (void)gs;
    if (!cert.certified())
        throw std::runtime_error("target_coefficients: genericity certificate not certified");
    if (cert.n_checked < N_ctrl)
        throw std::runtime_error("target_coefficients: certificate covers fewer modes than N_ctrl");
    if (N_ctrl > sd.n_keep)
        throw std::invalid_argument("target_coefficients: N_ctrl exceeds retained modes");

    const int M = sd.M;
    const Eigen::VectorXd Zr = target_Z(psi_f, sd.regime, sd.mu, T);
    Eigen::VectorXcd Z(2 * M);
    for (int i = 0; i < 2 * M; ++i) Z(i) = Zr(i);

    // Orthogonality (the c_0^- direction is unreachable): <Z_f, Psi_0^-> = 0.
    const Complex defect = inner2(Z, sd.Psi0_minus);
    const double scale =
        std::max(1.0, std::sqrt(0.5 * Zr.squaredNorm()) * std::sqrt(2.0 * sd.Gamma0_minus));
    TargetCoefficients tc;
    tc.orthogonality = std::abs(defect.real());
    if (tc.orthogonality > ortho_tol * scale)
        throw std::runtime_error("target_coefficients: target violates the orthogonality condition");

    const Complex d0c = inner2(Z, sd.Psi0_plus) / sd.Gamma0_minus;
    tc.d0 = d0c.real();
    tc.d.resize(N_ctrl);
    tc.z.resize(N_ctrl);
    const Complex I(0.0, 1.0);
    for (int n = 0; n < N_ctrl; ++n) {
        const double beta = sd.betas(n);
        const Complex zn = inner2(Z, sd.Psi_plus[n]);
        tc.z(n) = zn;
        if (std::abs(sd.Gamma_plus(n)) == 0.0)
            throw std::runtime_error("target_coefficients: vanishing Gamma coefficient");
        tc.d(n) = I * beta * zn * std::exp(-I * beta * T) / sd.Gamma_plus(n);
    }
    return tc;
}

ControlSignal synthesize_linear_control(const StateField& psi_f, const SpectralData& sd,
                                        const GroundState& gs, double T,
                                        const GenericityCertificate& cert, int N_ctrl,
                                        int n_t, double ortho_tol) {
    const TargetCoefficients tc =
        target_coefficients(psi_f, sd, gs, T, cert, N_ctrl, ortho_tol);
    const MomentProblem mp(T, sd.betas.head(N_ctrl), tc.d0, tc.d, n_t);
    const MomentSolution nu = solve_moments(mp);
    return ControlSignal::from_form(nu);
}

Eigen::VectorXd propagate_linearized(const ControlSignal& U, const SpectralData& sd,
                                     const GroundState& gs, double T) {
    const int M = sd.M;
    const Complex I(0.0, 1.0);

    // c_0^-(T) = Gamma_0^- int U (zero for admissible U, kept as a path),
    // c_0^+(T) = Gamma_0^- int (T-t) U.
    double intU, momentU1;
    if (U.form) {
        intU = U.form->intU(T);
        momentU1 = applied_moments(*U.form)(2); // int (T-t)^2/2 nu = int (T-t) U
    } else {
        intU = quad::simpson(U.u, T / (U.n_t() - 1));
        momentU1 = quad::poly_moment(U.u, T, 1);
    }
    const double c0m = sd.Gamma0_minus * intU;
    const double c0p = sd.Gamma0_minus * momentU1;

    Eigen::VectorXcd Z = Eigen::VectorXcd::Zero(2 * M);
    const double s = sd.null_pairing;
    Z += (c0p / s) * sd.Phi0_plus + (c0m / s) * sd.Phi0_minus;
    for (int n = 0; n < sd.n_keep; ++n) {
        const double beta = sd.betas(n);
        const Complex duh = U.form ? duhamel_exact(*U.form, beta) : duhamel_grid(U, beta);
        const Complex cn = std::exp(I * beta * T) * sd.Gamma_plus(n) * duh;
        Z += 2.0 * (cn * sd.Phi_plus[n]).real().cast<Complex>();
    }
    (void)gs;
    return Z.real();
}

Eigen::VectorXd propagate_linearized_direct(const ControlSignal& U, const BlockOperator& opL,
                                            const SpectralData& sd, double T, double dt) {
    if (opL.flavor != Flavor::L)
        throw std::invalid_argument("propagate_linearized_direct: expects the L-form operator");
    const int M = opL.M;
    const int n_steps = std::max(1, int(std::lround(T / dt)));
    const double h = T / n_steps;

    // Exponential integrator with the Duhamel integral per step evaluated at
    // the two-point Gauss nodes (exact propagator factors, U sampled):
    //   Z(t+h) = E Z(t) + (h/2) [U(t+s1) e^{L(h-s1)} + U(t+s2) e^{L(h-s2)}] src.
    const double s1 = 0.5 * h * (1.0 - 1.0 / std::sqrt(3.0));
    const double s2 = 0.5 * h * (1.0 + 1.0 / std::sqrt(3.0));
    const Eigen::MatrixXd E = (opL.mat * h).exp();
    Eigen::VectorXd src = Eigen::VectorXd::Zero(2 * M);
    src.head(M) = sd.source_coeffs;
    const Eigen::VectorXd g1 = (opL.mat * (h - s1)).exp() * src;
    const Eigen::VectorXd g2 = (opL.mat * (h - s2)).exp() * src;

    Eigen::VectorXd Z = Eigen::VectorXd::Zero(2 * M);
    for (int k = 0; k < n_steps; ++k) {
        const double t = k * h;
        Z = E * Z + (0.5 * h) * (U.u_at(t + s1) * g1 + U.u_at(t + s2) * g2);
    }
    return Z;
}

TargetState make_modal_target(const GroundState& gs, const SpectralData& sd, double T,
                              const std::vector<int>& modes, double rel_h3_size,
                              unsigned seed) {
    const int M = sd.M;
    SineGrid grid{M};
    StateField pert(grid, Rep::Coefficient);
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int m : modes) {
        if (m < 1 || m > M) throw std::invalid_argument("make_modal_target: mode out of range");
        pert.v(m - 1) = Complex(gauss(rng), gauss(rng));
    }
    StateField phi_field(grid, Rep::Coefficient);
    phi_field.v = sd.phi_coeffs.cast<Complex>();
    const double h3_phi = h_norm(phi_field, 3.0);
    const double h3_pert = h_norm(pert, 3.0);
    if (h3_pert > 0.0) pert.v *= rel_h3_size * h3_phi / h3_pert;

    StateField psi(grid, Rep::Coefficient);
    psi.v = phi_field.v + pert.v;
    const double nrm_phi = h_norm(phi_field, 0.0);
    const double nrm_psi = h_norm(psi, 0.0);
    psi.v *= nrm_phi / nrm_psi;
    const Complex rot = std::exp(Complex(0.0, phase_sign(gs.regime) * gs.mu * T));
    psi.v *= rot;

    TargetState ts;
    ts.psi_f = to_rep(psi, Rep::Point);
    ts.mu = gs.mu;
    ts.T = T;
    return ts;
}

TargetState make_nearby_target(const GroundState& gs, double mu_prime, double T, int M) {
    const GroundState gp = GroundState::build(gs.regime, mu_prime, 4 * M + 1);
    SineGrid grid{M};
    StateField psi(grid, Rep::Coefficient);
    psi.v = sine_coeffs_of([&](double x) { return gp.eval_phi(x); }, M).cast<Complex>();
    StateField phi_field(grid, Rep::Coefficient);
    phi_field.v = sine_coeffs_of([&](double x) { return gs.eval_phi(x); }, M).cast<Complex>();
    psi.v *= h_norm(phi_field, 0.0) / h_norm(psi, 0.0);
    psi.v *= std::exp(Complex(0.0, phase_sign(gs.regime) * mu_prime * T));
    TargetState ts;
    ts.psi_f = to_rep(psi, Rep::Point);
    ts.mu = gs.mu;
    ts.T = T;
    return ts;
}

std::string NewtonResult::log() const {
    std::ostringstream os;
    os.precision(17);
    os << "# iter lambda residual_h3 control_norm\n";
    for (const auto& it : history)
        os << it.iter << " " << it.lambda << " " << it.residual << " " << it.control_norm << "\n";
    switch (status) {
        case NewtonStatus::Converged: os << "status = converged\n"; break;
        case NewtonStatus::NoDecrease: os << "status = no_residual_decrease\n"; break;
        case NewtonStatus::MaxIterations: os << "status = max_iterations\n"; break;
    }
    return os.str();
}

NewtonResult newton_steer(const TargetState& target, const SpectralData& sd,
                          const GroundState& gs, const GenericityCertificate& cert,
                          const NewtonOptions& opt) {
    const int M = sd.M;
    SineGrid grid{M};
    const double sgn = phase_sign(gs.regime);

    StateField phi_field(grid, Rep::Coefficient);
    phi_field.v = sd.phi_coeffs.cast<Complex>();
    const StateField phi_point = to_rep(phi_field, Rep::Point);
    const double mass = 2.0 * sd.Gamma0_minus;

    // Contract checks: target on the sphere and inside the desk-scale ball.
    const double nrm_phi = h_norm(phi_field, 0.0);
    const double nrm_tgt = h_norm(target.psi_f, 0.0);
    if (std::abs(nrm_tgt - nrm_phi) > 1e-8 * std::max(1.0, nrm_phi))
        throw std::runtime_error("newton_steer: target is not on the ground-state sphere");
    {
        StateField ref(grid, Rep::Coefficient);
        ref.v = phi_field.v * std::exp(Complex(0.0, sgn * gs.mu * target.T));
        StateField diff(grid, Rep::Coefficient);
        diff.v = to_rep(target.psi_f, Rep::Coefficient).v - ref.v;
        if (h_norm(diff, 3.0) > opt.delta_desk * h_norm(phi_field, 3.0))
            throw std::runtime_error("newton_steer: target outside the configured ball");
    }
    if (!cert.certified() || cert.n_checked < opt.N_ctrl)
        throw std::runtime_error("newton_steer: genericity certificate missing or too short");

    // Zero control carrying the moment form so increments accumulate exactly.
    MomentSolution zero_form;
    zero_form.T = target.T;
    zero_form.betas = sd.betas.head(opt.N_ctrl);
    zero_form.a_cos = Eigen::VectorXd::Zero(opt.N_ctrl);
    zero_form.b_sin = Eigen::VectorXd::Zero(opt.N_ctrl);
    zero_form.n_t = opt.n_t;
    ControlSignal u = ControlSignal::from_form(zero_form);

    auto endpoint = [&](const ControlSignal& uu) {
        return solve_psi(phi_point, uu, gs.regime, opt.dt, {target.T}).snapshots.at(0);
    };
    auto residual_norm = [&](const StateField& end_state) {
        StateField diff(grid, Rep::Coefficient);
        diff.v = to_rep(target.psi_f, Rep::Coefficient).v - to_rep(end_state, Rep::Coefficient).v;
        return h_norm(diff, 3.0);
    };

    NewtonResult out;
    StateField theta = endpoint(u);
    double res = residual_norm(theta);
    out.history.push_back({0, 0.0, res, 0.0});
    if (res <= opt.tol) {
        out.status = NewtonStatus::Converged;
        out.u = u;
        return out;
    }

    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        // Residual field, projected onto the admissible tangent space.
        StateField r(grid, Rep::Coefficient);
        r.v = to_rep(target.psi_f, Rep::Coefficient).v - to_rep(theta, Rep::Coefficient).v;
        StateField base(grid, Rep::Coefficient);
        base.v = phi_field.v * std::exp(Complex(0.0, sgn * gs.mu * target.T));
        const double proj = l2_inner(r, base).real() / mass;
        r.v -= proj * base.v;

        const ControlSignal step = synthesize_linear_control(
            to_rep(r, Rep::Point), sd, gs, target.T, cert, opt.N_ctrl, opt.n_t, 1e-4);

        bool accepted = false;
        for (double lambda : {1.0, 0.5, 0.25, 0.125}) {
            ControlSignal cand = u;
            cand.add_scaled(step, lambda);
            StateField theta_new = endpoint(cand);
            const double res_new = residual_norm(theta_new);
            if (res_new < res) {
                u = cand;
                theta = theta_new;
                res = res_new;
                const double unorm = std::sqrt(quad::simpson(
                    Eigen::VectorXd(u.u.array().square()), u.T / (u.n_t() - 1)));
                out.history.push_back({iter, lambda, res, unorm});
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            out.status = NewtonStatus::NoDecrease;
            out.u = u;
            return out;
        }
        if (res <= opt.tol) {
            out.status = NewtonStatus::Converged;
            out.u = u;
            return out;
        }
    }
    out.status = NewtonStatus::MaxIterations;
    out.u = u;
    return out;
}

} // namespace nlsbox
