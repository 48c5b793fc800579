#ifndef NLSBOX_CONTROL_SIGNAL_HPP
#define NLSBOX_CONTROL_SIGNAL_HPP

#include <Eigen/Dense>
#include <optional>

#include "nlsbox/moments.hpp"

namespace nlsbox {

/// Real control u on a uniform grid over [0, T] with u(0) = u(T) = 0 and
/// zero mean (the discrete H^1_0-dot class). When the control was produced by
/// the moment solver the closed form is carried along and u, du/dt and the
/// running integral are evaluated from it; otherwise the derivative comes from
/// the sine expansion of u and the integral from composite quadrature.
class ControlSignal {
public:
    double T = 0.0;
    Eigen::VectorXd t, u, udot, intu;
    std::optional<MomentSolution> form;

    static ControlSignal zero(double T, int n_t);
    static ControlSignal from_grid(double T, const Eigen::VectorXd& u, double tol = 1e-8);
    static ControlSignal from_form(const MomentSolution& s, double tol = 1e-8);

    int n_t() const { return int(t.size()); }
    double u_at(double tt) const;
    double udot_at(double tt) const;
    double intu_at(double tt) const;

    /// u <- u + scale * other (closed forms add when both carry one over the
    /// same frequencies; otherwise falls back to grid arithmetic).
    void add_scaled(const ControlSignal& other, double scale);

private:
    void check_invariants(double tol) const;
    double hermite(const Eigen::VectorXd& val, const Eigen::VectorXd& slope, double tt) const;
};

} // namespace nlsbox

#endif
