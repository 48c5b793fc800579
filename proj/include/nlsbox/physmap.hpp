#ifndef NLSBOX_PHYSMAP_HPP
#define NLSBOX_PHYSMAP_HPP

#include <Eigen/Dense>

#include "nlsbox/control_signal.hpp"
#include "nlsbox/discretization.hpp"
#include "nlsbox/groundstate.hpp"

namespace nlsbox {

/// Physical box trajectory: tau grid (uniform on [0, tau*]), the rescaled time
/// g(tau) and the box length L(tau) = exp(int_0^{g(tau)} u).
struct LengthTrajectory {
    double hbar = 1.0, m = 1.0;
    double tau_star = 0.0;
    Eigen::VectorXd tau, g, L;

    double g_of_tau(double t) const;
    double L_of_tau(double t) const;
    double tau_of_t(double t) const; // inverse of g (strictly increasing)
};

/// Integrates g' = (hbar/2m) exp(-2 int_0^{g} u), g(0) = 0, u extended by zero
/// outside [0, T]; tau* located by secant on g - T to 1e-10, then the dense
/// output is regenerated on a uniform grid over [0, tau*].
LengthTrajectory control_to_length(const ControlSignal& u, double hbar, double m,
                                   int n_out = 4096);

/// u(g(tau)) = (2m/hbar) dL/dtau L, resampled to a uniform grid on [0, T].
ControlSignal length_to_control(const LengthTrajectory& lt, double T, int n_t);

struct PhysicalSnapshot {
    double tau = 0.0, t = 0.0, L = 1.0;
    Eigen::VectorXd z;   // n_z interior points of (0, L)
    Eigen::VectorXcd Phi;
    double norm = 0.0;   // int_0^L |Phi|^2 dz
};

/// Phi(tau, z) = hbar / (sqrt(2 kappa m) L) psi(g(tau), z / L) on (0, L(tau)).
/// kappa must match the chemical potential through the mass relation to 1e-6.
PhysicalSnapshot physical_snapshot(const StateField& psi, double t, const LengthTrajectory& lt,
                                   double kappa, const GroundState& gs, int n_z = 257);

} // namespace nlsbox

#endif
