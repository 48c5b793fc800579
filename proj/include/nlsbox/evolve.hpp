#ifndef NLSBOX_EVOLVE_HPP
#define NLSBOX_EVOLVE_HPP

#include <functional>
#include <vector>

#include "nlsbox/control_signal.hpp"
#include "nlsbox/discretization.hpp"
#include "nlsbox/groundstate.hpp"

namespace nlsbox {

struct EvolutionResult {
    std::vector<double> times;
    std::vector<StateField> snapshots;      // point representation
    std::vector<double> norm_times;
    std::vector<double> norms;              // L2 norm history
    double dt = 0.0;
    int M = 0;
};

struct Potentials {
    Eigen::VectorXd w, v; // on the control's own time grid
};

/// w(t) = +/- exp(int_0^t u) (+ focusing, - defocusing), v = (du/dt - u^2)/4.
Potentials controls_to_potentials(const ControlSignal& u, Regime r);

/// psi(x) = xi(x) exp(i u(t) x^2 / 4 + (1/2) int_0^t u).
StateField gauge_forward(const StateField& xi, double u_t, double int_u);
StateField gauge_inverse(const StateField& psi, double u_t, double int_u);

/// Strang splitting for the auxiliary equation: half-step pointwise phase
/// exp(i dt/2 (w |xi|^2 - v x^2)), exact sine-mode phases for the Laplacian,
/// half-step phase at the new time. Each substep preserves the L2 norm.
EvolutionResult split_step_xi(const StateField& xi0, const std::function<double(double)>& w,
                              const std::function<double(double)>& v, double T, double dt,
                              const std::vector<double>& snap_times = {});

/// Controlled equation via the gauge transform: evolve the auxiliary system
/// and map snapshots back. Norm history records the psi norm.
EvolutionResult solve_psi(const StateField& psi0, const ControlSignal& u, Regime r, double dt,
                          const std::vector<double>& snap_times = {});

/// Independent discretization of the controlled equation: Crank-Nicolson with
/// centered differences for d_x [x psi] and fixed-point iteration (<= 20, tol
/// 1e-12) for the cubic term. Consistency oracle only.
EvolutionResult cn_direct_oracle(const StateField& psi0, const ControlSignal& u, Regime r,
                                 int M_fd, double dt, const std::vector<double>& snap_times = {});

} // namespace nlsbox

#endif
