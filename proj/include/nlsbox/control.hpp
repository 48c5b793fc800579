#ifndef NLSBOX_CONTROL_HPP
#define NLSBOX_CONTROL_HPP

#include <string>
#include <vector>

#include "nlsbox/control_signal.hpp"
#include "nlsbox/evolve.hpp"
#include "nlsbox/shooting.hpp"
#include "nlsbox/spectral.hpp"

namespace nlsbox {

struct TargetState {
    StateField psi_f;
    double mu = 0.0;
    double T = 0.0;
};

/// Target = sphere-normalized (phi + perturbation on the given modes) times the
/// free phase e^{+/- i mu T}; the perturbation is scaled to the requested
/// relative H3 size. Coefficients come from the seeded generator.
TargetState make_modal_target(const GroundState& gs, const SpectralData& sd, double T,
                              const std::vector<int>& modes, double rel_h3_size,
                              unsigned seed);

/// Target = free evolution of a nearby ground state, renormalized to the
/// ||phi_mu|| sphere.
TargetState make_nearby_target(const GroundState& gs, double mu_prime, double T, int M);

struct TargetCoefficients {
    double d0 = 0.0;
    Eigen::VectorXcd d;          // n = 1..N_ctrl
    Eigen::VectorXcd z;          // projections <Z_f, Psi_n^+>
    double orthogonality = 0.0;  // the checked defect
};

/// Moment data d(Psi_f) of an admissible linearized target. Requires a valid
/// genericity certificate covering the controlled modes; refuses otherwise.
TargetCoefficients target_coefficients(const StateField& psi_f, const SpectralData& sd,
                                       const GroundState& gs, double T,
                                       const GenericityCertificate& cert, int N_ctrl,
                                       double ortho_tol = 1e-6);

/// Right inverse of the linearized end-point map: solve the moment problem for
/// nu, integrate to U. The returned control carries the closed form.
ControlSignal synthesize_linear_control(const StateField& psi_f, const SpectralData& sd,
                                        const GroundState& gs, double T,
                                        const GenericityCertificate& cert, int N_ctrl,
                                        int n_t, double ortho_tol = 1e-6);

/// Z(T) of dZ/dt = L Z + U(t) (x phi)' e1, Z(0) = 0, by the modal Duhamel
/// formula in the biorthogonal basis, resummed over the retained modes.
/// Returns the stacked real coefficient vector (2M).
Eigen::VectorXd propagate_linearized(const ControlSignal& U, const SpectralData& sd,
                                     const GroundState& gs, double T);

/// Same endpoint by direct time stepping of the 2M system with the exponential
/// midpoint rule (matrix exponential precomputed once).
Eigen::VectorXd propagate_linearized_direct(const ControlSignal& U, const BlockOperator& opL,
                                            const SpectralData& sd, double T, double dt);

/// Z_f of a target: stacked coefficients of (Re, Im) of psi_f e^{-/+ i mu T}.
Eigen::VectorXd target_Z(const StateField& psi_f, Regime r, double mu, double T);

struct NewtonOptions {
    double tol = 1e-5;        // H3 residual
    int max_iter = 20;
    double dt = 5e-4;
    int n_t = 2001;           // control grid
    int N_ctrl = 12;
    double delta_desk = 1e-2; // admissible relative H3 distance of the target
};

struct NewtonIterate {
    int iter = 0;
    double lambda = 0.0;
    double residual = 0.0;     // h_norm(Theta(u) - psi_f, 3)
    double control_norm = 0.0; // L2 norm of u
};

enum class NewtonStatus { Converged, NoDecrease, MaxIterations };

struct NewtonResult {
    NewtonStatus status = NewtonStatus::MaxIterations;
    ControlSignal u;
    std::vector<NewtonIterate> history;
    std::string log() const;
};

/// Newton / inverse-mapping iteration on the discrete end-point map, with the
/// linearized right inverse evaluated around the unperturbed trajectory and
/// Armijo-style damping over lambda in {1, 1/2, 1/4, 1/8}.
NewtonResult newton_steer(const TargetState& target, const SpectralData& sd,
                          const GroundState& gs, const GenericityCertificate& cert,
                          const NewtonOptions& opt);

} // namespace nlsbox

#endif
