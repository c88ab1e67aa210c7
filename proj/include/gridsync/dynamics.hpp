#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gridsync/linalg.hpp"
#include "gridsync/network.hpp"
#include "gridsync/torus.hpp"

namespace gridsync {

// Angles plus frequencies for the second-order model.
struct FullState {
    PhaseState theta;
    Vec dtheta;
};

// State of the grounded model: differences delta_i = theta_i - theta_n.
struct GroundedState {
    Vec delta;
};

enum class Model { kuramoto, swing, grounded, sp_form };

enum class StepMethod { rk4, rk45 };

struct IntegrateOptions {
    StepMethod method = StepMethod::rk4;
    double dt = 0.01;       // fixed step (rk4) or initial step (rk45)
    double rtol = 1e-9;     // rk45 per-step relative tolerance
    double atol = 1e-11;    // rk45 per-step absolute tolerance
    std::size_t stride = 1; // store every stride-th accepted step
};

// Time-stamped samples of one integration run. Angles are stored on the
// continuous lift (no per-step reduction); reduction to [0, 2pi) happens only
// when serializing. For grounded / sp_form runs `angles` holds delta with
// n-1 entries.
struct Trajectory {
    Model model = Model::kuramoto;
    std::size_t n = 0;
    std::vector<double> times;
    std::vector<Vec> angles;
    std::vector<Vec> freqs; // swing and sp_form only
    IntegrateOptions opts;

    std::size_t samples() const noexcept { return times.size(); }
};

// Reduced real power flow: Q_i = omega_i - sum_j P_ij sin(theta_i - theta_j
// + phi_ij). Summation ascends in j.
Vec power_flow_Q(const CouplingNetwork& net, const Vec& theta);

// First-order model: theta_dot_i = Q_i(theta) / D_i.
Vec rhs_nonuniform_kuramoto(const CouplingNetwork& net, const Vec& theta);

// Second-order model: returns theta_ddot_i = (-D_i dtheta_i + Q_i(theta)) / M_i.
// Throws MissingInertia.
Vec rhs_swing(const CouplingNetwork& net, const Vec& theta, const Vec& dtheta);

// Grounded model on R^{n-1}, the difference dynamics against oscillator n.
Vec rhs_grounded(const CouplingNetwork& net, const Vec& delta);

// Singular-perturbation scaling: epsilon = M_max / D_min and
// F_i = (D_i / D_min) / (M_i / M_max). Throws MissingInertia.
struct SpScaling {
    double epsilon = 0.0;
    Vec f;
};
SpScaling sp_scaling(const CouplingNetwork& net);

// Standard form on (delta, theta_dot): delta_dot_i = dtheta_i - dtheta_n and
// epsilon * d(dtheta_i)/dt = -F_i dtheta_i + (F_i / D_i) Q_i((delta, 0)).
// Returns {delta_dot, dtheta_dot}.
std::pair<Vec, Vec> rhs_sp_form(const CouplingNetwork& net, const Vec& delta, const Vec& dtheta);

// grnd: Delta(gamma) -> Delta_grnd(gamma), delta_i = theta_i - theta_n on
// lifted representatives. Throws NotPhaseCohesive when the angles do not fit
// strictly inside an arc of length gamma.
GroundedState grnd(const PhaseState& theta, double gamma);

Trajectory integrate_kuramoto(const CouplingNetwork& net, const PhaseState& theta0, double t_end,
                              const IntegrateOptions& opts = {});
Trajectory integrate_swing(const CouplingNetwork& net, const PhaseState& theta0, const Vec& dtheta0,
                           double t_end, const IntegrateOptions& opts = {});
Trajectory integrate_grounded(const CouplingNetwork& net, const GroundedState& delta0, double t_end,
                              const IntegrateOptions& opts = {});
Trajectory integrate_sp_form(const CouplingNetwork& net, const GroundedState& delta0,
                             const Vec& dtheta0, double t_end, const IntegrateOptions& opts = {});

} // namespace gridsync
