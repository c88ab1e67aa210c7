#pragma once

#include <optional>
#include <vector>

#include "gridsync/dynamics.hpp"
#include "gridsync/network.hpp"

namespace gridsync {

struct SyncVerdict {
    bool frequency_synced = false;
    double sync_frequency = 0.0;
    std::optional<double> rate_fit;       // positive decay rate, synced runs only
    std::optional<double> final_inf_norm; // cohesiveness at the last sample
    std::optional<double> final_two_norm;
    std::optional<double> settled_at;     // first time the spread stays below tol
    bool containment_warning = false;     // sync frequency left [min, max] of initial rates
};

enum class RateChannel { freq_spread, disagreement, arc_excess };

// Frequencies at one trajectory sample: stored for second-order runs,
// recomputed from the vector field for first-order runs.
Vec frequencies_at(const CouplingNetwork& net, const Trajectory& traj, std::size_t idx);

// Declares frequency synchronization when the frequency spread stays below
// tol over the trailing 10% of samples. Throws TrajectoryTooShort below 20
// samples.
SyncVerdict detect_frequency_sync(const CouplingNetwork& net, const Trajectory& traj, double tol);

// Least-squares decay rate of log(channel) over the window where the channel
// has dropped to [1e-8, 1e-2] of its initial value. Throws NoDecayWindow.
double fit_exponential_rate(const CouplingNetwork& net, const Trajectory& traj, RateChannel channel);

struct PhaseSyncReport {
    bool arc_converged = false;    // V(theta(t)) fell below tol
    double final_arc = 0.0;
    bool limit_contained = false;  // de-rotated limit inside the initial arc
    bool mean_checked = false;     // weighted-mean comparison ran (P = P^T)
    bool mean_matched = false;
    double mean_error = 0.0;
    bool rate_ok = false;          // fitted decay of V beats the bound with 5% slack
    std::optional<double> fitted_rate;
    double bound_rate = 0.0;
};

// Verifies the phase synchronization limit on a first-order trajectory with
// zero shifts and uniform omega_i / D_i. Throws HypothesisViolated.
PhaseSyncReport check_phase_sync_limit(const CouplingNetwork& net, const Trajectory& traj,
                                       double tol);

struct SpComparison {
    double epsilon = 0.0;
    double t_b = 0.0;
    double sup_delta_error = 0.0;         // sup_t max_i |delta_i(t,eps) - delta_bar_i(t)|
    double sup_freq_error_after_tb = 0.0; // sup_{t>=t_b} max_i |dtheta_i - h_i(delta_bar)|
    std::vector<double> times;
    std::vector<double> delta_error;
    std::vector<double> freq_error;
    std::vector<double> boundary_layer_error; // |dtheta - h(delta_bar) - y(t/eps)|
};

// Integrates the singular-perturbation form and the reduced grounded model
// from matched initial data and measures the approximation error channels.
// The sampling grid resolves the boundary layer: spacing <= min(0.01, eps/5)
// on [0, 10 eps], coarser afterwards. t_b defaults to five slowest
// boundary-layer time constants. Throws MissingInertia /
// ReducedModelDiverged.
SpComparison sp_compare(const CouplingNetwork& net, const PhaseState& theta0, const Vec& dtheta0,
                        double t_end, std::optional<double> t_b = std::nullopt);

// Both error channels decayed to below 1% of their sup values over the
// trailing window.
bool check_asymptotic_error_decay(const SpComparison& cmp);

} // namespace gridsync
