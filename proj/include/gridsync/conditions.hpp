#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridsync/network.hpp"
#include "gridsync/torus.hpp"

namespace gridsync {

// Per-pair breakdown carried by the pairwise certificate variants.
struct PairCondition {
    std::size_t m = 0, l = 0; // 0-based oscillator indices, m < l
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double gamma_min = 0.0; // concavity variant only
    double gamma_max = 0.0;
};

// Evaluated certificate: lhs > rhs (strict) is the verdict. When the
// certificate holds, gamma_min / gamma_max solve the defining gap equations
// to residual < 1e-12 and bracket the practical-stability region.
struct ConditionReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    std::optional<double> gamma_min;
    std::optional<double> gamma_max;
    std::optional<double> ratio;  // gap ratio handed to the gamma equations
    std::optional<double> alpha;  // two-norm variant: region radius factor
    std::vector<PairCondition> details;
};

struct NecessaryPair {
    std::size_t i = 0, j = 0;
    double lhs = 0.0; // |omega_i/D_i - omega_j/D_j|
    double rhs = 0.0; // sum_k (P_ik/D_i + P_jk/D_j)
    bool blocked = false;
};

struct NecessaryReport {
    std::vector<NecessaryPair> pairs;
    bool any_blocked = false;
};

struct LiteratureBounds {
    double this_paper = 0.0;
    double chopra = 0.0;
    double schmidt = 0.0;
    double geometric = 0.0;
};

enum class GammaLaw { sine, sinc };

struct GammaPair {
    double gamma_min = 0.0;
    double gamma_max = 0.0;
};

// Scalar certificate on the complete symmetric graph:
//   n min_{i != j} (P_ij / D_i) cos(phi_ij)
//     > (1/cos phi_max) (max |omega_i/D_i - omega_j/D_j|
//                        + 2 max_i sum_j (P_ij/D_i) sin phi_ij).
// Throws NotSymmetric / NotComplete.
ConditionReport condition_I(const CouplingNetwork& net);

// Two-norm certificate for connected symmetric graphs:
//   lambda2(L(P_ij cos phi_ij)) > lambda_critical.
// When it holds, trajectories with ||H theta(0)||_2 < alpha * gamma_max reach
// ||H theta||_2 <= gamma_min. Throws NotSymmetric / Disconnected.
ConditionReport condition_II(const CouplingNetwork& net);

// Pair (i,j) can never frequency-synchronize when its frequency mismatch
// exceeds the total coupling available to the pair.
NecessaryReport necessary_condition(const CouplingNetwork& net);

// Classic uniform-oscillator bounds. K(gamma) = (omega_max-omega_min)/cos(gamma)
// for gamma in (0, pi/2]; values beyond 1e15 collapse to +infinity.
double classic_K_critical(const Vec& omega);
double classic_K_of_gamma(const Vec& omega, double gamma);

// Comparison of K(gamma) against the scaling bounds from the consensus and
// Kuramoto literature. Requires n >= 3.
LiteratureBounds literature_bounds(const Vec& omega, double gamma, std::size_t n);

// Appendix variants of the scalar certificate.
ConditionReport condition_appendix_pairwise(const CouplingNetwork& net);
ConditionReport condition_appendix_concave(const CouplingNetwork& net);
ConditionReport condition_appendix_pmin(const CouplingNetwork& net);

// Solves the gap equations for (gamma_min, gamma_max) by bisection
// (residual < 1e-12, 200 iteration cap).
//  - sine law: sin(gamma_min) = sin(gamma_max) = ratio, with gamma_min in
//    [0, pi/2] and gamma_max in [pi/2, pi]; callers pass the ratio with the
//    cos(phi_max) factor already applied.
//  - sinc law: sin(gamma_min) = ratio cos(phi_max) on [0, pi/2 - phi_max] and
//    sinc(gamma_max) = ratio sinc(pi/2 - phi_max) on [pi/2 - phi_max, pi].
// Throws RatioOutOfRange for ratio outside [0, 1).
GammaPair solve_gamma(double ratio, double phi_max_angle, GammaLaw law);

// Worst-case exponential frequency synchronization rate of a lossless
// symmetric network whose trajectory stays in Delta(gamma):
//   lambda2(L(P)) cos(gamma) cos(angle(D1,1))^2 / D_max
// reported as a positive decay constant. Throws LossyNetwork.
double rate_lambda_fe(const CouplingNetwork& net, double gamma);

// Worst-case phase synchronization rate, sinc(gamma) in place of cos(gamma).
double rate_lambda_ps(const CouplingNetwork& net, double gamma);

// Synchronization frequency Omega = sum omega_i / sum D_i.
double sync_frequency_omega(const CouplingNetwork& net);

// Damping-weighted mean of angles in Delta(pi), computed on lifted
// representatives and reduced to [0, 2pi). Throws NotPhaseCohesive.
double weighted_mean_angle(const CouplingNetwork& net, const PhaseState& theta0);

} // namespace gridsync
