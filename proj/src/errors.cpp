#include "gridsync/errors.hpp"

namespace gridsync {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::invalid_damping: return "InvalidDamping";
        case Errc::invalid_phase_shift: return "InvalidPhaseShift";
        case Errc::nonzero_diagonal: return "NonzeroDiagonal";
        case Errc::negative_coupling: return "NegativeCoupling";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::missing_inertia: return "MissingInertia";
        case Errc::asymmetric_weights: return "AsymmetricWeights";
        case Errc::disconnected: return "Disconnected";
        case Errc::not_symmetric: return "NotSymmetric";
        case Errc::not_complete: return "NotComplete";
        case Errc::not_phase_cohesive: return "NotPhaseCohesive";
        case Errc::gamma_out_of_range: return "GammaOutOfRange";
        case Errc::n_too_small: return "NTooSmall";
        case Errc::ratio_out_of_range: return "RatioOutOfRange";
        case Errc::root_not_bracketed: return "RootNotBracketed";
        case Errc::lossy_network: return "LossyNetwork";
        case Errc::step_underflow: return "StepUnderflow";
        case Errc::non_finite_state: return "NonFiniteState";
        case Errc::trajectory_too_short: return "TrajectoryTooShort";
        case Errc::no_decay_window: return "NoDecayWindow";
        case Errc::hypothesis_violated: return "HypothesisViolated";
        case Errc::reduced_model_diverged: return "ReducedModelDiverged";
        case Errc::config_parse: return "ConfigParse";
        case Errc::network_invalid: return "NetworkInvalid";
    }
    return "UnknownError";
}

} // namespace gridsync
