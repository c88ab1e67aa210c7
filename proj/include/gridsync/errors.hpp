#pragma once

#include <stdexcept>
#include <string>

namespace gridsync {

// Error codes cover every failure mode the library reports. Commands map
// config/validation codes to exit code 1 and numerical codes to exit code 2.
enum class Errc {
    // network validation
    invalid_damping,
    invalid_phase_shift,
    nonzero_diagonal,
    negative_coupling,
    shape_mismatch,
    missing_inertia,
    // spectral / graph preconditions
    asymmetric_weights,
    disconnected,
    not_symmetric,
    not_complete,
    not_phase_cohesive,
    // certificate arguments
    gamma_out_of_range,
    n_too_small,
    ratio_out_of_range,
    root_not_bracketed,
    lossy_network,
    // integration
    step_underflow,
    non_finite_state,
    // analysis
    trajectory_too_short,
    no_decay_window,
    hypothesis_violated,
    reduced_model_diverged,
    // configuration
    config_parse,
    network_invalid,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

    bool is_config_error() const noexcept {
        return code_ == Errc::config_parse || code_ == Errc::network_invalid ||
               code_ == Errc::invalid_damping || code_ == Errc::invalid_phase_shift ||
               code_ == Errc::nonzero_diagonal || code_ == Errc::negative_coupling ||
               code_ == Errc::shape_mismatch || code_ == Errc::missing_inertia ||
               code_ == Errc::n_too_small || code_ == Errc::gamma_out_of_range ||
               code_ == Errc::ratio_out_of_range;
    }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace gridsync
