#include "gridsync/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "gridsync/errors.hpp"
#include "gridsync/spectral.hpp"

namespace gridsync {

PhaseState sample_arc_uniform(std::size_t n, double arc_length, Rng& rng) {
    const double base = rng.uniform(0.0, kTwoPi);
    Vec theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = base + rng.uniform(0.0, arc_length);
    return PhaseState(std::move(theta));
}

PhaseState sample_two_norm_ball(std::size_t n, double radius, Rng& rng) {
    // Spread chosen so the expected squared two-norm of the proposal is
    // (2/3) radius^2, keeping the rejection rate low.
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double spread = std::min(0.99 * kPi, 2.0 * radius / std::sqrt(pairs));
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double base = rng.uniform(0.0, kTwoPi);
        Vec offsets(n);
        for (std::size_t i = 0; i < n; ++i) offsets[i] = rng.uniform(0.0, spread);
        double s = 0.0;
        for_each_pair(n, [&](std::size_t, std::size_t i, std::size_t j) {
            const double d = offsets[j] - offsets[i];
            s += d * d;
        });
        if (std::sqrt(s) < radius) {
            Vec theta(n);
            for (std::size_t i = 0; i < n; ++i) theta[i] = base + offsets[i];
            return PhaseState(std::move(theta));
        }
    }
    fail(Errc::not_phase_cohesive, "two-norm ball sampler failed to find a point");
}

} // namespace gridsync
