#pragma once

#include <cstdint>
#include <random>

#include "gridsync/torus.hpp"

namespace gridsync {

// Deterministic random source. mt19937_64 is fully specified by the
// standard; the uniform conversion is done by hand because the standard
// distributions are implementation-defined and would break byte-identical
// outputs across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

  private:
    std::mt19937_64 gen_;
};

// Angles placed uniformly inside a randomly positioned arc of the given
// length, so the state lies in Delta(arc_length).
PhaseState sample_arc_uniform(std::size_t n, double arc_length, Rng& rng);

// Rejection sampler for ||H theta||_2 <= radius starts: proposals are
// arc-uniform with a spread tuned to the target radius, rejected on the
// two-norm of the difference vector.
PhaseState sample_two_norm_ball(std::size_t n, double radius, Rng& rng);

} // namespace gridsync
