#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gridsync/linalg.hpp"

namespace gridsync {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Reduce an angle to [0, 2pi).
double wrap_2pi(double a);

// Geodesic distance on the circle, in [0, pi].
double geodesic_distance(double a, double b);

// sin(x)/x with sinc(0) = 1.
double sinc(double x);

// Angles on the n-torus, stored reduced to [0, 2pi). All operations on a
// PhaseState are 2pi-periodic per coordinate.
class PhaseState {
  public:
    PhaseState() = default;
    explicit PhaseState(Vec angles);

    const Vec& angles() const noexcept { return theta_; }
    std::size_t size() const noexcept { return theta_.size(); }

  private:
    Vec theta_;
};

// Minimal arc containing all angles, when one of length <= pi exists.
// `start` is the counterclockwise minimum of the arc (reduced to [0, 2pi)),
// `i_min`/`i_max` are the index sets attaining the arc boundary.
struct ArcInfo {
    double length = 0.0;
    double start = 0.0;
    std::vector<std::size_t> i_min;
    std::vector<std::size_t> i_max;
};

// nullopt when the angles do not fit in any closed half-circle.
std::optional<ArcInfo> min_enclosing_arc(const Vec& theta);

// Arc-length function V: length of the minimal enclosing arc, in [0, pi],
// or nullopt when the spread exceeds a half-circle.
std::optional<double> arc_length_V(const Vec& theta);

// Lift angles onto the real line inside the arc window: result[i] =
// arc.start + ((theta_i - arc.start) mod 2pi), contiguous representatives in
// [start, start + length].
Vec lift_to_arc(const Vec& theta, const ArcInfo& arc);

struct CohesivenessNorms {
    double inf_norm = 0.0; // V(theta), the max pairwise geodesic distance
    double two_norm = 0.0; // ||H theta||_2 over complete-graph pairs
};

// Throws NotPhaseCohesive when theta is not in Delta(pi). Pair reduction runs
// in lexicographic order (1,2),(1,3),...,(n-1,n).
CohesivenessNorms cohesiveness_norms(const Vec& theta);

// Non-throwing variants used at serialization boundaries.
std::optional<double> try_two_norm(const Vec& theta);

} // namespace gridsync
