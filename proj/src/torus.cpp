#include "gridsync/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridsync/errors.hpp"

namespace gridsync {

double wrap_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0; // fmod can round up to 2pi for tiny negatives
    return r;
}

double geodesic_distance(double a, double b) {
    double d = std::abs(wrap_2pi(a) - wrap_2pi(b));
    return std::min(d, kTwoPi - d);
}

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

PhaseState::PhaseState(Vec angles) : theta_(std::move(angles)) {
    for (double& a : theta_) a = wrap_2pi(a);
}

std::optional<ArcInfo> min_enclosing_arc(const Vec& theta) {
    const std::size_t n = theta.size();
    if (n == 0) return ArcInfo{};

    std::vector<double> reduced(n);
    for (std::size_t i = 0; i < n; ++i) reduced[i] = wrap_2pi(theta[i]);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return reduced[a] < reduced[b]; });

    // Largest circular gap between consecutive sorted angles; the minimal
    // enclosing arc is the complement of that gap.
    double best_gap = -1.0;
    std::size_t gap_at = 0; // gap follows order[gap_at]
    for (std::size_t k = 0; k < n; ++k) {
        const double cur = reduced[order[k]];
        const double nxt = reduced[order[(k + 1) % n]];
        double gap = (k + 1 == n) ? (nxt + kTwoPi - cur) : (nxt - cur);
        if (gap > best_gap) {
            best_gap = gap;
            gap_at = k;
        }
    }

    const double length = kTwoPi - best_gap;
    if (length > kPi + 1e-15) return std::nullopt;

    ArcInfo arc;
    arc.length = std::max(0.0, length);
    arc.start = reduced[order[(gap_at + 1) % n]];
    const double tol = 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
        const double rel = wrap_2pi(reduced[i] - arc.start);
        if (rel <= tol || (kTwoPi - rel) <= tol) arc.i_min.push_back(i);
        if (arc.length > tol && std::abs(rel - arc.length) <= tol) arc.i_max.push_back(i);
    }
    if (arc.length <= tol) arc.i_max = arc.i_min; // degenerate single-point arc
    return arc;
}

std::optional<double> arc_length_V(const Vec& theta) {
    auto arc = min_enclosing_arc(theta);
    if (!arc) return std::nullopt;
    return arc->length;
}

Vec lift_to_arc(const Vec& theta, const ArcInfo& arc) {
    Vec lifted(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        double rel = wrap_2pi(theta[i] - arc.start);
        if (kTwoPi - rel < 1e-12) rel = 0.0; // point coinciding with arc start
        lifted[i] = arc.start + rel;
    }
    return lifted;
}

static double geodesic_two_norm(const Vec& theta) {
    const std::size_t n = theta.size();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = geodesic_distance(theta[i], theta[j]);
            s += d * d;
        }
    return std::sqrt(s);
}

CohesivenessNorms cohesiveness_norms(const Vec& theta) {
    auto arc = min_enclosing_arc(theta);
    if (!arc || arc->length >= kPi)
        fail(Errc::not_phase_cohesive, "angles not contained in an open half-circle");
    CohesivenessNorms out;
    out.inf_norm = arc->length;
    out.two_norm = geodesic_two_norm(theta);
    return out;
}

std::optional<double> try_two_norm(const Vec& theta) {
    auto arc = min_enclosing_arc(theta);
    if (!arc || arc->length >= kPi) return std::nullopt;
    return geodesic_two_norm(theta);
}

} // namespace gridsync
