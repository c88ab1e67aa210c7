#pragma once

// Shared instance generators for the unit and acceptance suites.

#include <algorithm>
#include <cmath>

#include "gridsync/conditions.hpp"
#include "gridsync/network.hpp"
#include "gridsync/sampling.hpp"
#include "gridsync/spectral.hpp"

namespace gridsync::testing {

inline Vec random_vec(Rng& rng, std::size_t n, double lo, double hi) {
    Vec v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

struct NetSpec {
    double p_lo = 1.0, p_hi = 1.6;
    double d_lo = 0.5, d_hi = 2.0;
    double omega_spread = 0.3; // omega_i ~ U[-spread, spread]
    double phi_cap = 0.0;      // phi_ij ~ U[0, phi_cap]
};

inline CouplingNetwork random_symmetric_complete(Rng& rng, std::size_t n, const NetSpec& spec = {}) {
    CouplingNetwork net;
    net.n = n;
    net.damping = random_vec(rng, n, spec.d_lo, spec.d_hi);
    net.natural_freq = random_vec(rng, n, -spec.omega_spread, spec.omega_spread);
    net.coupling = Mat(n, n, 0.0);
    net.phase_shift = Mat(n, n, 0.0);
    for_each_pair(n, [&](std::size_t, std::size_t i, std::size_t j) {
        const double p = rng.uniform(spec.p_lo, spec.p_hi);
        const double phi = spec.phi_cap > 0.0 ? rng.uniform(0.0, spec.phi_cap) : 0.0;
        net.coupling(i, j) = net.coupling(j, i) = p;
        net.phase_shift(i, j) = net.phase_shift(j, i) = phi;
    });
    return net;
}

// Random spanning tree plus a few extra edges; always connected, rarely
// complete.
inline CouplingNetwork random_symmetric_connected(Rng& rng, std::size_t n,
                                                  const NetSpec& spec = {}) {
    CouplingNetwork net;
    net.n = n;
    net.damping = random_vec(rng, n, spec.d_lo, spec.d_hi);
    net.natural_freq = random_vec(rng, n, -spec.omega_spread, spec.omega_spread);
    net.coupling = Mat(n, n, 0.0);
    net.phase_shift = Mat(n, n, 0.0);
    auto add_edge = [&](std::size_t i, std::size_t j) {
        if (i == j || net.coupling(i, j) > 0.0) return;
        const double p = rng.uniform(spec.p_lo, spec.p_hi);
        const double phi = spec.phi_cap > 0.0 ? rng.uniform(0.0, spec.phi_cap) : 0.0;
        net.coupling(i, j) = net.coupling(j, i) = p;
        net.phase_shift(i, j) = net.phase_shift(j, i) = phi;
    };
    for (std::size_t i = 1; i < n; ++i) add_edge(i, rng.index(i));
    for (std::size_t extra = 0; extra < n; ++extra) add_edge(rng.index(n), rng.index(n));
    return net;
}

// Scale the coupling until condition I holds; false when scaling cannot help
// (the lossy part grows with the coupling).
inline bool certify_condition_I(CouplingNetwork& net, int max_scalings = 12) {
    for (int k = 0; k <= max_scalings; ++k) {
        if (condition_I(net).holds) return true;
        for (std::size_t i = 0; i < net.n; ++i)
            for (std::size_t j = 0; j < net.n; ++j)
                if (i != j) net.coupling(i, j) *= 1.5;
    }
    return false;
}

inline bool certify_condition_II(CouplingNetwork& net, int max_scalings = 12) {
    for (int k = 0; k <= max_scalings; ++k) {
        if (condition_II(net).holds) return true;
        for (std::size_t i = 0; i < net.n; ++i)
            for (std::size_t j = 0; j < net.n; ++j)
                if (i != j) net.coupling(i, j) *= 1.5;
    }
    return false;
}

// Symmetric non-negative weight matrix with zero diagonal; entries are
// dropped to zero with the given probability.
inline Mat random_weights(Rng& rng, std::size_t n, double zero_prob = 0.0, double lo = 0.2,
                          double hi = 2.0) {
    Mat w(n, n, 0.0);
    for_each_pair(n, [&](std::size_t, std::size_t i, std::size_t j) {
        if (rng.uniform() < zero_prob) return;
        const double v = rng.uniform(lo, hi);
        w(i, j) = w(j, i) = v;
    });
    return w;
}

} // namespace gridsync::testing
