#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gridsync/linalg.hpp"

namespace gridsync {

// Static parameters of one oscillator network. Damping D and natural
// frequencies omega are per node; coupling P and phase shifts phi are per
// ordered pair with zero diagonals. Inertia M is present only for the
// second-order model. Immutable after construction by convention: nothing in
// the library mutates a network it was handed.
struct CouplingNetwork {
    std::size_t n = 0;
    Vec damping;              // D_i > 0, seconds
    std::optional<Vec> inertia; // M_i > 0, seconds
    Vec natural_freq;         // omega_i, per-unit power
    Mat coupling;             // P_ij >= 0, zero diagonal
    Mat phase_shift;          // phi_ij in [0, pi/2), zero diagonal

    // Classic Kuramoto instance: D = 1, phi = 0, P_ij = K/n.
    static CouplingNetwork classic_kuramoto(const Vec& omega, double coupling_gain);
};

// Directed influence graph of the coupling matrix: P_ij > 0 is an edge from
// j to i (j's state enters oscillator i's equation).
struct GraphView {
    std::size_t n = 0;
    std::vector<std::vector<bool>> adjacency; // adjacency[i][j] <=> edge j -> i

    static GraphView of(const CouplingNetwork& net);
};

// Throws the first violated invariant: InvalidDamping, InvalidPhaseShift,
// NonzeroDiagonal, NegativeCoupling or ShapeMismatch. Side-effect-free.
void validate(const CouplingNetwork& net);

// True iff some node is reachable by a directed path from every other node.
// Checked by reverse BFS from each candidate.
bool has_globally_reachable_node(const GraphView& g);

// P = P^T and phi = phi^T within 1e-12 absolute; phi entries on pairs with
// no coupling in either direction are ignored.
bool is_symmetric(const CouplingNetwork& net);

// P_ij > 0 for all i != j.
bool is_complete(const CouplingNetwork& net);

// Undirected connectivity of the graph induced by P.
bool is_connected(const CouplingNetwork& net);

// Largest phase shift over pairs that actually carry coupling; 0 when the
// network has no edges.
double phi_max(const CouplingNetwork& net);

// True when all phase shifts on coupled pairs are zero.
bool is_lossless(const CouplingNetwork& net);

} // namespace gridsync
