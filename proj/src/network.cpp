#include "gridsync/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gridsync/errors.hpp"
#include "gridsync/torus.hpp"

namespace gridsync {

CouplingNetwork CouplingNetwork::classic_kuramoto(const Vec& omega, double coupling_gain) {
    CouplingNetwork net;
    net.n = omega.size();
    net.damping.assign(net.n, 1.0);
    net.natural_freq = omega;
    net.coupling = Mat(net.n, net.n, 0.0);
    net.phase_shift = Mat(net.n, net.n, 0.0);
    const double k = coupling_gain / static_cast<double>(net.n);
    for (std::size_t i = 0; i < net.n; ++i)
        for (std::size_t j = 0; j < net.n; ++j)
            if (i != j) net.coupling(i, j) = k;
    return net;
}

GraphView GraphView::of(const CouplingNetwork& net) {
    GraphView g;
    g.n = net.n;
    g.adjacency.assign(net.n, std::vector<bool>(net.n, false));
    for (std::size_t i = 0; i < net.n; ++i)
        for (std::size_t j = 0; j < net.n; ++j)
            if (i != j && net.coupling(i, j) > 0.0) g.adjacency[i][j] = true;
    return g;
}

void validate(const CouplingNetwork& net) {
    const std::size_t n = net.n;
    if (n == 0) fail(Errc::shape_mismatch, "network has no oscillators");
    if (net.damping.size() != n)
        fail(Errc::shape_mismatch, "damping vector has size " + std::to_string(net.damping.size()) +
                                       ", expected " + std::to_string(n));
    if (net.inertia && net.inertia->size() != n)
        fail(Errc::shape_mismatch, "inertia vector has size " + std::to_string(net.inertia->size()) +
                                       ", expected " + std::to_string(n));
    if (net.natural_freq.size() != n)
        fail(Errc::shape_mismatch, "natural frequency vector has size " +
                                       std::to_string(net.natural_freq.size()) + ", expected " +
                                       std::to_string(n));
    if (net.coupling.rows() != n || net.coupling.cols() != n)
        fail(Errc::shape_mismatch, "coupling matrix is not n-by-n");
    if (net.phase_shift.rows() != n || net.phase_shift.cols() != n)
        fail(Errc::shape_mismatch, "phase shift matrix is not n-by-n");

    for (std::size_t i = 0; i < n; ++i) {
        if (!(net.damping[i] > 0.0) || !std::isfinite(net.damping[i]))
            fail(Errc::invalid_damping, "D[" + std::to_string(i + 1) + "] must be positive");
        if (net.inertia && (!((*net.inertia)[i] > 0.0) || !std::isfinite((*net.inertia)[i])))
            fail(Errc::invalid_damping, "M[" + std::to_string(i + 1) + "] must be positive");
        if (!std::isfinite(net.natural_freq[i]))
            fail(Errc::shape_mismatch, "omega[" + std::to_string(i + 1) + "] is not finite");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (net.coupling(i, i) != 0.0 || net.phase_shift(i, i) != 0.0)
            fail(Errc::nonzero_diagonal, "P and phi must have zero diagonals (row " +
                                             std::to_string(i + 1) + ")");
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double p = net.coupling(i, j);
            const double phi = net.phase_shift(i, j);
            if (!(p >= 0.0) || !std::isfinite(p))
                fail(Errc::negative_coupling, "P[" + std::to_string(i + 1) + "][" +
                                                  std::to_string(j + 1) + "] must be non-negative");
            if (!(phi >= 0.0) || !(phi < kPi / 2.0))
                fail(Errc::invalid_phase_shift, "phi[" + std::to_string(i + 1) + "][" +
                                                    std::to_string(j + 1) +
                                                    "] must lie in [0, pi/2)");
        }
    }
}

bool has_globally_reachable_node(const GraphView& g) {
    const std::size_t n = g.n;
    if (n <= 1) return true;
    // Node r is globally reachable when every node has a directed path to r
    // along listening chains (i listens to j when P_ij > 0). In the stored
    // influence orientation that is exactly forward reachability from r:
    // BFS from r expanding u to {v : edge u -> v}, i.e. adjacency[v][u].
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{r};
        seen[r] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (!seen[v] && g.adjacency[v][u]) { // edge u -> v
                    seen[v] = true;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        if (count == n) return true;
    }
    return false;
}

bool is_symmetric(const CouplingNetwork& net) {
    constexpr double tol = 1e-12;
    for (std::size_t i = 0; i < net.n; ++i)
        for (std::size_t j = i + 1; j < net.n; ++j) {
            if (std::abs(net.coupling(i, j) - net.coupling(j, i)) > tol) return false;
            const bool coupled = net.coupling(i, j) > 0.0 || net.coupling(j, i) > 0.0;
            if (coupled && std::abs(net.phase_shift(i, j) - net.phase_shift(j, i)) > tol)
                return false;
        }
    return true;
}

bool is_complete(const CouplingNetwork& net) {
    for (std::size_t i = 0; i < net.n; ++i)
        for (std::size_t j = 0; j < net.n; ++j)
            if (i != j && !(net.coupling(i, j) > 0.0)) return false;
    return true;
}

bool is_connected(const CouplingNetwork& net) { return weights_connected(net.coupling); }

double phi_max(const CouplingNetwork& net) {
    double m = 0.0;
    for (std::size_t i = 0; i < net.n; ++i)
        for (std::size_t j = 0; j < net.n; ++j)
            if (i != j && net.coupling(i, j) > 0.0) m = std::max(m, net.phase_shift(i, j));
    return m;
}

bool is_lossless(const CouplingNetwork& net) { return phi_max(net) == 0.0; }

} // namespace gridsync
