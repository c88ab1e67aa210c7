#include "gridsync/spectral.hpp"

#include <cmath>

#include "gridsync/errors.hpp"
#include "gridsync/torus.hpp"

namespace gridsync {

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

Vec IncidenceMatrix::apply(const Vec& x) const {
    Vec y(edges(), 0.0);
    for_each_pair(n_, [&](std::size_t k, std::size_t i, std::size_t j) { y[k] = x[j] - x[i]; });
    return y;
}

Vec IncidenceMatrix::apply_transpose(const Vec& y) const {
    Vec x(n_, 0.0);
    for_each_pair(n_, [&](std::size_t k, std::size_t i, std::size_t j) {
        x[i] -= y[k];
        x[j] += y[k];
    });
    return x;
}

Mat IncidenceMatrix::dense() const {
    Mat h(edges(), n_, 0.0);
    for_each_pair(n_, [&](std::size_t k, std::size_t i, std::size_t j) {
        h(k, i) = -1.0;
        h(k, j) = 1.0;
    });
    return h;
}

Laplacian laplacian(const Mat& weights) {
    const std::size_t n = weights.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(weights(i, j) - weights(j, i)) > 1e-12)
                fail(Errc::asymmetric_weights, "Laplacian weights must be symmetric");

    Laplacian lap;
    lap.matrix = Mat(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            lap.matrix(i, j) = -weights(i, j);
            row += weights(i, j);
        }
        lap.matrix(i, i) = row;
    }
    return lap;
}

double lambda2(const Laplacian& lap) {
    const std::size_t n = lap.n();
    if (n < 2) return 0.0;
    Vec ev = symmetric_eigenvalues(lap.matrix);
    return std::max(0.0, ev[1]);
}

double lambda2_of_weights(const Mat& weights) { return lambda2(laplacian(weights)); }

double dihedral_cos(const Vec& d) {
    const double n = static_cast<double>(d.size());
    double sum = 0.0, sq = 0.0;
    for (double v : d) {
        sum += v;
        sq += v * v;
    }
    return sum / (std::sqrt(sq) * std::sqrt(n));
}

double check_dotw_identity(const CouplingNetwork& net, const Vec& theta) {
    if (!is_symmetric(net)) fail(Errc::not_symmetric, "dot-W identity requires P = P^T");
    auto arc = min_enclosing_arc(theta);
    if (!arc || arc->length >= kPi)
        fail(Errc::not_phase_cohesive, "dot-W identity requires theta in Delta(pi)");

    const std::size_t n = net.n;
    const auto H = IncidenceMatrix::complete(n);
    const Vec lifted = lift_to_arc(theta, *arc);
    const Vec x = H.apply(lifted);

    Vec lossless_w(pair_count(n), 0.0); // P_ij cos(phi_ij) per pair
    Vec dprod(pair_count(n), 0.0);      // D_i D_j per pair
    for_each_pair(n, [&](std::size_t k, std::size_t i, std::size_t j) {
        lossless_w[k] = net.coupling(i, j) * std::cos(net.phase_shift(i, j));
        dprod[k] = net.damping[i] * net.damping[j];
    });

    Vec ws(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) ws[k] = lossless_w[k] * std::sin(x[k]);

    Vec u = H.apply_transpose(ws);
    for (std::size_t i = 0; i < n; ++i) u[i] /= net.damping[i];
    const Vec z = H.apply(u);

    double lhs = 0.0, rhs = 0.0, kappa = 0.0;
    for (double dk : net.damping) kappa += dk;
    for (std::size_t k = 0; k < x.size(); ++k) {
        lhs += x[k] * dprod[k] * z[k];
        rhs += x[k] * lossless_w[k] * std::sin(x[k]);
    }
    rhs *= kappa;
    return std::abs(lhs - rhs);
}

std::pair<double, double> check_hx_bound(const Mat& weights, const Vec& x) {
    if (!weights_connected(weights)) fail(Errc::disconnected, "Hx bound requires a connected graph");
    const Laplacian lap = laplacian(weights);
    const std::size_t n = weights.rows();

    double lhs = 0.0, hx2 = 0.0;
    for_each_pair(n, [&](std::size_t, std::size_t i, std::size_t j) {
        const double d = x[j] - x[i];
        lhs += weights(i, j) * d * d;
        hx2 += d * d;
    });
    const double rhs = lambda2(lap) / static_cast<double>(n) * hx2;
    return {lhs, rhs};
}

} // namespace gridsync
