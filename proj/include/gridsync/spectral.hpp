#pragma once

#include <cstddef>
#include <utility>

#include "gridsync/linalg.hpp"
#include "gridsync/network.hpp"

namespace gridsync {

// Number of unordered pairs n(n-1)/2.
std::size_t pair_count(std::size_t n);

// Visits pairs in the canonical lexicographic order (1,2),(1,3),...,(n-1,n),
// calling f(k, i, j) with the flat pair index k and 0-based i < j. Every pair
// reduction in the library uses this order so serialized vectors are
// bit-reproducible.
template <typename F>
void for_each_pair(std::size_t n, F&& f) {
    std::size_t k = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) f(k++, i, j);
}

// Incidence matrix of the complete graph: row k encodes x_j - x_i for the
// k-th lexicographic pair (i,j). Satisfies H^T H = n I - 11^T.
class IncidenceMatrix {
  public:
    static IncidenceMatrix complete(std::size_t n) { return IncidenceMatrix(n); }

    std::size_t nodes() const noexcept { return n_; }
    std::size_t edges() const noexcept { return pair_count(n_); }

    Vec apply(const Vec& x) const;           // H x, the vector of differences
    Vec apply_transpose(const Vec& y) const; // H^T y
    Mat dense() const;

  private:
    explicit IncidenceMatrix(std::size_t n) : n_(n) {}
    std::size_t n_ = 0;
};

// Weighted graph Laplacian L = diag(row sums) - A.
struct Laplacian {
    Mat matrix;
    std::size_t n() const noexcept { return matrix.rows(); }
};

// Throws AsymmetricWeights unless weights = weights^T (zero diagonal assumed).
Laplacian laplacian(const Mat& weights);

// Algebraic connectivity: second-smallest eigenvalue of L.
double lambda2(const Laplacian& lap);

// Convenience: lambda2 of L(weights).
double lambda2_of_weights(const Mat& weights);

// cos of the angle between (D_1,...,D_n) and the all-ones vector, in (0, 1];
// equals 1 iff D is uniform.
double dihedral_cos(const Vec& d);

// Residual |LHS - RHS| of the diagonal simplification identity
//   (Hx)^T diag(D_i D_j) H D^{-1} H^T diag(P_ij cos phi_ij) sin(Hx)
//     = (sum_k D_k) (Hx)^T diag(P_ij cos phi_ij) sin(Hx),
// evaluated on the lifted difference vector Hx of theta in Delta(pi).
// Test oracle only. Throws NotSymmetric / NotPhaseCohesive.
double check_dotw_identity(const CouplingNetwork& net, const Vec& theta);

// Both sides of the algebraic-connectivity lower bound
//   (Bx)^T diag(A_ij) (Bx) >= (lambda2(L(A))/n) ||Hx||_2^2
// for a connected weighted graph. Returns {lhs, rhs}. Throws Disconnected.
std::pair<double, double> check_hx_bound(const Mat& weights, const Vec& x);

} // namespace gridsync
