#pragma once

#include <cstddef>
#include <vector>

namespace gridsync {

using Vec = std::vector<double>;

// Dense row-major matrix. Desk-scale problems (n up to a few hundred), so no
// sparsity or blocking anywhere.
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return a_; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Vec matvec(const Mat& m, const Vec& x);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double norm_inf(const Vec& v);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending
// order. Converges quadratically; sweeps stop when the off-diagonal norm
// drops below 1e-14 times the Frobenius norm.
Vec symmetric_eigenvalues(Mat a);

// Union-find connectivity of the undirected graph with edges where
// weights(i,j) > 0.
bool weights_connected(const Mat& weights);

} // namespace gridsync
