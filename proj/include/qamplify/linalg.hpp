#ifndef QAMPLIFY_LINALG_HPP
#define QAMPLIFY_LINALG_HPP

#include <cstddef>
#include <vector>

namespace qamplify::linalg {

// Dense row-major matrix. Small problems only (<= a few hundred columns).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  const std::vector<double> &data() const { return data_; }
  std::vector<double> &data() { return data_; }

  std::vector<double> row(std::size_t r) const {
    return {data_.begin() + static_cast<long>(r * cols_),
            data_.begin() + static_cast<long>((r + 1) * cols_)};
  }

  bool operator==(const Matrix &o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> matvec(const Matrix &a, const std::vector<double> &x);

// Solves a*x = b by Gaussian elimination with partial pivoting. Pivots below
// `pivot_tol` (relative to the largest pivot seen) zero the corresponding
// unknown instead of aborting, so rank-deficient normal equations still yield
// a least-squares-consistent solution.
std::vector<double> solve_linear(Matrix a, std::vector<double> b,
                                 double pivot_tol = 1e-12);

// Ordinary least squares of y on columns of x plus an intercept.
// Returns R^2 = 1 - SSE/SST (0 when SST vanishes).
double ols_r_squared(const Matrix &x, const std::vector<double> &y);

struct EigenResult {
  std::vector<double> values;  // unsorted
  Matrix vectors;              // column j = eigenvector for values[j]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
EigenResult jacobi_eigen(Matrix sym, int max_sweeps = 100);

}  // namespace qamplify::linalg

#endif
