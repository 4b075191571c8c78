#include "qamplify/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "qamplify/common.hpp"

namespace qamplify::linalg {

std::vector<double> matvec(const Matrix &a, const std::vector<double> &x) {
  if (x.size() != a.cols()) throw SchemaError("matvec: dimension mismatch");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * x[c];
    out[r] = acc;
  }
  return out;
}

std::vector<double> solve_linear(Matrix a, std::vector<double> b, double pivot_tol) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw SchemaError("solve_linear: not square");

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  double max_pivot = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(a(perm[r], k)) > std::abs(a(perm[best], k))) best = r;
    }
    std::swap(perm[k], perm[best]);
    const double pivot = a(perm[k], k);
    max_pivot = std::max(max_pivot, std::abs(pivot));
    if (std::abs(pivot) <= pivot_tol * std::max(max_pivot, 1.0)) {
      // rank deficiency: freeze this unknown at zero (row becomes x_k = 0;
      // stale column-k entries below only ever multiply the frozen zero)
      for (std::size_t c = k; c < n; ++c) a(perm[k], c) = 0.0;
      a(perm[k], k) = 1.0;
      b[perm[k]] = 0.0;
      continue;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a(perm[r], k) / pivot;
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) a(perm[r], c) -= f * a(perm[k], c);
      b[perm[r]] -= f * b[perm[k]];
    }
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t ki = n; ki-- > 0;) {
    double acc = b[perm[ki]];
    for (std::size_t c = ki + 1; c < n; ++c) acc -= a(perm[ki], c) * x[c];
    x[ki] = acc / a(perm[ki], ki);
  }
  return x;
}

double ols_r_squared(const Matrix &x, const std::vector<double> &y) {
  const std::size_t n = x.rows();
  if (y.size() != n || n == 0) throw SchemaError("ols_r_squared: dimension mismatch");
  const std::size_t p = x.cols() + 1;  // intercept first

  Matrix xtx(p, p);
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(p);
    row[0] = 1.0;
    for (std::size_t c = 0; c < x.cols(); ++c) row[c + 1] = x(i, c);
    for (std::size_t a = 0; a < p; ++a) {
      xty[a] += row[a] * y[i];
      for (std::size_t b = a; b < p; ++b) xtx(a, b) += row[a] * row[b];
    }
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < a; ++b) xtx(a, b) = xtx(b, a);

  const std::vector<double> beta = solve_linear(xtx, xty);

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);

  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = beta[0];
    for (std::size_t c = 0; c < x.cols(); ++c) fit += beta[c + 1] * x(i, c);
    sse += (y[i] - fit) * (y[i] - fit);
    sst += (y[i] - mean) * (y[i] - mean);
  }
  if (sst <= 0.0) return 0.0;
  return 1.0 - sse / sst;
}

EigenResult jacobi_eigen(Matrix sym, int max_sweeps) {
  const std::size_t n = sym.rows();
  if (sym.cols() != n) throw SchemaError("jacobi_eigen: not square");

  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += sym(p, q) * sym(p, q);
    if (off < 1e-28) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = sym(p, q);
        if (apq == 0.0) continue;
        const double theta = (sym(q, q) - sym(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t i = 0; i < n; ++i) {
          const double aip = sym(i, p), aiq = sym(i, q);
          sym(i, p) = c * aip - s * aiq;
          sym(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = sym(p, i), aqi = sym(q, i);
          sym(p, i) = c * api - s * aqi;
          sym(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  EigenResult out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = sym(i, i);
  out.vectors = std::move(v);
  return out;
}

}  // namespace qamplify::linalg
