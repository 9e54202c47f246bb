#include "sltk/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "sltk/error.hpp"

namespace sltk {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(rows_ * cols_));
  }
}

Vector multiply(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) {
    throw DimensionError("matrix has " + std::to_string(m.cols()) + " columns but vector has " +
                         std::to_string(x.size()) + " entries");
  }
  Vector y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

double max_norm(const Matrix& m) noexcept {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

Matrix abs(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  auto src = m.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::abs(src[i]);
  return out;
}

double l2_norm(std::span<const double> v) noexcept {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

namespace {

// z = M^T M v
Vector gram_apply(const Matrix& m, const Vector& v) {
  const Vector mv = multiply(m, v);
  Vector z(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) z[c] += row[c] * mv[r];
  }
  return z;
}

// Largest eigenvalue of M^T M by power iteration from unit `v`, via the
// Rayleigh quotient. Negative if the iterate collapsed to zero.
double power_iterate(const Matrix& m, Vector v, double tol, std::size_t cap, double scale) {
  double estimate = 0.0;
  for (std::size_t it = 0; it < cap; ++it) {
    Vector z = gram_apply(m, v);
    double rq = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) rq += v[i] * z[i];
    const double norm = l2_norm(z);
    if (norm <= scale * 1e-14) return -1.0;
    for (double& x : z) x /= norm;
    const double previous = estimate;
    estimate = rq;
    v = std::move(z);
    if (it > 0 && std::abs(estimate - previous) <= tol * estimate) break;
  }
  return estimate;
}

}  // namespace

double spectral_norm(const Matrix& m, double tol) {
  if (m.size() == 0) return 0.0;
  const double scale = max_norm(m);
  if (scale == 0.0) return 0.0;
  const std::size_t n = m.cols();
  // 10*(rows+cols) iterations, with a floor so nearly-degenerate top
  // singular values on tiny matrices still converge.
  const std::size_t cap = std::max<std::size_t>(10 * (m.rows() + m.cols()), 1000);
  // The Gram scale is ~scale^2; use it to detect a collapsed iterate.
  const double gram_scale = scale * scale;

  Vector start(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = power_iterate(m, start, tol, cap, gram_scale);
  for (std::size_t j = 0; lambda < 0.0 && j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    lambda = power_iterate(m, e, tol, cap, gram_scale);
  }
  return lambda <= 0.0 ? 0.0 : std::sqrt(lambda);
}

}  // namespace sltk
