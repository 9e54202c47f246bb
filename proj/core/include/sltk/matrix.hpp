#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sltk {

using Vector = std::vector<double>;

/// Dense row-major double matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// y = M x.
[[nodiscard]] Vector multiply(const Matrix& m, std::span<const double> x);

/// Largest absolute entry.
[[nodiscard]] double max_norm(const Matrix& m) noexcept;

/// Entrywise absolute value.
[[nodiscard]] Matrix abs(const Matrix& m);

/// Largest singular value by power iteration on M^T M.
///
/// Starts from the normalized all-ones vector and stops once the relative
/// change of the Rayleigh quotient drops below `tol`, or after
/// max(10*(rows+cols), 1000) iterations. If the iterate collapses (start
/// vector orthogonal to the row space) it restarts from the canonical basis
/// vectors in order. Deterministic.
[[nodiscard]] double spectral_norm(const Matrix& m, double tol = 1e-9);

[[nodiscard]] double l2_norm(std::span<const double> v) noexcept;

}  // namespace sltk
