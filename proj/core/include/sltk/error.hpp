#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sltk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix shapes do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument lies outside its admissible range (e.g. u outside [0,1]).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain of a function (e.g. log of a non-positive number).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or degenerate parameter combination.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or document.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Request would exceed a hard resource limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Operation not supported for this input (e.g. non-ReLU construction).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A decomposition interval has no sample. `interval` is 1-based.
class CoverageError : public Error {
 public:
  CoverageError(int interval, const std::string& what)
      : Error(what), interval_(interval) {}
  [[nodiscard]] int interval() const noexcept { return interval_; }

 private:
  int interval_;
};

/// Pruning could not complete with the sampled neurons. This is the
/// low-probability event the sample counts are sized against, so callers
/// running Monte Carlo loops are expected to catch and count it.
class PruningFailure : public Error {
 public:
  PruningFailure(std::size_t layer, std::size_t out_index, std::size_t in_index,
                 std::string category, const std::string& what)
      : Error(what),
        layer_(layer),
        out_index_(out_index),
        in_index_(in_index),
        category_(std::move(category)) {}

  [[nodiscard]] std::size_t layer() const noexcept { return layer_; }
  [[nodiscard]] std::size_t out_index() const noexcept { return out_index_; }
  [[nodiscard]] std::size_t in_index() const noexcept { return in_index_; }
  [[nodiscard]] const std::string& category() const noexcept { return category_; }

 private:
  std::size_t layer_;
  std::size_t out_index_;
  std::size_t in_index_;
  std::string category_;
};

}  // namespace sltk
