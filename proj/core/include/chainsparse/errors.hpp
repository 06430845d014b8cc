#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chainsparse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad coordinate, length mismatch, limits).
class InputError : public Error {
 public:
  using Error::Error;
};

/// An exact search ran out of its node budget. `lower_bound()` is the best
/// value certified before giving up.
class InexactError : public Error {
 public:
  InexactError(const std::string& what, std::size_t lower_bound)
      : Error(what), lower_bound_(lower_bound) {}
  [[nodiscard]] std::size_t lower_bound() const noexcept { return lower_bound_; }

 private:
  std::size_t lower_bound_;
};

/// Rejection sampling exhausted its attempt cap.
class SamplingFailure : public Error {
 public:
  using Error::Error;
};

/// A decomposition or sparsifier certificate failed its a-posteriori check.
class CertificateViolation : public Error {
 public:
  using Error::Error;
};

/// The dimension-free loop stopped making progress.
class StagnationError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainsparse
