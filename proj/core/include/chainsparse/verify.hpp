#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainsparse/code.hpp"

namespace chainsparse {

enum class VerificationMode { kExhaustive, kSampled };

struct VerificationReport {
  VerificationMode mode = VerificationMode::kExhaustive;
  double epsilon = 0.0;
  std::size_t words_checked = 0;
  double max_over = 0.0;   // largest (approx - exact) / exact
  double max_under = 0.0;  // largest (exact - approx) / exact
  std::optional<std::size_t> worst_word;
  std::uint64_t sample_seed = 0;
  bool pass = false;

  [[nodiscard]] double max_deviation() const noexcept { return std::max(max_over, max_under); }
};

/// Checks every distinct nonzero word. Words of zero true weight must also
/// have zero approximate weight (up to the absolute floor).
VerificationReport verify_sparsifier(const Code& code, const WeightVector& w,
                                     const WeightVector& tilde, double epsilon);

/// Checks `sample_size` words drawn uniformly with replacement.
VerificationReport verify_sparsifier_sampled(const Code& code, const WeightVector& w,
                                             const WeightVector& tilde, double epsilon,
                                             std::size_t sample_size, std::uint64_t seed);

/// Relative slack in every "density <= d" and "weight <= alpha d" test.
inline constexpr double kDensitySlack = 1e-9;

struct CountingRow {
  std::size_t alpha = 0;
  double threshold = 0.0;  // alpha * d
  std::uint64_t count = 0;
  long double bound = 0.0L;
  bool pass = false;
};

struct CountingAudit {
  std::vector<CountingRow> rows;
  bool pass = true;
};

struct CountingOptions {
  CopySpan copies;      // word weights count copies
  std::uint64_t m = 0;  // ambient length for (m+1)^alpha; 0 means the code's length (with copies)
};

/// binom(CL, alpha) (m+1)^alpha in extended precision.
long double counting_bound(std::size_t chain_length, std::size_t alpha, std::uint64_t m);

/// For alpha = 1..alpha_max counts distinct words (the zero word included)
/// of weight <= alpha d and compares with counting_bound(cl_value, alpha, m).
CountingAudit counting_bound_audit(const Code& code, std::size_t cl_value, double d,
                                   std::size_t alpha_max, const CountingOptions& options = {});

struct ConcentrationEstimate {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double rate = 0.0;
  double bound = 0.0;  // min(1, 2 exp(-0.38 eps^2 ell p))
  double sigma = 0.0;  // binomial standard error at the bound
  bool pass = false;   // rate <= bound + 3 sigma
};

/// Sums ell independent variables equal to 1/p with probability p and
/// counts the trials where the sum leaves (1 +- eps) ell.
ConcentrationEstimate concentration_monte_carlo(std::size_t ell, double p, double epsilon,
                                                std::size_t trials, std::uint64_t seed);

}  // namespace chainsparse
