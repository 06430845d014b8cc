#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainsparse/chain_metrics.hpp"
#include "chainsparse/code.hpp"
#include "chainsparse/rng.hpp"
#include "chainsparse/verify.hpp"

namespace chainsparse {

enum class SparsifyMode { kTheory, kPractical };

struct SparsifyParams {
  double epsilon = 0.5;
  double eta_constant = 1.0;
  double denom_constant = 1.0;
  std::optional<std::size_t> max_depth;  // default ceil(llog m)
  std::size_t attempt_cap = 100;         // rejection-sampling attempts per node
  std::size_t restart_cap = 3;           // full reruns after a failed final verification
  SparsifyMode mode = SparsifyMode::kPractical;
  std::uint64_t seed = 0;
  std::optional<std::size_t> cl_bound;   // known upper bound on CL of the input
  std::uint64_t budget = kDefaultNodeBudget;

  /// eta constant 1000, denominator 20.
  static SparsifyParams theory(double epsilon, std::uint64_t seed = 0);
  static SparsifyParams practical(double epsilon, std::uint64_t seed = 0);

  /// Throws InputError unless epsilon is in (0,1) and the constants are positive.
  void validate() const;
};

/// max(1, log2 log2 m).
double llog(double m);

/// eta_constant * log2(m) * (denom_constant * llog(m) / epsilon)^2. Throws
/// InputError for m < 2.
double compute_eta(double m, double epsilon, const SparsifyParams& params);

/// max(prod(1 + e) - 1, 1 - prod(1 - e)).
double compose_accuracy(const std::vector<double>& child_eps);

struct SubsampleResult {
  std::vector<std::uint64_t> sampled;  // copies kept per coordinate of the input code
  std::uint64_t sampled_size = 0;
  double weight = 1.0;                 // 1/p
  double p = 1.0;
  std::size_t attempts = 0;
  double max_error = 0.0;              // worst relative error over the words at acceptance
  bool degenerate = false;             // p >= 1 or empty support: everything kept
};

/// Keeps each unit coordinate independently with p = min(1, sqrt(eta CL / m'))
/// and weight 1/p, where m' is the support size counting copies. A draw is
/// accepted iff every distinct nonzero word keeps its weight within
/// (1 +- target_eps) and at most 2 sqrt(CL m' eta) units survive. Throws
/// SamplingFailure after `attempt_cap` rejected draws.
///
/// Units in one column class are interchangeable for the acceptance test, so
/// each attempt draws only the per-class totals; an accepted draw is then
/// spread over the class's units uniformly at random, which gives the same
/// distribution as sampling every unit.
SubsampleResult subsample_remaining(const Code& code, CopySpan copies, std::size_t cl_bound,
                                    double eta, double target_eps, std::size_t attempt_cap,
                                    Rng& rng);

struct SparsifyNodeRecord {
  std::string path;  // "r", then 'p' for the peeled child and 's' for the sampled child
  std::size_t depth = 0;
  std::uint64_t support = 0;  // m' counting copies
  std::size_t cl_bound = 0;
  double d = 0.0;
  std::uint64_t peeled = 0;
  std::uint64_t sampled = 0;
  std::size_t attempts = 0;
  double p = 1.0;
  double level_eps = 0.0;
  double max_error = 0.0;
  double multiplier = 1.0;
  double size_bound = 0.0;  // 4 CL (m/CL)^(1/2^depth) eta
  std::string leaf;         // empty for internal nodes: "empty", "depth" or "retain"
};

struct SparsifyReport {
  double epsilon = 0.0;
  double eta = 0.0;
  double eta_constant = 0.0;
  double denom_constant = 0.0;
  double level_eps = 0.0;
  double composed_eps = 0.0;  // compose_accuracy over max_depth levels
  std::size_t max_depth = 0;
  std::uint64_t seed = 0;
  SparsifyMode mode = SparsifyMode::kPractical;
  std::uint64_t m = 0;        // input length counting copies
  std::size_t root_cl = 0;
  std::size_t input_support = 0;
  std::size_t output_support = 0;
  std::size_t leaves = 0;
  std::size_t restarts = 0;
  std::vector<SparsifyNodeRecord> nodes;
  VerificationReport verification;
};

struct SparsifyResult {
  WeightVector weights;
  SparsifyReport report;
};

/// Recursive peel-and-subsample sparsifier for an unweighted code. The
/// result is verified exhaustively; a failed verification reruns the whole
/// recursion on fresh substreams up to restart_cap times before throwing
/// SamplingFailure.
SparsifyResult sparsify_unweighted(const Code& code, const SparsifyParams& params);

/// sparsify_unweighted on the code in which coordinate i is repeated
/// copies[i] times, without materializing the copies. The weight of i in the
/// result is the sum of the weights of its copies.
SparsifyResult sparsify_duplicated(const Code& code, CopySpan copies, const SparsifyParams& params);

}  // namespace chainsparse
