#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainsparse/code.hpp"
#include "chainsparse/sparsify.hpp"
#include "chainsparse/verify.hpp"

namespace chainsparse {

struct WeightedParams {
  SparsifyParams sparsify;  // its epsilon is replaced by each call's own accuracy
  double q_constant = 40.0;
  bool small_eps_shortcuts = true;     // return w unchanged for eps below 1/sqrt(m) or 8/sqrt(m)
  std::optional<std::size_t> reference_m;  // m in the m^3 weight cap; default: positive coordinates
};

/// Copy counts b(i) = floor(2 w(i) / eps) of the duplication reduction.
struct DuplicationPlan {
  std::vector<std::uint64_t> copies;
  std::uint64_t m_tilde = 0;
  double scale = 0.0;  // eps / 2
};

/// `normalized` must have every entry >= 1.
DuplicationPlan make_duplication_plan(const WeightVector& normalized, double epsilon);

/// For every word, (eps/2) * (copies it covers) lies in (1 +- eps/2) <w, c>,
/// with weights normalized by their minimum positive value. Exact check.
bool duplication_fidelity_check(const Code& code, const WeightVector& w, double epsilon);

struct BoundedReport {
  double epsilon = 0.0;
  std::string shortcut;         // empty, "small-eps" or "no-weight"
  std::size_t m_effective = 0;  // coordinates of positive weight
  double min_weight = 0.0;
  std::uint64_t m_tilde = 0;
  SparsifyReport inner;
  VerificationReport verification;
  std::size_t output_support = 0;
};

struct BoundedResult {
  WeightVector weights;
  BoundedReport report;
};

/// Duplicates coordinate i floor(2 w(i) / eps) times (after dropping zero
/// weights and dividing by the minimum weight), sparsifies the unweighted
/// duplicate at eps/3, and scales back by eps/2. Throws InputError if a
/// normalized weight exceeds reference_m^3 and CertificateViolation if the
/// result fails exhaustive verification.
BoundedResult sparsify_bounded_weights(const Code& code, const WeightVector& w, double epsilon,
                                       const WeightedParams& params);

/// t(i) = floor(log w(i) / (3 log m)) for normalized weights; coordinates of
/// weight zero have no group.
struct WeightGrouping {
  std::size_t m = 0;
  double min_weight = 0.0;
  std::vector<std::optional<long>> t;
  std::map<long, std::vector<std::size_t>> groups;  // t -> I_t
};

WeightGrouping group_weights(const WeightVector& w, std::size_t m);

/// max of t over the positive-weight support of `word`; none if there is none.
std::optional<long> word_type(const BitVector& word, const WeightGrouping& grouping);

/// (C_t u C_{t+1}) restricted to I_t for one group.
struct GroupSubcode {
  long t = 0;
  std::vector<std::size_t> coordinates;  // I_t
  Code code;
  bool proper = false;                   // has a nonzero word
};

std::vector<GroupSubcode> group_subcodes(const Code& code, const WeightGrouping& grouping);

struct GroupRecord {
  long t = 0;
  std::size_t size = 0;
  std::size_t words = 0;
  bool proper = false;
  std::size_t output_support = 0;
  double max_normalized_weight = 0.0;  // max of w~/min_weight on I_t
  bool within_cap = true;              // max_normalized_weight <= 2 m^(3t+4)
  std::optional<BoundedReport> bounded;
};

struct WeightedReport {
  double epsilon = 0.0;
  std::string shortcut;
  std::size_t m_effective = 0;
  double min_weight = 0.0;
  std::vector<GroupRecord> groups;
  VerificationReport verification;
  std::size_t output_support = 0;
};

struct WeightedResult {
  WeightVector weights;
  WeightedReport report;
};

/// Groups coordinates by weight scale and, for every proper group t,
/// sparsifies (C_t u C_{t+1}) restricted to I_t together with the all-ones
/// word on I_t at eps/2; the group results are summed.
WeightedResult sparsify_weighted(const Code& code, const WeightVector& w, double epsilon,
                                 const WeightedParams& params);

struct DimFreePass {
  int kind = 1;  // 1: repeated pass, 2: final pair
  double epsilon = 0.0;
  std::size_t support_before = 0;
  std::size_t support_after = 0;
  double log6_bound = 0.0;  // log2(support_before)^6, logged only
  WeightedReport report;
};

struct DimFreeReport {
  double epsilon = 0.0;
  double q_constant = 0.0;
  std::size_t cl_bound = 0;
  double log2_threshold = 0.0;  // case 1 runs while log2(support) >= CL / eps^2
  std::size_t iteration_cap = 0;
  bool stopped_without_progress = false;
  std::vector<DimFreePass> passes;
  double composed_eps = 0.0;
  bool composed_within_eps = false;
  VerificationReport verification;
  std::size_t input_support = 0;
  std::size_t output_support = 0;
};

struct DimFreeResult {
  WeightVector weights;
  DimFreeReport report;
};

/// Iterated log: how many times log2 must be applied to drop to <= 1.
std::size_t log_star(double m);

/// Applies sparsify_weighted at eps / (Q log2 m') while log2 m' >= CL / eps^2,
/// m' being the current support, at most log*(m) + 3 times; a pass that
/// does not shrink the support ends this phase early. Then one pass at
/// eps / (Q log2 m') and one at eps / 2. Requires eps <= 1/2. Throws
/// StagnationError if the support never shrinks although the first phase
/// applied, and CertificateViolation if the result fails verification.
DimFreeResult sparsify_dimension_free(const Code& code, const WeightVector& w, double epsilon,
                                      const WeightedParams& params);

struct ErrorSeries {
  double sum = 0.0;
  std::vector<double> terms;  // the x_i, x_0 = q
  bool increasing = false;    // the x_i grew at every step
};

/// Sum of 1/x_i with x_0 = q and x_{i+1} = 2^(x_i^(1/6)), up to `max_terms`
/// terms or until 1/x_i drops below 1e-18.
ErrorSeries error_series_root(double q, std::size_t max_terms = 64);

/// Same series with x_{i+1} = 2^(x_i / 6), the growth implied by
/// m_i <= log^6(m_{i-1}) read as q_{i-1} >= 2^(q_i / 6).
ErrorSeries error_series_linear(double q, std::size_t max_terms = 64);

}  // namespace chainsparse
