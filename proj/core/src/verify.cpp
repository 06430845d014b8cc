#include "chainsparse/verify.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "chainsparse/errors.hpp"
#include "chainsparse/rng.hpp"

namespace chainsparse {

namespace {

void check_dimensions(const Code& code, const WeightVector& w, const WeightVector& tilde) {
  if (w.m() != code.m() || tilde.m() != code.m()) {
    throw InputError("weight vectors of length " + std::to_string(w.m()) + " and " +
                     std::to_string(tilde.m()) + " do not match m = " + std::to_string(code.m()));
  }
}

// Folds one word into the report; returns false if the word fails.
bool check_word(const BitVector& word, std::size_t index, const WeightVector& w,
                const WeightVector& tilde, VerificationReport& report) {
  const double exact = weighted_value(word, w);
  const double approx = weighted_value(word, tilde);
  ++report.words_checked;
  if (exact == 0.0) {
    if (approx <= kAbsoluteFloor) return true;
    report.max_over = INFINITY;
    report.worst_word = index;
    return false;
  }
  const double rel = (approx - exact) / exact;
  if (rel > report.max_over || -rel > report.max_under) {
    const double before = report.max_deviation();
    report.max_over = std::max(report.max_over, rel);
    report.max_under = std::max(report.max_under, -rel);
    if (report.max_deviation() > before || !report.worst_word) report.worst_word = index;
  }
  return within_relative(approx, exact, report.epsilon);
}

}  // namespace

VerificationReport verify_sparsifier(const Code& code, const WeightVector& w,
                                     const WeightVector& tilde, double epsilon) {
  check_dimensions(code, w, tilde);
  VerificationReport report;
  report.epsilon = epsilon;
  report.pass = true;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i].none()) continue;
    if (!check_word(code[i], i, w, tilde, report)) report.pass = false;
  }
  return report;
}

VerificationReport verify_sparsifier_sampled(const Code& code, const WeightVector& w,
                                             const WeightVector& tilde, double epsilon,
                                             std::size_t sample_size, std::uint64_t seed) {
  check_dimensions(code, w, tilde);
  VerificationReport report;
  report.mode = VerificationMode::kSampled;
  report.epsilon = epsilon;
  report.sample_seed = seed;
  report.pass = true;
  if (code.empty()) return report;
  Rng rng = make_rng(seed, "verify");
  std::uniform_int_distribution<std::size_t> pick(0, code.size() - 1);
  for (std::size_t s = 0; s < sample_size; ++s) {
    const std::size_t i = pick(rng);
    if (code[i].none()) continue;
    if (!check_word(code[i], i, w, tilde, report)) report.pass = false;
  }
  return report;
}

long double counting_bound(std::size_t chain_length, std::size_t alpha, std::uint64_t m) {
  if (alpha > chain_length) return 0.0L;
  long double binom = 1.0L;
  for (std::size_t j = 1; j <= alpha; ++j) {
    binom = binom * static_cast<long double>(chain_length - alpha + j) / static_cast<long double>(j);
  }
  binom = std::round(binom);
  return binom * std::pow(static_cast<long double>(m) + 1.0L, static_cast<long double>(alpha));
}

CountingAudit counting_bound_audit(const Code& code, std::size_t cl_value, double d,
                                   std::size_t alpha_max, const CountingOptions& options) {
  const std::uint64_t m = options.m != 0 ? options.m
                          : options.copies.empty()
                              ? code.m()
                              : std::accumulate(options.copies.begin(), options.copies.end(),
                                                std::uint64_t{0});
  std::vector<std::uint64_t> weights;
  weights.reserve(code.size());
  for (const auto& word : code.words()) weights.push_back(word_weight(word, options.copies));

  CountingAudit audit;
  for (std::size_t alpha = 1; alpha <= alpha_max; ++alpha) {
    CountingRow row;
    row.alpha = alpha;
    row.threshold = static_cast<double>(alpha) * d;
    const double limit = row.threshold * (1.0 + kDensitySlack);
    for (auto wt : weights) {
      if (static_cast<double>(wt) <= limit) ++row.count;
    }
    row.bound = counting_bound(cl_value, alpha, m);
    row.pass = static_cast<long double>(row.count) <= row.bound;
    audit.pass = audit.pass && row.pass;
    audit.rows.push_back(row);
  }
  return audit;
}

ConcentrationEstimate concentration_monte_carlo(std::size_t ell, double p, double epsilon,
                                                std::size_t trials, std::uint64_t seed) {
  if (ell == 0) throw InputError("ell must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw InputError("p must lie in (0, 1]");
  if (trials == 0) throw InputError("trials must be at least 1");
  ConcentrationEstimate est;
  est.trials = trials;
  const double target = static_cast<double>(ell);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, "concentration", t);
    std::bernoulli_distribution coin(p);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ell; ++i) hits += coin(rng) ? 1 : 0;
    const double sum = static_cast<double>(hits) / p;
    if (!within_relative(sum, target, epsilon)) ++est.failures;
  }
  est.rate = static_cast<double>(est.failures) / static_cast<double>(trials);
  est.bound = std::min(1.0, 2.0 * std::exp(-0.38 * epsilon * epsilon * target * p));
  est.sigma = std::sqrt(est.bound * (1.0 - est.bound) / static_cast<double>(trials));
  est.pass = est.rate <= est.bound + 3.0 * est.sigma;
  return est;
}

}  // namespace chainsparse
