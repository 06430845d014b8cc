#include "chainsparse/contraction.hpp"

#include <cmath>
#include <random>

#include "chainsparse/density.hpp"
#include "chainsparse/errors.hpp"

namespace chainsparse {

Code contract_step(const Code& code, std::size_t i) {
  if (i >= code.m()) throw InputError("coordinate " + std::to_string(i) + " out of range");
  std::vector<BitVector> kept;
  bool hit = false;
  for (const auto& w : code.words()) {
    if (w.test(i)) {
      hit = true;
    } else {
      kept.push_back(w);
    }
  }
  if (!hit) throw InputError("coordinate " + std::to_string(i) + " is not in the support");
  return Code(code.m(), std::move(kept), code.origin());
}

namespace {

bool keep_contracting(std::size_t cl, std::size_t alpha, ContractStop stop) {
  return stop == ContractStop::kWhileAtLeastAlpha ? cl >= alpha : cl > alpha;
}

}  // namespace

ContractionTrace contract(const Code& code, std::size_t alpha, Rng& rng,
                          const ContractOptions& options) {
  if (alpha == 0) throw InputError("alpha must be at least 1");
  ContractionTrace trace;
  trace.alpha = alpha;
  Code current = code;
  while (true) {
    const std::size_t cl = chain_length_exact(current, options.budget).value;
    trace.sizes.push_back(current.size());
    trace.chain_lengths.push_back(cl);
    if (!keep_contracting(cl, alpha, options.stop)) break;
    const auto supp = support_indices(current);
    std::uniform_int_distribution<std::size_t> pick(0, supp.size() - 1);
    const std::size_t i = supp[pick(rng)];
    trace.picked.push_back(i);
    current = contract_step(current, i);
  }
  if (!current.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, current.size() - 1);
    trace.returned = current[pick(rng)];
  }
  return trace;
}

double survival_lower_bound(std::size_t m, std::size_t chain_length, std::size_t alpha) {
  const double a = static_cast<double>(alpha);
  double binom = 1.0;
  if (alpha <= chain_length) {
    binom = std::exp(std::lgamma(static_cast<double>(chain_length) + 1.0) - std::lgamma(a + 1.0) -
                     std::lgamma(static_cast<double>(chain_length - alpha) + 1.0));
  }
  return std::pow(static_cast<double>(m) + 1.0, -a) / std::round(binom);
}

SurvivalEstimate survival_probability_experiment(const Code& code, const BitVector& target,
                                                 std::size_t alpha, std::size_t trials,
                                                 std::uint64_t seed,
                                                 const SurvivalOptions& options) {
  if (trials == 0) throw InputError("trials must be at least 1");
  if (alpha == 0) throw InputError("alpha must be at least 1");
  if (!code.contains(target)) throw InputError("target word is not in the code");
  if (options.check_precondition && code.nonzero_count() > 0) {
    const DensityResult phi = density(code, DensityMode::kExact);
    if (static_cast<double>(target.count()) > static_cast<double>(alpha) * phi.phi + 1e-9) {
      throw InputError("target weight exceeds alpha times the code density; the survival bound does not apply");
    }
  }
  SurvivalEstimate est;
  est.trials = trials;
  const ContractOptions copts{options.stop, options.budget};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, "contract", t);
    const auto trace = contract(code, alpha, rng, copts);
    if (trace.returned && *trace.returned == target) ++est.hits;
  }
  const std::size_t cl = chain_length_exact(code, options.budget).value;
  est.probability = static_cast<double>(est.hits) / static_cast<double>(trials);
  est.lower_bound = survival_lower_bound(code.m(), cl, alpha);
  est.sigma = std::sqrt(est.lower_bound * (1.0 - est.lower_bound) / static_cast<double>(trials));
  est.passes = est.probability >= est.lower_bound - 3.0 * est.sigma;
  return est;
}

}  // namespace chainsparse
