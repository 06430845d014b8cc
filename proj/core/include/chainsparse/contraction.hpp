#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "chainsparse/chain_metrics.hpp"
#include "chainsparse/code.hpp"
#include "chainsparse/rng.hpp"

namespace chainsparse {

/// Removes every word with a 1 at coordinate `i`. Throws InputError when `i`
/// is out of range or outside the support.
Code contract_step(const Code& code, std::size_t i);

/// Loop condition of the contraction procedure.
enum class ContractStop {
  kWhileAtLeastAlpha,  // contract while CL >= alpha, stop once CL < alpha
  kWhileAboveAlpha,    // contract while CL > alpha, stop once CL <= alpha
};

struct ContractOptions {
  ContractStop stop = ContractStop::kWhileAtLeastAlpha;
  std::uint64_t budget = kDefaultNodeBudget;
};

struct ContractionTrace {
  std::size_t alpha = 0;
  std::vector<std::size_t> picked;         // contracted coordinates in order
  std::vector<std::size_t> sizes;          // word count before each step and at the end
  std::vector<std::size_t> chain_lengths;  // CL before each step and at the end
  std::optional<BitVector> returned;       // uniform surviving word, none if the code emptied
};

/// Contracts uniformly random support coordinates until the stop condition
/// holds, then returns a uniform surviving word. Throws InputError for
/// alpha == 0 and InexactError if an exact CL call runs out of budget.
ContractionTrace contract(const Code& code, std::size_t alpha, Rng& rng,
                          const ContractOptions& options = {});

/// (m+1)^-alpha / binom(CL, alpha); binom is taken as 1 when alpha > CL.
double survival_lower_bound(std::size_t m, std::size_t chain_length, std::size_t alpha);

struct SurvivalOptions {
  ContractStop stop = ContractStop::kWhileAboveAlpha;
  bool check_precondition = true;  // require weight(target) <= alpha * density
  std::uint64_t budget = kDefaultNodeBudget;
};

struct SurvivalEstimate {
  std::size_t trials = 0;
  std::size_t hits = 0;
  double probability = 0.0;
  double lower_bound = 0.0;
  double sigma = 0.0;  // binomial standard error at the bound
  bool passes = false;  // probability >= lower_bound - 3 sigma
};

/// Runs `trials` independent contractions, trial t drawing from substream
/// ("contract", t) of `seed`, and counts how often `target` is returned.
SurvivalEstimate survival_probability_experiment(const Code& code, const BitVector& target,
                                                 std::size_t alpha, std::size_t trials,
                                                 std::uint64_t seed,
                                                 const SurvivalOptions& options = {});

}  // namespace chainsparse
