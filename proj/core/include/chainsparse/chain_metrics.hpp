#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chainsparse/code.hpp"

namespace chainsparse {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

/// A chain of length l: coordinates a(1..l) and word indices c(1..l) with
/// c(i)[a(i)] = 1 and c(i)[a(j)] = 0 whenever i < j. Word entries index into
/// the code the witness was computed for.
struct ChainWitness {
  std::vector<std::size_t> coordinates;
  std::vector<std::size_t> words;

  [[nodiscard]] std::size_t length() const noexcept { return coordinates.size(); }
};

bool is_valid_chain(const Code& code, const ChainWitness& witness);

struct ChainLengthResult {
  std::size_t value = 0;
  ChainWitness witness;
  std::uint64_t nodes = 0;
};

/// Exact chain length by memoized search over contraction states.
///
/// A longest chain can always be built back to front: its last coordinate is
/// absent from every earlier word, so CL(S) = 1 + max over support columns k
/// of CL(S minus the words containing k). States are word subsets; only
/// columns whose restriction to the state is inclusion-minimal are expanded,
/// since a smaller deleted set leaves a superset of words. Throws
/// InexactError (with the deepest contraction depth reached as lower bound)
/// once more than `budget` states have been expanded.
ChainLengthResult chain_length_exact(const Code& code, std::uint64_t budget = kDefaultNodeBudget);

struct ChainBounds {
  std::size_t lower = 0;
  std::size_t upper = 0;
  ChainWitness witness;  // certifies `lower`
};

/// Greedy lower bound and the support-size upper bound.
ChainBounds chain_length_bounds(const Code& code);

/// Greedy chain: repeatedly take a lightest remaining word, pick its
/// coordinate that occurs in the fewest remaining words, and delete every
/// word containing it. Returned in chain order.
ChainWitness greedy_chain(const Code& code);

/// Upper bound min(|supp|, #nonzero words).
std::size_t chain_length_upper(const Code& code);

/// A coordinate set S where every j in S is hit by a word avoiding S \ {j}.
struct NrdWitness {
  std::vector<std::size_t> coordinates;
  std::vector<std::size_t> words;  // words[k] witnesses coordinates[k]
};

bool is_valid_nrd(const Code& code, const NrdWitness& witness);

struct NrdResult {
  std::size_t value = 0;
  NrdWitness witness;
  std::uint64_t nodes = 0;
};

NrdResult nrd_exact(const Code& code, std::uint64_t budget = kDefaultNodeBudget);

inline constexpr std::size_t kUnionClosureWordLimit = 20;
inline constexpr std::size_t kUnionClosureSizeLimit = 1U << 14;

/// Longest strictly ascending chain of nonempty sets in the union closure of
/// the code. Oracle only: enumerates the closure, so throws InputError beyond
/// kUnionClosureWordLimit nonzero words or kUnionClosureSizeLimit closure sets.
std::size_t union_closure_chain_length(const Code& code);

/// |C| <= (m+1)^NRD(C). Propagates InexactError from nrd_exact.
bool cardinality_bound_check(const Code& code, std::uint64_t budget = kDefaultNodeBudget);

}  // namespace chainsparse
