#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "chainsparse/chain_metrics.hpp"
#include "chainsparse/code.hpp"
#include "chainsparse/verify.hpp"

namespace chainsparse {

enum class DensityMode { kExact, kHeuristic };

/// Exact mode enumerates every subcode, so it is limited to this many
/// nonzero words.
inline constexpr std::size_t kExactSubcodeLimit = 20;

/// A subcode C' with its support size and chain length. In exact mode
/// `chain_length` is CL(C') and `phi` is the minimum density over all
/// subcodes. In heuristic mode `chain_length` is a certified lower bound on
/// CL(C'), so `phi` is an upper bound on both the density of C' and on the
/// density of the code.
struct DensityResult {
  double phi = 0.0;
  std::vector<std::size_t> witness;  // word indices into the code
  std::uint64_t support_size = 0;
  std::size_t chain_length = 0;
  bool exact = false;
};

/// Minimum over subcodes of |Supp(C')| / CL(C'). Ties prefer the larger
/// chain length. Support sizes count copies when `copies` is given. Throws
/// InputError when the code has no nonzero word, or in exact mode when it
/// has more than kExactSubcodeLimit nonzero words.
DensityResult density(const Code& code, DensityMode mode, CopySpan copies = {});

/// The minimum-density subcode found by `density`, if its density is at most
/// `d`. "None" is authoritative only in exact mode.
std::optional<DensityResult> find_sparse_subcode(const Code& code, double d, DensityMode mode,
                                                 CopySpan copies = {});

struct PeelRound {
  std::vector<std::size_t> coordinates;  // Supp(C'), in the input's coordinates
  std::vector<BitVector> words;          // C' lifted to the input's coordinates
  std::uint64_t support_size = 0;
  std::size_t chain_length = 0;
  double density = 0.0;
};

struct DecompositionResult {
  double d = 0.0;
  DensityMode mode = DensityMode::kExact;
  std::vector<std::size_t> peeled;  // T, ascending input coordinates
  std::vector<std::size_t> kept;    // complement of T
  std::uint64_t peeled_size = 0;    // |T| counting copies
  Code peel_code;                   // input restricted to T (origins compose)
  Code remaining_code;              // input restricted to the complement of T
  std::vector<PeelRound> rounds;
  std::size_t chain_length = 0;     // CL bound the certificates were checked against
  CountingAudit audit;              // remaining words against binom(CL, a) (m+1)^a
};

struct DecomposeOptions {
  std::optional<std::size_t> cl_bound;  // upper bound on CL(code); computed when absent
  CopySpan copies;
  std::uint64_t budget = kDefaultNodeBudget;
};

/// Repeatedly peels the support of a subcode of density <= d until none is
/// found. Exact mode is used while the remaining code has at most
/// kExactSubcodeLimit nonzero words; otherwise the heuristic search runs.
/// Both certificates (|T| <= CL d and the counting bound on the remainder
/// for every alpha in [1, CL]) are checked before returning; a failure
/// throws CertificateViolation.
DecompositionResult decompose(const Code& code, double d, DensityMode mode,
                              const DecomposeOptions& options = {});

/// CL(code restricted off Supp(subcode)) <= CL(code) - CL(subcode).
/// Throws InputError if `subcode` is not a subset of `code`.
bool chain_additivity_check(const Code& code, const Code& subcode,
                            std::uint64_t budget = kDefaultNodeBudget);

}  // namespace chainsparse
