#include "chainsparse/density.hpp"

#include <algorithm>
#include <numeric>

#include "chainsparse/errors.hpp"
#include "columns.hpp"

namespace chainsparse {

namespace {

constexpr std::uint64_t kCandidateBudget = 10'000;
constexpr std::uint64_t kWholeCodeBudget = 100'000;
constexpr std::size_t kClusterLimit = 256;

// a beats b: lower density, then longer chain. Densities compare exactly by
// cross multiplication.
bool better(std::uint64_t supp_a, std::size_t cl_a, std::uint64_t supp_b, std::size_t cl_b) {
  const auto lhs = supp_a * cl_b;
  const auto rhs = supp_b * cl_a;
  if (lhs != rhs) return lhs < rhs;
  return cl_a > cl_b;
}

DensityResult make_result(std::vector<std::size_t> witness, std::uint64_t supp, std::size_t cl,
                          bool exact) {
  DensityResult r;
  r.witness = std::move(witness);
  r.support_size = supp;
  r.chain_length = cl;
  r.phi = static_cast<double>(supp) / static_cast<double>(cl);
  r.exact = exact;
  return r;
}

DensityResult exact_density(const Code& code, CopySpan copies) {
  const detail::ColumnClasses cc = detail::build_column_classes(code, copies);
  const std::size_t n = cc.word_count();
  if (n > kExactSubcodeLimit) {
    throw InputError("exact density is limited to " + std::to_string(kExactSubcodeLimit) +
                     " nonzero words, got " + std::to_string(n));
  }
  const auto masks = detail::class_masks<std::uint64_t>(cc);
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::uint8_t> cl(total, 0);
  std::uint64_t best_mask = 0;
  std::uint64_t best_supp = 0;
  std::size_t best_cl = 0;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    std::uint64_t supp = 0;
    std::uint8_t c = 0;
    for (std::size_t k = 0; k < masks.size(); ++k) {
      if ((mask & masks[k]) == 0) continue;
      supp += cc.weight[k];
      c = std::max<std::uint8_t>(c, static_cast<std::uint8_t>(1 + cl[mask & ~masks[k]]));
    }
    cl[mask] = c;
    if (best_mask == 0 || better(supp, c, best_supp, best_cl)) {
      best_mask = mask;
      best_supp = supp;
      best_cl = c;
    }
  }
  std::vector<std::size_t> witness;
  for (std::size_t b = 0; b < n; ++b) {
    if ((best_mask >> b) & 1U) witness.push_back(cc.word_index[b]);
  }
  return make_result(std::move(witness), best_supp, best_cl, true);
}

// Certified lower bound on CL of the words at `indices`.
std::size_t chain_lower_bound(const Code& code, const std::vector<std::size_t>& indices,
                              std::uint64_t budget) {
  const Code sub = code.subcode(indices);
  try {
    return chain_length_exact(sub, budget).value;
  } catch (const InexactError& e) {
    return e.lower_bound();
  }
}

std::uint64_t union_weight(const Code& code, const std::vector<std::size_t>& indices,
                           CopySpan copies) {
  BitVector u(code.m());
  for (auto i : indices) u |= code[i];
  return word_weight(u, copies);
}

DensityResult heuristic_density(const Code& code, CopySpan copies) {
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i].any()) nonzero.push_back(i);
  }
  std::vector<std::uint64_t> weight(code.size(), 0);
  for (auto i : nonzero) weight[i] = word_weight(code[i], copies);
  std::vector<std::size_t> by_weight = nonzero;
  std::stable_sort(by_weight.begin(), by_weight.end(),
                   [&](std::size_t a, std::size_t b) { return weight[a] < weight[b]; });

  std::optional<DensityResult> best;
  auto offer = [&](std::vector<std::size_t> words, std::uint64_t supp, std::size_t cl) {
    if (cl == 0) return;
    if (!best || better(supp, cl, best->support_size, best->chain_length)) {
      std::sort(words.begin(), words.end());
      best = make_result(std::move(words), supp, cl, false);
    }
  };

  // Singletons.
  for (auto i : by_weight) offer({i}, weight[i], 1);

  // Subsets of a greedy chain are chains, so j of its words have CL >= j.
  const ChainWitness chain = greedy_chain(code);
  std::vector<std::size_t> chain_words = chain.words;
  for (int pass = 0; pass < 2; ++pass) {
    if (pass == 1) {
      std::stable_sort(chain_words.begin(), chain_words.end(),
                       [&](std::size_t a, std::size_t b) { return weight[a] < weight[b]; });
    }
    BitVector u(code.m());
    std::vector<std::size_t> prefix;
    for (auto i : chain_words) {
      u |= code[i];
      prefix.push_back(i);
      offer(prefix, word_weight(u, copies), prefix.size());
    }
  }

  // Support clusters: all words inside the support of a light word.
  for (std::size_t k = 0; k < by_weight.size() && k < kClusterLimit; ++k) {
    const BitVector& hull = code[by_weight[k]];
    std::vector<std::size_t> cluster;
    for (auto i : nonzero) {
      if (code[i].is_subset_of(hull)) cluster.push_back(i);
    }
    if (cluster.size() < 2) continue;
    offer(cluster, weight[by_weight[k]], chain_lower_bound(code, cluster, kCandidateBudget));
  }

  // The whole code.
  offer(nonzero, union_weight(code, nonzero, copies),
        chain_lower_bound(code, nonzero, kWholeCodeBudget));
  return *best;
}

}  // namespace

DensityResult density(const Code& code, DensityMode mode, CopySpan copies) {
  if (!copies.empty() && copies.size() != code.m()) {
    throw InputError("copy counts do not match the code length");
  }
  if (code.nonzero_count() == 0) throw InputError("density is undefined for a code with empty support");
  return mode == DensityMode::kExact ? exact_density(code, copies) : heuristic_density(code, copies);
}

std::optional<DensityResult> find_sparse_subcode(const Code& code, double d, DensityMode mode,
                                                 CopySpan copies) {
  if (!(d > 0.0)) throw InputError("d must be positive");
  if (code.nonzero_count() == 0) return std::nullopt;
  DensityResult r = density(code, mode, copies);
  if (r.phi <= d * (1.0 + kDensitySlack)) return r;
  return std::nullopt;
}

DecompositionResult decompose(const Code& code, double d, DensityMode mode,
                              const DecomposeOptions& options) {
  if (!(d > 0.0)) throw InputError("d must be positive");
  const std::size_t m = code.m();
  if (!options.copies.empty() && options.copies.size() != m) {
    throw InputError("copy counts do not match the code length");
  }
  auto copies_of = [&](const std::vector<std::size_t>& coords) {
    std::vector<std::uint64_t> out;
    if (options.copies.empty()) return out;
    out.reserve(coords.size());
    for (auto j : coords) out.push_back(options.copies[j]);
    return out;
  };
  auto weight_of = [&](const std::vector<std::size_t>& coords) {
    std::uint64_t total = 0;
    for (auto j : coords) total += options.copies.empty() ? 1 : options.copies[j];
    return total;
  };

  DecompositionResult result;
  result.d = d;
  result.mode = mode;
  if (options.cl_bound) {
    result.chain_length = std::min(*options.cl_bound, chain_length_upper(code));
  } else {
    try {
      result.chain_length = chain_length_exact(code, options.budget).value;
    } catch (const InexactError&) {
      result.chain_length = chain_length_upper(code);
    }
  }

  const Code base = code.rebased();
  std::vector<bool> peeled(m, false);
  std::vector<std::size_t> alive(m);
  std::iota(alive.begin(), alive.end(), std::size_t{0});
  while (true) {
    const Code cur = restrict(base, alive);
    if (cur.nonzero_count() == 0) break;
    const auto cur_copies = copies_of(alive);
    const DensityMode use = mode == DensityMode::kExact && cur.nonzero_count() <= kExactSubcodeLimit
                                ? DensityMode::kExact
                                : DensityMode::kHeuristic;
    const auto found = find_sparse_subcode(cur, d, use, cur_copies);
    if (!found) break;

    PeelRound round;
    BitVector supp(cur.m());
    for (auto i : found->witness) {
      supp |= cur[i];
      BitVector lifted(m);
      cur[i].for_each_set_bit([&](std::size_t j) { lifted.set(cur.origin()[j]); });
      round.words.push_back(std::move(lifted));
    }
    supp.for_each_set_bit([&](std::size_t j) {
      round.coordinates.push_back(cur.origin()[j]);
      peeled[cur.origin()[j]] = true;
    });
    round.support_size = found->support_size;
    round.chain_length = found->chain_length;
    round.density = found->phi;
    result.rounds.push_back(std::move(round));
    std::erase_if(alive, [&](std::size_t j) { return peeled[j]; });
  }

  for (std::size_t j = 0; j < m; ++j) (peeled[j] ? result.peeled : result.kept).push_back(j);
  result.peeled_size = weight_of(result.peeled);
  result.peel_code = restrict(code, result.peeled);
  result.remaining_code = restrict(code, result.kept);

  const double cap = static_cast<double>(result.chain_length) * d * (1.0 + kDensitySlack);
  if (static_cast<double>(result.peeled_size) > cap) {
    throw CertificateViolation("peeled " + std::to_string(result.peeled_size) +
                               " coordinates, more than CL * d = " + std::to_string(cap));
  }
  const auto kept_copies = copies_of(result.kept);
  CountingOptions copts;
  copts.copies = kept_copies;
  copts.m = options.copies.empty()
                ? m
                : std::accumulate(options.copies.begin(), options.copies.end(), std::uint64_t{0});
  result.audit = counting_bound_audit(result.remaining_code, result.chain_length, d,
                                      result.chain_length, copts);
  if (!result.audit.pass) {
    throw CertificateViolation(
        "remaining code has too many light words; the sparse-subcode search missed a subcode, "
        "rerun in exact mode");
  }
  return result;
}

bool chain_additivity_check(const Code& code, const Code& subcode, std::uint64_t budget) {
  if (subcode.m() != code.m()) throw InputError("subcode length does not match the code");
  for (const auto& w : subcode.words()) {
    if (!code.contains(w)) throw InputError("subcode word " + w.to_string() + " is not in the code");
  }
  const auto keep = complement(code.m(), support_indices(subcode));
  const auto rest = chain_length_exact(restrict(code, keep), budget).value;
  const auto whole = chain_length_exact(code, budget).value;
  const auto sub = chain_length_exact(subcode, budget).value;
  return rest + sub <= whole;
}

}  // namespace chainsparse
