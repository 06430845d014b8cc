#include "chainsparse/chain_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "chainsparse/errors.hpp"
#include "columns.hpp"

namespace chainsparse {

using detail::ColumnClasses;

bool is_valid_chain(const Code& code, const ChainWitness& witness) {
  const std::size_t len = witness.coordinates.size();
  if (witness.words.size() != len) return false;
  std::unordered_set<std::size_t> coords;
  std::unordered_set<std::size_t> words;
  for (std::size_t i = 0; i < len; ++i) {
    if (witness.coordinates[i] >= code.m() || witness.words[i] >= code.size()) return false;
    if (!coords.insert(witness.coordinates[i]).second) return false;
    if (!words.insert(witness.words[i]).second) return false;
  }
  for (std::size_t i = 0; i < len; ++i) {
    const auto& word = code[witness.words[i]];
    if (!word.test(witness.coordinates[i])) return false;
    for (std::size_t j = i + 1; j < len; ++j) {
      if (word.test(witness.coordinates[j])) return false;
    }
  }
  return true;
}

namespace {

struct BudgetExhausted {};

template <typename Mask>
class ChainSearch {
 public:
  ChainSearch(const ColumnClasses& cc, std::uint64_t budget)
      : classes_(cc), masks_(detail::class_masks<Mask>(cc)), budget_(budget) {}

  std::size_t solve(const Mask& state, std::size_t depth) {
    deepest_ = std::max(deepest_, depth);
    if (!detail::mask_any(state)) return 0;
    if (auto it = memo_.find(state); it != memo_.end()) return it->second.value;
    if (++nodes_ > budget_) throw BudgetExhausted{};

    // Restricted column patterns, deduplicated (first class wins) and pruned
    // to the inclusion-minimal ones.
    std::vector<std::pair<Mask, std::size_t>> restricted;
    for (std::size_t k = 0; k < masks_.size(); ++k) {
      Mask r = detail::mask_and(state, masks_[k]);
      if (detail::mask_any(r)) restricted.emplace_back(std::move(r), k);
    }
    std::stable_sort(restricted.begin(), restricted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    restricted.erase(std::unique(restricted.begin(), restricted.end(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; }),
                     restricted.end());
    const std::size_t upper = std::min(detail::mask_count(state), restricted.size());

    std::vector<std::size_t> counts(restricted.size());
    for (std::size_t i = 0; i < restricted.size(); ++i) counts[i] = detail::mask_count(restricted[i].first);
    std::vector<std::pair<std::size_t, std::size_t>> minimal;  // (class, restricted index)
    for (std::size_t i = 0; i < restricted.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < restricted.size() && !dominated; ++j) {
        dominated = j != i && counts[j] < counts[i] &&
                    detail::mask_subset(restricted[j].first, restricted[i].first);
      }
      if (!dominated) minimal.emplace_back(restricted[i].second, i);
    }
    std::sort(minimal.begin(), minimal.end());

    std::size_t best = 0;
    std::size_t best_class = 0;
    for (const auto& [k, idx] : minimal) {
      const std::size_t v = 1 + solve(detail::mask_andnot(state, restricted[idx].first), depth + 1);
      if (v > best) {
        best = v;
        best_class = k;
      }
      if (best == upper) break;
    }
    memo_.emplace(state, Entry{best, best_class});
    return best;
  }

  ChainWitness witness(Mask state) const {
    ChainWitness w;
    while (detail::mask_any(state)) {
      const Entry& e = memo_.at(state);
      if (e.value == 0) break;
      const Mask hit = detail::mask_and(state, masks_[e.best_class]);
      w.coordinates.push_back(classes_.representative[e.best_class]);
      w.words.push_back(classes_.word_index[detail::mask_first(hit)]);
      state = detail::mask_andnot(state, masks_[e.best_class]);
    }
    std::reverse(w.coordinates.begin(), w.coordinates.end());
    std::reverse(w.words.begin(), w.words.end());
    return w;
  }

  [[nodiscard]] std::uint64_t nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::size_t deepest() const noexcept { return deepest_; }

 private:
  struct Entry {
    std::size_t value;
    std::size_t best_class;
  };

  const ColumnClasses& classes_;
  std::vector<Mask> masks_;
  std::unordered_map<Mask, Entry, detail::MaskHash> memo_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::size_t deepest_ = 0;
};

template <typename Mask>
ChainLengthResult run_chain_search(const Code& code, const ColumnClasses& cc, std::uint64_t budget) {
  ChainSearch<Mask> search(cc, budget);
  const Mask root = detail::full_mask<Mask>(cc.word_count());
  ChainLengthResult result;
  try {
    result.value = search.solve(root, 0);
  } catch (const BudgetExhausted&) {
    const std::size_t lower = std::max(search.deepest(), greedy_chain(code).length());
    throw InexactError("chain length search exceeded its node budget of " + std::to_string(budget),
                       lower);
  }
  result.witness = search.witness(root);
  result.nodes = search.nodes();
  return result;
}

}  // namespace

ChainLengthResult chain_length_exact(const Code& code, std::uint64_t budget) {
  const ColumnClasses cc = detail::build_column_classes(code);
  if (cc.word_count() == 0) return {};
  if (cc.word_count() <= 64) return run_chain_search<std::uint64_t>(code, cc, budget);
  return run_chain_search<BitVector>(code, cc, budget);
}

ChainWitness greedy_chain(const Code& code) {
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i].any()) alive.push_back(i);
  }
  ChainWitness picks;
  std::vector<std::size_t> hits(code.m());
  while (!alive.empty()) {
    std::size_t lightest = alive.front();
    std::size_t lightest_weight = code[lightest].count();
    for (auto i : alive) {
      const std::size_t wt = code[i].count();
      if (wt < lightest_weight) {
        lightest = i;
        lightest_weight = wt;
      }
    }
    std::size_t coord = code.m();
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    code[lightest].for_each_set_bit([&](std::size_t j) {
      std::size_t h = 0;
      for (auto i : alive) h += code[i].test(j) ? 1 : 0;
      if (h < fewest) {
        fewest = h;
        coord = j;
      }
    });
    picks.coordinates.push_back(coord);
    picks.words.push_back(lightest);
    std::erase_if(alive, [&](std::size_t i) { return code[i].test(coord); });
  }
  std::reverse(picks.coordinates.begin(), picks.coordinates.end());
  std::reverse(picks.words.begin(), picks.words.end());
  return picks;
}

std::size_t chain_length_upper(const Code& code) {
  return std::min(support(code).count(), code.nonzero_count());
}

ChainBounds chain_length_bounds(const Code& code) {
  ChainBounds b;
  b.witness = greedy_chain(code);
  b.lower = b.witness.length();
  b.upper = support(code).count();
  return b;
}

bool is_valid_nrd(const Code& code, const NrdWitness& witness) {
  if (witness.coordinates.size() != witness.words.size()) return false;
  std::unordered_set<std::size_t> coords(witness.coordinates.begin(), witness.coordinates.end());
  if (coords.size() != witness.coordinates.size()) return false;
  for (std::size_t k = 0; k < witness.coordinates.size(); ++k) {
    const std::size_t j = witness.coordinates[k];
    if (j >= code.m() || witness.words[k] >= code.size()) return false;
    const auto& word = code[witness.words[k]];
    if (!word.test(j)) return false;
    for (auto other : witness.coordinates) {
      if (other != j && word.test(other)) return false;
    }
  }
  return true;
}

namespace {

template <typename Mask>
class NrdSearch {
 public:
  NrdSearch(const ColumnClasses& cc, std::uint64_t budget)
      : masks_(detail::class_masks<Mask>(cc)), budget_(budget) {}

  void run() { dfs(0, zero_like()); }

  [[nodiscard]] const std::vector<std::size_t>& best_classes() const { return best_classes_; }
  [[nodiscard]] const std::vector<Mask>& best_private() const { return best_private_; }
  [[nodiscard]] std::uint64_t nodes() const { return nodes_; }

 private:
  Mask zero_like() const {
    if constexpr (std::is_same_v<Mask, std::uint64_t>) {
      return 0;
    } else {
      return masks_.empty() ? BitVector() : BitVector(masks_.front().size());
    }
  }

  void dfs(std::size_t next, const Mask& covered) {
    if (++nodes_ > budget_) throw BudgetExhausted{};
    if (chosen_.size() > best_classes_.size()) {
      best_classes_ = chosen_;
      best_private_ = private_;
    }
    if (chosen_.size() + (masks_.size() - next) <= best_classes_.size()) return;
    for (std::size_t k = next; k < masks_.size(); ++k) {
      if (chosen_.size() + (masks_.size() - k) <= best_classes_.size()) return;
      Mask fresh = detail::mask_andnot(masks_[k], covered);
      if (!detail::mask_any(fresh)) continue;
      bool ok = true;
      for (const auto& p : private_) {
        if (!detail::mask_any(detail::mask_andnot(p, masks_[k]))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::vector<Mask> saved = private_;
      for (auto& p : private_) p = detail::mask_andnot(p, masks_[k]);
      private_.push_back(fresh);
      chosen_.push_back(k);
      Mask next_covered = covered;
      next_covered |= masks_[k];
      dfs(k + 1, next_covered);
      chosen_.pop_back();
      private_ = std::move(saved);
    }
  }

  std::vector<Mask> masks_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::size_t> chosen_;
  std::vector<Mask> private_;
  std::vector<std::size_t> best_classes_;
  std::vector<Mask> best_private_;
};

template <typename Mask>
NrdResult run_nrd_search(const ColumnClasses& cc, std::uint64_t budget) {
  NrdSearch<Mask> search(cc, budget);
  try {
    search.run();
  } catch (const BudgetExhausted&) {
    throw InexactError("non-redundancy search exceeded its node budget of " + std::to_string(budget),
                       search.best_classes().size());
  }
  NrdResult result;
  result.value = search.best_classes().size();
  result.nodes = search.nodes();
  for (std::size_t i = 0; i < search.best_classes().size(); ++i) {
    result.witness.coordinates.push_back(cc.representative[search.best_classes()[i]]);
    result.witness.words.push_back(cc.word_index[detail::mask_first(search.best_private()[i])]);
  }
  return result;
}

}  // namespace

NrdResult nrd_exact(const Code& code, std::uint64_t budget) {
  const ColumnClasses cc = detail::build_column_classes(code);
  if (cc.word_count() == 0) return {};
  if (cc.word_count() <= 64) return run_nrd_search<std::uint64_t>(cc, budget);
  return run_nrd_search<BitVector>(cc, budget);
}

std::size_t union_closure_chain_length(const Code& code) {
  std::vector<BitVector> words;
  for (const auto& w : code.words()) {
    if (w.any()) words.push_back(w);
  }
  if (words.size() > kUnionClosureWordLimit) {
    throw InputError("union closure oracle limited to " + std::to_string(kUnionClosureWordLimit) +
                     " nonzero words, got " + std::to_string(words.size()));
  }
  std::unordered_set<BitVector, BitVectorHash> closure;
  for (const auto& w : words) {
    std::vector<BitVector> fresh{w};
    for (const auto& x : closure) fresh.push_back(x | w);
    for (auto& f : fresh) closure.insert(std::move(f));
    if (closure.size() > kUnionClosureSizeLimit) {
      throw InputError("union closure exceeds " + std::to_string(kUnionClosureSizeLimit) + " sets");
    }
  }
  std::vector<BitVector> sets(closure.begin(), closure.end());
  std::vector<std::size_t> sizes(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) sizes[i] = sets[i].count();
  std::vector<std::size_t> order(sets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });

  std::vector<std::size_t> longest(sets.size(), 1);
  std::size_t best = 0;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    for (std::size_t oj = 0; oj < oi; ++oj) {
      const std::size_t j = order[oj];
      if (sizes[j] < sizes[i] && sets[j].is_subset_of(sets[i])) {
        longest[i] = std::max(longest[i], longest[j] + 1);
      }
    }
    best = std::max(best, longest[i]);
  }
  return best;
}

bool cardinality_bound_check(const Code& code, std::uint64_t budget) {
  const std::size_t nrd = nrd_exact(code, budget).value;
  const long double bound = std::pow(static_cast<long double>(code.m()) + 1.0L, static_cast<long double>(nrd));
  return static_cast<long double>(code.size()) <= bound;
}

}  // namespace chainsparse
