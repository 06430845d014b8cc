#pragma once

// Column-class view of a code, used by the exact searches.
//
// Chain length, non-redundancy and the subcode DP only look at which words
// contain which coordinate, so identical columns collapse into one class and
// all-zero columns and zero words drop out.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "chainsparse/bitvector.hpp"
#include "chainsparse/code.hpp"

namespace chainsparse::detail {

struct ColumnClasses {
  std::vector<std::size_t> word_index;      // column-space word -> index in the code
  std::vector<BitVector> patterns;          // class -> words (column space) containing it
  std::vector<std::size_t> representative;  // class -> smallest coordinate in the class
  std::vector<std::uint64_t> weight;        // class -> copies summed over members
  std::vector<std::vector<std::size_t>> members;

  [[nodiscard]] std::size_t word_count() const noexcept { return word_index.size(); }
  [[nodiscard]] std::size_t class_count() const noexcept { return patterns.size(); }
};

inline ColumnClasses build_column_classes(const Code& code, CopySpan copies = {}) {
  ColumnClasses cc;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i].any()) cc.word_index.push_back(i);
  }
  const std::size_t n = cc.word_index.size();
  std::vector<BitVector> columns(code.m(), BitVector(n));
  for (std::size_t w = 0; w < n; ++w) {
    code[cc.word_index[w]].for_each_set_bit([&](std::size_t j) { columns[j].set(w); });
  }
  std::unordered_map<BitVector, std::size_t, BitVectorHash> seen;
  for (std::size_t j = 0; j < code.m(); ++j) {
    if (columns[j].none()) continue;
    const std::uint64_t c = copies.empty() ? 1 : copies[j];
    auto [it, inserted] = seen.try_emplace(columns[j], cc.patterns.size());
    if (inserted) {
      cc.patterns.push_back(columns[j]);
      cc.representative.push_back(j);
      cc.weight.push_back(c);
      cc.members.push_back({j});
    } else {
      cc.weight[it->second] += c;
      cc.members[it->second].push_back(j);
    }
  }
  return cc;
}

// Word-subset masks: a plain uint64_t when the code has at most 64 nonzero
// words, a BitVector otherwise. The searches are templated on the mask type.

inline bool mask_any(std::uint64_t a) { return a != 0; }
inline bool mask_any(const BitVector& a) { return a.any(); }
inline std::size_t mask_count(std::uint64_t a) { return static_cast<std::size_t>(std::popcount(a)); }
inline std::size_t mask_count(const BitVector& a) { return a.count(); }
inline std::uint64_t mask_and(std::uint64_t a, std::uint64_t b) { return a & b; }
inline BitVector mask_and(const BitVector& a, const BitVector& b) { return a & b; }
inline std::uint64_t mask_andnot(std::uint64_t a, std::uint64_t b) { return a & ~b; }
inline BitVector mask_andnot(BitVector a, const BitVector& b) { return a.subtract(b); }
inline bool mask_subset(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }
inline bool mask_subset(const BitVector& a, const BitVector& b) { return a.is_subset_of(b); }
inline std::size_t mask_first(std::uint64_t a) { return static_cast<std::size_t>(std::countr_zero(a)); }
inline std::size_t mask_first(const BitVector& a) { return a.find_first(); }

struct MaskHash {
  std::size_t operator()(std::uint64_t a) const noexcept { return static_cast<std::size_t>(mix(a)); }
  std::size_t operator()(const BitVector& a) const noexcept { return a.hash(); }
  static std::uint64_t mix(std::uint64_t x) noexcept {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
  }
};

inline std::uint64_t to_word_mask(const BitVector& v) { return v.blocks().empty() ? 0 : v.blocks()[0]; }

template <typename Mask>
Mask full_mask(std::size_t n);

template <>
inline std::uint64_t full_mask<std::uint64_t>(std::size_t n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

template <>
inline BitVector full_mask<BitVector>(std::size_t n) {
  return BitVector::ones(n);
}

template <typename Mask>
std::vector<Mask> class_masks(const ColumnClasses& cc) {
  std::vector<Mask> out;
  out.reserve(cc.class_count());
  for (const auto& p : cc.patterns) {
    if constexpr (std::is_same_v<Mask, std::uint64_t>) {
      out.push_back(to_word_mask(p));
    } else {
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace chainsparse::detail
