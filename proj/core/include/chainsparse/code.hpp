#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chainsparse/bitvector.hpp"

namespace chainsparse {

/// Per-coordinate copy counts. Coordinate `i` stands for `copies[i]`
/// indistinguishable unit coordinates; an empty span means one copy each.
using CopySpan = std::span<const std::uint64_t>;

/// A set of distinct binary words over `m` coordinates.
///
/// Words are kept sorted and deduplicated. Each local coordinate remembers
/// the coordinate it came from (`origin()`), so codes produced by restriction
/// can be mapped back to the code they were cut from.
class Code {
 public:
  Code() = default;
  Code(std::size_t m, std::vector<BitVector> words);
  Code(std::size_t m, std::vector<BitVector> words, std::vector<std::size_t> origin);

  /// Builds a code from '0'/'1' strings. All strings must have the same length.
  static Code from_strings(std::span<const std::string> words);
  static Code from_strings(std::initializer_list<std::string> words);

  [[nodiscard]] std::size_t m() const noexcept { return m_; }
  [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }
  [[nodiscard]] bool empty() const noexcept { return words_.empty(); }
  [[nodiscard]] const std::vector<BitVector>& words() const noexcept { return words_; }
  [[nodiscard]] const BitVector& operator[](std::size_t i) const { return words_[i]; }
  [[nodiscard]] const std::vector<std::size_t>& origin() const noexcept { return origin_; }

  [[nodiscard]] std::optional<std::size_t> index_of(const BitVector& word) const;
  [[nodiscard]] bool contains(const BitVector& word) const { return index_of(word).has_value(); }
  [[nodiscard]] std::size_t nonzero_count() const;

  /// Same words with the identity origin map.
  [[nodiscard]] Code rebased() const;

  /// Subcode made of the words at `indices` (same coordinates and origin).
  [[nodiscard]] Code subcode(std::span<const std::size_t> indices) const;

  [[nodiscard]] std::vector<std::string> to_strings() const;

  friend bool operator==(const Code& a, const Code& b) noexcept {
    return a.m_ == b.m_ && a.words_ == b.words_;
  }

 private:
  std::size_t m_ = 0;
  std::vector<BitVector> words_;
  std::vector<std::size_t> origin_;
};

/// Coordinate restriction C|_keep. `keep` may be unsorted; it is normalized
/// to ascending order and duplicates are ignored. Words that coincide after
/// projection are merged. Throws InputError for out-of-range coordinates.
Code restrict(const Code& code, std::span<const std::size_t> keep);

/// Ascending list of the coordinates not in `drop`.
std::vector<std::size_t> complement(std::size_t m, std::span<const std::size_t> drop);

/// Coordinates hit by at least one word.
BitVector support(const Code& code);
std::vector<std::size_t> support_indices(const Code& code);

/// Number of unit coordinates in the support, counting copies.
std::uint64_t support_size(const Code& code, CopySpan copies = {});

/// Hamming weight of a word counting copies.
std::uint64_t word_weight(const BitVector& word, CopySpan copies = {});

/// Nonnegative weights over m coordinates.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> values);
  static WeightVector uniform(std::size_t m, double value = 1.0);
  static WeightVector from_copies(CopySpan copies);

  [[nodiscard]] std::size_t m() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  /// Throws InputError for negative or non-finite values.
  void set(std::size_t i, double value);
  void add(std::size_t i, double value) { set(i, values_[i] + value); }

  [[nodiscard]] std::vector<std::size_t> support() const;
  [[nodiscard]] std::size_t support_size() const;
  [[nodiscard]] double min_positive() const;
  [[nodiscard]] double max() const;

 private:
  std::vector<double> values_;
};

/// <w, c>. Throws InputError on length mismatch.
double weighted_value(const BitVector& word, const WeightVector& w);

/// Relative-error slack used by every (1 +- eps) comparison.
inline constexpr double kRelativeSlack = 1e-12;
inline constexpr double kAbsoluteFloor = 1e-12;

/// True iff `approx` lies in (1 +- eps) * exact, with rounding slack.
bool within_relative(double approx, double exact, double eps);

/// Summary of how well `tilde` approximates `w` on every word of `code`.
struct SparsifierCertificate {
  double epsilon = 0.0;
  double max_relative_error = 0.0;
  std::size_t support_size = 0;
  bool valid = false;
};

SparsifierCertificate certify(const Code& code, const WeightVector& w, const WeightVector& tilde,
                              double epsilon);

}  // namespace chainsparse
