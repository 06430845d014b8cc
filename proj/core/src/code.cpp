#include "chainsparse/code.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chainsparse/errors.hpp"

namespace chainsparse {

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw InputError("bit string contains '" + std::string(1, bits[i]) + "'");
    }
  }
  return v;
}

namespace {

void normalize_words(std::vector<BitVector>& words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

std::vector<std::size_t> identity(std::size_t m) {
  std::vector<std::size_t> v(m);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

Code::Code(std::size_t m, std::vector<BitVector> words) : Code(m, std::move(words), identity(m)) {}

Code::Code(std::size_t m, std::vector<BitVector> words, std::vector<std::size_t> origin)
    : m_(m), words_(std::move(words)), origin_(std::move(origin)) {
  for (const auto& w : words_) {
    if (w.size() != m_) {
      throw InputError("word of length " + std::to_string(w.size()) + " in a code over " +
                       std::to_string(m_) + " coordinates");
    }
  }
  if (origin_.size() != m_) throw InputError("origin map length does not match m");
  normalize_words(words_);
}

Code Code::from_strings(std::span<const std::string> words) {
  if (words.empty()) return Code(0, {});
  const std::size_t m = words.front().size();
  std::vector<BitVector> parsed;
  parsed.reserve(words.size());
  for (const auto& s : words) parsed.push_back(BitVector::from_string(s));
  return Code(m, std::move(parsed));
}

Code Code::from_strings(std::initializer_list<std::string> words) {
  return from_strings(std::span<const std::string>(words.begin(), words.size()));
}

std::optional<std::size_t> Code::index_of(const BitVector& word) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), word);
  if (it == words_.end() || !(*it == word)) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

std::size_t Code::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(words_.begin(), words_.end(), [](const BitVector& w) { return w.any(); }));
}

Code Code::rebased() const { return Code(m_, words_, identity(m_)); }

Code Code::subcode(std::span<const std::size_t> indices) const {
  std::vector<BitVector> picked;
  picked.reserve(indices.size());
  for (auto i : indices) {
    if (i >= words_.size()) throw InputError("word index out of range");
    picked.push_back(words_[i]);
  }
  return Code(m_, std::move(picked), origin_);
}

std::vector<std::string> Code::to_strings() const {
  std::vector<std::string> out;
  out.reserve(words_.size());
  for (const auto& w : words_) out.push_back(w.to_string());
  return out;
}

std::vector<std::size_t> complement(std::size_t m, std::span<const std::size_t> drop) {
  std::vector<bool> dropped(m, false);
  for (auto i : drop) {
    if (i >= m) throw InputError("coordinate " + std::to_string(i) + " out of range");
    dropped[i] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i) {
    if (!dropped[i]) out.push_back(i);
  }
  return out;
}

Code restrict(const Code& code, std::span<const std::size_t> keep) {
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!sorted.empty() && sorted.back() >= code.m()) {
    throw InputError("coordinate " + std::to_string(sorted.back()) + " out of range for m = " +
                     std::to_string(code.m()));
  }
  std::vector<std::size_t> origin;
  origin.reserve(sorted.size());
  for (auto i : sorted) origin.push_back(code.origin()[i]);

  std::vector<BitVector> words;
  words.reserve(code.size());
  for (const auto& w : code.words()) {
    BitVector r(sorted.size());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      if (w.test(sorted[j])) r.set(j);
    }
    words.push_back(std::move(r));
  }
  return Code(sorted.size(), std::move(words), std::move(origin));
}

BitVector support(const Code& code) {
  BitVector s(code.m());
  for (const auto& w : code.words()) s |= w;
  return s;
}

std::vector<std::size_t> support_indices(const Code& code) { return support(code).indices(); }

std::uint64_t word_weight(const BitVector& word, CopySpan copies) {
  if (copies.empty()) return word.count();
  std::uint64_t total = 0;
  word.for_each_set_bit([&](std::size_t i) { total += copies[i]; });
  return total;
}

std::uint64_t support_size(const Code& code, CopySpan copies) {
  return word_weight(support(code), copies);
}

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw InputError("weight " + std::to_string(i) + " is negative or not finite");
    }
  }
}

WeightVector WeightVector::uniform(std::size_t m, double value) {
  return WeightVector(std::vector<double>(m, value));
}

WeightVector WeightVector::from_copies(CopySpan copies) {
  std::vector<double> v(copies.begin(), copies.end());
  return WeightVector(std::move(v));
}

void WeightVector::set(std::size_t i, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InputError("weight " + std::to_string(i) + " is negative or not finite");
  }
  values_.at(i) = value;
}

std::vector<std::size_t> WeightVector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0) out.push_back(i);
  }
  return out;
}

std::size_t WeightVector::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

double WeightVector::min_positive() const {
  double best = 0.0;
  for (double v : values_) {
    if (v > 0.0 && (best == 0.0 || v < best)) best = v;
  }
  return best;
}

double WeightVector::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double weighted_value(const BitVector& word, const WeightVector& w) {
  if (word.size() != w.m()) {
    throw InputError("word length " + std::to_string(word.size()) + " != weight length " +
                     std::to_string(w.m()));
  }
  double total = 0.0;
  word.for_each_set_bit([&](std::size_t i) { total += w[i]; });
  return total;
}

bool within_relative(double approx, double exact, double eps) {
  const double slack = std::max(kAbsoluteFloor, kRelativeSlack * std::abs(exact));
  return std::abs(approx - exact) <= eps * std::abs(exact) + slack;
}

SparsifierCertificate certify(const Code& code, const WeightVector& w, const WeightVector& tilde,
                              double epsilon) {
  if (w.m() != code.m() || tilde.m() != code.m()) {
    throw InputError("weight vectors do not match the code length");
  }
  SparsifierCertificate cert;
  cert.epsilon = epsilon;
  cert.support_size = tilde.support_size();
  cert.valid = true;
  for (const auto& word : code.words()) {
    const double exact = weighted_value(word, w);
    const double approx = weighted_value(word, tilde);
    if (exact == 0.0) {
      if (approx > kAbsoluteFloor) {
        cert.max_relative_error = INFINITY;
        cert.valid = false;
      }
      continue;
    }
    cert.max_relative_error = std::max(cert.max_relative_error, std::abs(approx - exact) / exact);
    if (!within_relative(approx, exact, epsilon)) cert.valid = false;
  }
  return cert;
}

}  // namespace chainsparse
