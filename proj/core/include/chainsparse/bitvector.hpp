#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace chainsparse {

/// Fixed-length bit vector packed into 64-bit blocks.
///
/// Bit `i` lives in block `i / 64` at position `i % 64`. Bits past `size()`
/// in the last block are always zero, so block-wise comparison and hashing
/// are well defined.
class BitVector {
 public:
  using block_type = std::uint64_t;
  static constexpr std::size_t kBlockBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), blocks_(block_count(size), 0) {}

  /// Parses a '0'/'1' string; character 0 is bit 0. Throws InputError on
  /// any other character.
  static BitVector from_string(std::string_view bits);

  static BitVector ones(std::size_t size) {
    BitVector v(size);
    v.fill();
    return v;
  }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] const std::vector<block_type>& blocks() const noexcept { return blocks_; }

  [[nodiscard]] bool test(std::size_t i) const noexcept {
    return (blocks_[i / kBlockBits] >> (i % kBlockBits)) & 1U;
  }
  void set(std::size_t i) noexcept { blocks_[i / kBlockBits] |= block_type{1} << (i % kBlockBits); }
  void reset(std::size_t i) noexcept {
    blocks_[i / kBlockBits] &= ~(block_type{1} << (i % kBlockBits));
  }
  void assign(std::size_t i, bool value) noexcept { value ? set(i) : reset(i); }

  void fill() noexcept {
    std::fill(blocks_.begin(), blocks_.end(), ~block_type{0});
    trim();
  }
  void clear() noexcept { std::fill(blocks_.begin(), blocks_.end(), 0); }

  [[nodiscard]] std::size_t count() const noexcept {
    std::size_t total = 0;
    for (auto b : blocks_) total += static_cast<std::size_t>(std::popcount(b));
    return total;
  }
  [[nodiscard]] bool any() const noexcept {
    return std::any_of(blocks_.begin(), blocks_.end(), [](block_type b) { return b != 0; });
  }
  [[nodiscard]] bool none() const noexcept { return !any(); }

  [[nodiscard]] bool intersects(const BitVector& other) const noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k] & other.blocks_[k]) return true;
    }
    return false;
  }
  [[nodiscard]] bool is_subset_of(const BitVector& other) const noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k] & ~other.blocks_[k]) return false;
    }
    return true;
  }

  BitVector& operator&=(const BitVector& other) noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] &= other.blocks_[k];
    return *this;
  }
  BitVector& operator|=(const BitVector& other) noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] |= other.blocks_[k];
    return *this;
  }
  BitVector& operator^=(const BitVector& other) noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] ^= other.blocks_[k];
    return *this;
  }
  /// this &= ~other
  BitVector& subtract(const BitVector& other) noexcept {
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] &= ~other.blocks_[k];
    return *this;
  }

  friend BitVector operator&(BitVector a, const BitVector& b) noexcept { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) noexcept { return a |= b; }
  friend BitVector operator^(BitVector a, const BitVector& b) noexcept { return a ^= b; }

  /// Index of the first set bit at or after `from`, or size() if none.
  [[nodiscard]] std::size_t find_next(std::size_t from) const noexcept {
    if (from >= size_) return size_;
    std::size_t k = from / kBlockBits;
    block_type b = blocks_[k] & (~block_type{0} << (from % kBlockBits));
    while (true) {
      if (b != 0) return k * kBlockBits + static_cast<std::size_t>(std::countr_zero(b));
      if (++k == blocks_.size()) return size_;
      b = blocks_[k];
    }
  }
  [[nodiscard]] std::size_t find_first() const noexcept { return find_next(0); }

  template <typename F>
  void for_each_set_bit(F&& f) const {
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      block_type b = blocks_[k];
      while (b != 0) {
        f(k * kBlockBits + static_cast<std::size_t>(std::countr_zero(b)));
        b &= b - 1;
      }
    }
  }

  [[nodiscard]] std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each_set_bit([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  [[nodiscard]] std::string to_string() const {
    std::string s(size_, '0');
    for_each_set_bit([&](std::size_t i) { s[i] = '1'; });
    return s;
  }

  friend bool operator==(const BitVector& a, const BitVector& b) noexcept {
    return a.size_ == b.size_ && a.blocks_ == b.blocks_;
  }

  /// Lexicographic order of to_string(): the vector with a 0 at the first
  /// differing position sorts first. Shorter vectors sort before longer ones.
  friend bool operator<(const BitVector& a, const BitVector& b) noexcept {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    for (std::size_t k = 0; k < a.blocks_.size(); ++k) {
      const block_type diff = a.blocks_[k] ^ b.blocks_[k];
      if (diff != 0) {
        const block_type lowest = diff & (~diff + 1);
        return (a.blocks_[k] & lowest) == 0;
      }
    }
    return false;
  }

  [[nodiscard]] std::size_t hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ size_;
    for (auto b : blocks_) {
      h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

 private:
  static std::size_t block_count(std::size_t bits) { return (bits + kBlockBits - 1) / kBlockBits; }
  void trim() noexcept {
    if (size_ % kBlockBits != 0 && !blocks_.empty()) {
      blocks_.back() &= (block_type{1} << (size_ % kBlockBits)) - 1;
    }
  }

  std::size_t size_ = 0;
  std::vector<block_type> blocks_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const noexcept { return v.hash(); }
};

}  // namespace chainsparse
