#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <utility>
#include <vector>

#include "chainsparse/code.hpp"
#include "chainsparse/rng.hpp"

namespace chainsparse {

/// Undirected simple graph on vertices 0..n-1. Edge order is insertion order
/// and defines the coordinates of the cut code.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n) {}

  /// Throws InputError for self-loops, out-of-range endpoints or repeated edges.
  void add_edge(std::size_t u, std::size_t v, double weight = 1.0);

  [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept {
    return edges_;
  }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] bool connected() const;

  /// Reads "n m" followed by m lines "u v [w]" with 1-based vertices.
  static Graph parse_edge_list(std::istream& in);

 private:
  std::size_t n_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<double> weights_;
};

inline constexpr std::size_t kMaxCutVertices = 24;

/// Edge-indicator vectors of every cut (T, V \ T), the zero word included.
/// Throws InputError for more than kMaxCutVertices vertices.
Code cut_code(const Graph& graph);

/// Generator matrix over F_q, q prime.
struct LinearCodeSpec {
  unsigned q = 2;
  std::vector<std::vector<unsigned>> rows;  // k rows of length m
};

inline constexpr std::uint64_t kMaxLinearCodewords = std::uint64_t{1} << 20;

/// Rank over F_q by Gaussian elimination. Throws InputError for a bad spec.
std::size_t generator_rank(const LinearCodeSpec& spec);

/// Support patterns of all q^k codewords. Throws InputError unless q is a
/// prime <= 7, entries lie in [0, q) and q^k <= kMaxLinearCodewords.
Code linear_support_code(const LinearCodeSpec& spec);

/// Block indicators plus the all-ones word. Throws InputError for an empty
/// list or a zero block.
Code parallel_block_code(const std::vector<std::size_t>& block_sizes);

/// `count` words with i.i.d. Bernoulli(density) bits, deduplicated.
Code random_code(std::size_t m, std::size_t count, double density, Rng& rng);

/// G(n, p): each pair joined independently with probability p.
Graph random_graph(std::size_t n, double p, Rng& rng);

/// G(n, p) redrawn until connected, at most `max_tries` times.
Graph random_connected_graph(std::size_t n, double p, Rng& rng, std::size_t max_tries = 1000);

/// Random k x m generator matrix over F_q.
LinearCodeSpec random_linear_spec(unsigned q, std::size_t k, std::size_t m, Rng& rng);

}  // namespace chainsparse
