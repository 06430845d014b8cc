#include "chainsparse/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "chainsparse/errors.hpp"

namespace chainsparse {

void Graph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u >= n_ || v >= n_) throw InputError("edge endpoint out of range");
  if (u == v) throw InputError("self-loop at vertex " + std::to_string(u + 1));
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw InputError("edge weight must be nonnegative");
  const std::pair<std::size_t, std::size_t> key{std::min(u, v), std::max(u, v)};
  for (const auto& e : edges_) {
    if (e == key) {
      throw InputError("repeated edge " + std::to_string(u + 1) + " " + std::to_string(v + 1));
    }
  }
  edges_.push_back(key);
  weights_.push_back(weight);
}

bool Graph::connected() const {
  if (n_ <= 1) return true;
  std::vector<std::size_t> parent(n_);
  for (std::size_t i = 0; i < n_; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n_;
  for (const auto& [u, v] : edges_) {
    const auto a = find(u);
    const auto b = find(v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

Graph Graph::parse_edge_list(std::istream& in) {
  long long n = 0;
  long long m = 0;
  if (!(in >> n >> m) || n < 0 || m < 0) throw InputError("edge list must start with \"n m\"");
  Graph g(static_cast<std::size_t>(n));
  std::string line;
  std::getline(in, line);
  for (long long e = 0; e < m; ++e) {
    if (!std::getline(in, line)) throw InputError("edge list ended after " + std::to_string(e) + " edges");
    std::istringstream row(line);
    long long u = 0;
    long long v = 0;
    double w = 1.0;
    if (!(row >> u >> v)) throw InputError("malformed edge line: " + line);
    if (!(row >> w)) w = 1.0;
    if (u < 1 || v < 1 || u > n || v > n) throw InputError("vertex out of range in line: " + line);
    g.add_edge(static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1), w);
  }
  return g;
}

Code cut_code(const Graph& graph) {
  const std::size_t n = graph.vertex_count();
  if (n > kMaxCutVertices) {
    throw InputError("cut enumeration limited to " + std::to_string(kMaxCutVertices) + " vertices");
  }
  const std::size_t m = graph.edge_count();
  std::vector<BitVector> words;
  if (n == 0) return Code(m, {BitVector(m)});
  // Subsets containing vertex 0 only: cut(T) = cut(V \ T).
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  words.reserve(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    const std::uint64_t side = (s << 1) | 1U;
    BitVector word(m);
    for (std::size_t e = 0; e < m; ++e) {
      const auto [u, v] = graph.edges()[e];
      if (((side >> u) & 1U) != ((side >> v) & 1U)) word.set(e);
    }
    words.push_back(std::move(word));
  }
  return Code(m, std::move(words));
}

namespace {

bool is_small_prime(unsigned q) { return q == 2 || q == 3 || q == 5 || q == 7; }

unsigned inverse_mod(unsigned a, unsigned q) {
  for (unsigned x = 1; x < q; ++x) {
    if ((a * x) % q == 1) return x;
  }
  throw InputError("no inverse");
}

void check_spec(const LinearCodeSpec& spec) {
  if (!is_small_prime(spec.q)) throw InputError("field order must be a prime <= 7, got " + std::to_string(spec.q));
  const std::size_t m = spec.rows.empty() ? 0 : spec.rows.front().size();
  for (const auto& row : spec.rows) {
    if (row.size() != m) throw InputError("generator rows differ in length");
    for (auto x : row) {
      if (x >= spec.q) throw InputError("generator entry " + std::to_string(x) + " not in [0, q)");
    }
  }
}

}  // namespace

std::size_t generator_rank(const LinearCodeSpec& spec) {
  check_spec(spec);
  auto a = spec.rows;
  const unsigned q = spec.q;
  const std::size_t cols = a.empty() ? 0 : a.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < a.size() && a[pivot][c] == 0) ++pivot;
    if (pivot == a.size()) continue;
    std::swap(a[pivot], a[rank]);
    const unsigned inv = inverse_mod(a[rank][c], q);
    for (auto& x : a[rank]) x = (x * inv) % q;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const unsigned f = a[r][c];
      for (std::size_t j = 0; j < cols; ++j) a[r][j] = (a[r][j] + q * q - f * a[rank][j]) % q;
    }
    ++rank;
  }
  return rank;
}

Code linear_support_code(const LinearCodeSpec& spec) {
  check_spec(spec);
  const std::size_t k = spec.rows.size();
  const std::size_t m = k == 0 ? 0 : spec.rows.front().size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    total *= spec.q;
    if (total > kMaxLinearCodewords) {
      throw InputError("q^k exceeds the enumeration limit of " + std::to_string(kMaxLinearCodewords));
    }
  }
  std::vector<BitVector> words;
  words.reserve(total);
  std::vector<unsigned> coeff(k, 0);
  std::vector<unsigned> value(m);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < k; ++i) {
      coeff[i] = static_cast<unsigned>(rest % spec.q);
      rest /= spec.q;
    }
    std::fill(value.begin(), value.end(), 0U);
    for (std::size_t i = 0; i < k; ++i) {
      if (coeff[i] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) value[j] = (value[j] + coeff[i] * spec.rows[i][j]) % spec.q;
    }
    BitVector word(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (value[j] != 0) word.set(j);
    }
    words.push_back(std::move(word));
  }
  return Code(m, std::move(words));
}

Code parallel_block_code(const std::vector<std::size_t>& block_sizes) {
  if (block_sizes.empty()) throw InputError("at least one block is required");
  std::size_t m = 0;
  for (auto b : block_sizes) {
    if (b == 0) throw InputError("block sizes must be positive");
    m += b;
  }
  std::vector<BitVector> words;
  std::size_t start = 0;
  for (auto b : block_sizes) {
    BitVector word(m);
    for (std::size_t j = start; j < start + b; ++j) word.set(j);
    words.push_back(std::move(word));
    start += b;
  }
  words.push_back(BitVector::ones(m));
  return Code(m, std::move(words));
}

Code random_code(std::size_t m, std::size_t count, double density, Rng& rng) {
  if (!(density >= 0.0 && density <= 1.0)) throw InputError("density must lie in [0, 1]");
  std::bernoulli_distribution bit(density);
  std::vector<BitVector> words;
  words.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    BitVector word(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (bit(rng)) word.set(j);
    }
    words.push_back(std::move(word));
  }
  return Code(m, std::move(words));
}

Graph random_graph(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("edge probability must lie in [0, 1]");
  std::bernoulli_distribution edge(p);
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (edge(rng)) g.add_edge(u, v);
    }
  }
  return g;
}

Graph random_connected_graph(std::size_t n, double p, Rng& rng, std::size_t max_tries) {
  for (std::size_t i = 0; i < max_tries; ++i) {
    Graph g = random_graph(n, p, rng);
    if (g.connected()) return g;
  }
  throw InputError("no connected graph in " + std::to_string(max_tries) + " draws");
}

LinearCodeSpec random_linear_spec(unsigned q, std::size_t k, std::size_t m, Rng& rng) {
  if (!is_small_prime(q)) throw InputError("field order must be a prime <= 7");
  std::uniform_int_distribution<unsigned> entry(0, q - 1);
  LinearCodeSpec spec;
  spec.q = q;
  spec.rows.assign(k, std::vector<unsigned>(m));
  for (auto& row : spec.rows) {
    for (auto& x : row) x = entry(rng);
  }
  return spec;
}

}  // namespace chainsparse
