#include <doctest.h>

#include <cmath>
#include <numeric>

#include "chainsparse/errors.hpp"
#include "chainsparse/generators.hpp"
#include "chainsparse/sparsify.hpp"
#include "chainsparse/verify.hpp"
#include "oracles.hpp"
#include "random_codes.hpp"

using namespace chainsparse;

namespace {

const Code kK3 = Code::from_strings({"110", "101", "011", "000"});

// P(lo <= Bin(n, p) <= hi), summed term by term.
double binomial_window(std::size_t n, double p, std::size_t lo, std::size_t hi) {
  double total = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                      k * std::log(p) + (n - k) * std::log1p(-p));
  }
  return total;
}

}  // namespace

TEST_CASE("llog floors at one") {
  CHECK(llog(2) == 1.0);
  CHECK(llog(4) == 1.0);
  CHECK(llog(16) == 2.0);
  CHECK(llog(1024) == doctest::Approx(std::log2(10.0)));
}

TEST_CASE("eta formula") {
  auto theory = SparsifyParams::theory(0.5);
  CHECK(theory.eta_constant == 1000.0);
  CHECK(theory.denom_constant == 20.0);
  CHECK(compute_eta(4, 1.0, theory) == doctest::Approx(800000.0));
  auto practical = SparsifyParams::practical(0.5);
  CHECK(compute_eta(2, 0.5, practical) == doctest::Approx(1.0 * 4.0));
  const double expect = 10.0 * std::pow(std::log2(10.0) / 0.5, 2);
  CHECK(compute_eta(1024, 0.5, practical) == doctest::Approx(expect));
  CHECK(compute_eta(1024, 0.5, practical) == doctest::Approx(441.6).epsilon(1e-3));
  CHECK_THROWS_AS(compute_eta(1, 0.5, practical), InputError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SparsifyParams::practical(0.0).validate(), InputError);
  CHECK_THROWS_AS(SparsifyParams::practical(1.0).validate(), InputError);
  auto p = SparsifyParams::practical(0.5);
  p.eta_constant = -1;
  CHECK_THROWS_AS(p.validate(), InputError);
  CHECK_THROWS_AS(sparsify_unweighted(kK3, SparsifyParams::practical(1.5)), InputError);
}

TEST_CASE("compose_accuracy") {
  CHECK(compose_accuracy({0.0}) == 0.0);
  CHECK(compose_accuracy({0.1, 0.1}) == doctest::Approx(0.21));
  CHECK(compose_accuracy({}) == 0.0);
  const double eps = 0.5;
  for (int l = 1; l <= 6; ++l) {
    std::vector<double> levels(static_cast<std::size_t>(l), eps / (20.0 * l));
    CHECK(compose_accuracy(levels) <= 0.15 * eps);
  }
}

TEST_CASE("degenerate subsample keeps everything") {
  Rng rng = make_rng(0, "t");
  const auto r = subsample_remaining(kK3, {}, 2, 100.0, 0.1, 10, rng);
  CHECK(r.degenerate);
  CHECK(r.p == 1.0);
  CHECK(r.weight == 1.0);
  CHECK(r.sampled_size == 3);
  CHECK(r.sampled == std::vector<std::uint64_t>{1, 1, 1});
}

TEST_CASE("two-block subsample at p = 0.4") {
  const Code c = parallel_block_code({250, 250});
  Rng rng = make_rng(3, "t");
  const double eta = 0.16 * 500 / 2;
  const auto r = subsample_remaining(c, {}, 2, eta, 0.25, 100, rng);
  CHECK(r.p == doctest::Approx(0.4));
  CHECK(r.sampled_size < 500);
  CHECK(r.sampled_size == std::accumulate(r.sampled.begin(), r.sampled.end(), std::uint64_t{0}));
  std::vector<double> w(500, 1.0), t(500);
  for (std::size_t i = 0; i < 500; ++i) t[i] = static_cast<double>(r.sampled[i]) * r.weight;
  for (const auto& word : c.words()) {
    const double exact = weighted_value(word, WeightVector(w));
    const double approx = weighted_value(word, WeightVector(t));
    CHECK(std::abs(approx - exact) <= 0.25 * exact + 1e-9);
  }
}

TEST_CASE("subsample spreads copies over members") {
  const Code c = Code::from_strings({"1100", "0011", "1111"});
  const std::vector<std::uint64_t> copies{30, 10, 25, 25};
  Rng rng = make_rng(8, "t");
  const auto r = subsample_remaining(c, copies, 2, 10.0, 0.5, 200, rng);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.sampled[i] <= copies[i]);
  CHECK(r.sampled_size == std::accumulate(r.sampled.begin(), r.sampled.end(), std::uint64_t{0}));
}

TEST_CASE("single-word acceptance rate matches the binomial window") {
  const Code c = Code::from_strings({std::string(100, '1')});
  const double p = 0.5, eps = 0.3;
  const double eta = p * p * 100;  // sqrt(eta / 100) = p
  std::size_t calls = 0, attempts = 0;
  for (std::uint64_t s = 0; s < 5000; ++s) {
    Rng rng = make_rng(s, "accept");
    const auto r = subsample_remaining(c, {}, 1, eta, eps, 1000, rng);
    ++calls;
    attempts += r.attempts;
  }
  const double rate = static_cast<double>(calls) / static_cast<double>(attempts);
  // accepted iff |2X - 100| <= 30
  const double truth = binomial_window(100, p, 35, 65);
  const double sigma = std::sqrt(truth * (1 - truth) / static_cast<double>(attempts));
  CHECK(std::abs(rate - truth) <= 3 * sigma + 1e-12);
  CHECK(rate >= 1 - 2 * std::exp(-0.38 * eps * eps * 100 * p) - 3 * sigma);
}

TEST_CASE("attempt cap exhaustion throws") {
  // p = sqrt(0.02), so no sample can hit the word weight within 1e-6
  const Code c = Code::from_strings({std::string(100, '1')});
  Rng rng = make_rng(0, "t");
  CHECK_THROWS_AS(subsample_remaining(c, {}, 1, 2.0, 1e-6, 5, rng), SamplingFailure);
}

TEST_CASE("small codes are kept whole") {
  const auto r = sparsify_unweighted(kK3, SparsifyParams::practical(0.5, 1));
  CHECK(r.weights.values() == std::vector<double>{1, 1, 1});
  CHECK(r.report.output_support == 3);
  CHECK(r.report.verification.pass);
  CHECK(r.report.verification.max_deviation() == 0.0);
  REQUIRE_FALSE(r.report.nodes.empty());
  CHECK(r.report.nodes[0].leaf == "retain");
}

TEST_CASE("theory constants keep desk-scale codes whole") {
  const Code c = parallel_block_code({100, 100});
  const auto r = sparsify_unweighted(c, SparsifyParams::theory(0.5, 2));
  CHECK(r.report.output_support == 200);
  CHECK(r.report.verification.pass);
}

TEST_CASE("two-block fixture shrinks with a small eta constant") {
  const Code c = parallel_block_code({250, 250});
  auto params = SparsifyParams::practical(0.25, 7);
  params.eta_constant = 0.03;
  const auto r = sparsify_unweighted(c, params);
  CHECK(r.report.verification.pass);
  CHECK(r.report.output_support < 250);
  const auto v = verify_sparsifier(c, WeightVector::uniform(500), r.weights, 0.25);
  CHECK(v.pass);
  CHECK(r.report.root_cl == 2);
  // per-node records carry the recursion
  CHECK(r.report.nodes.front().path == "r");
  CHECK(r.report.nodes.front().sampled <= r.report.nodes.front().support);
}

TEST_CASE("same seed gives the same sparsifier") {
  const Code c = parallel_block_code({120, 80});
  auto params = SparsifyParams::practical(0.3, 11);
  params.eta_constant = 0.05;
  const auto a = sparsify_unweighted(c, params);
  const auto b = sparsify_unweighted(c, params);
  CHECK(a.weights.values() == b.weights.values());
  params.seed = 12;
  const auto d = sparsify_unweighted(c, params);
  CHECK(d.report.verification.pass);
}

TEST_CASE("cut code of a small random graph") {
  Rng rng = make_rng(5, "graph");
  const Graph g = random_connected_graph(8, 0.6, rng);
  const Code c = cut_code(g);
  auto params = SparsifyParams::practical(0.5, 3);
  params.eta_constant = 0.05;
  const auto r = sparsify_unweighted(c, params);
  CHECK(r.report.verification.pass);
  CHECK(r.report.verification.words_checked == c.nonzero_count());
  CHECK(oracle::max_relative_error(oracle::from_code(c), std::vector<double>(c.m(), 1.0), r.weights.values()) <=
        0.5 + 1e-9);
}

TEST_CASE("duplicated sparsify preserves copy-weighted values") {
  const Code c = Code::from_strings({"10", "01", "11"});
  const std::vector<std::uint64_t> copies{40, 60};
  auto params = SparsifyParams::practical(0.4, 4);
  params.eta_constant = 0.05;
  const auto r = sparsify_duplicated(c, copies, params);
  CHECK(r.report.m == 100);
  // weight of coordinate i sums its copies, so <w, c> for w = copies is preserved
  const auto v = verify_sparsifier(c, WeightVector::from_copies(copies), r.weights, 0.4);
  CHECK(v.pass);
}
