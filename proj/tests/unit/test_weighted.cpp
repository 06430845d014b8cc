#include <doctest.h>

#include <cmath>

#include "chainsparse/chain_metrics.hpp"
#include "chainsparse/errors.hpp"
#include "chainsparse/generators.hpp"
#include "chainsparse/weighted.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_codes.hpp"

using namespace chainsparse;

namespace {

const Code kK3 = Code::from_strings({"110", "101", "011", "000"});

WeightedParams small_eta(std::uint64_t seed, double eta_constant = 0.05) {
  WeightedParams p;
  p.sparsify = SparsifyParams::practical(0.5, seed);
  p.sparsify.eta_constant = eta_constant;
  return p;
}

}  // namespace

TEST_CASE("duplication counts") {
  // unit weights at eps = 1/2 give floor(2 * 1 / 0.5) = 4 copies
  const auto plan = make_duplication_plan(WeightVector::uniform(5), 0.5);
  CHECK(plan.copies == std::vector<std::uint64_t>(5, 4));
  CHECK(plan.m_tilde == 20);
  CHECK(plan.scale == 0.25);
  const auto p2 = make_duplication_plan(WeightVector({1.0, 2.7}), 0.3);
  CHECK(p2.copies == std::vector<std::uint64_t>{6, 18});
  CHECK_THROWS_AS(make_duplication_plan(WeightVector({0.5}), 0.3), InputError);
}

TEST_CASE("duplication keeps every word within eps / 2") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Code c = testutil::random_small_code(seed, 8, 10);
    std::vector<double> w(c.m());
    for (std::size_t i = 0; i < c.m(); ++i) w[i] = 1.0 + std::fmod(static_cast<double>(seed * 13 + i * 7), 9.3);
    CHECK(duplication_fidelity_check(c, WeightVector(w), 0.5));
    CHECK(duplication_fidelity_check(c, WeightVector(w), 0.1));
  }
}

TEST_CASE("weight groups") {
  const auto ones = group_weights(WeightVector::uniform(6), 6);
  REQUIRE(ones.groups.size() == 1);
  CHECK(ones.groups.begin()->first == 0);
  const auto g = group_weights(WeightVector({1.0, 999.0, 1e6}), 10);
  CHECK(g.t[0] == 0);
  CHECK(g.t[1] == 0);
  CHECK(g.t[2] == 2);
  const auto boundary = group_weights(WeightVector({1.0, 1000.0, 999.999}), 10);
  CHECK(boundary.t[1] == 1);
  CHECK(boundary.t[2] == 0);
  const auto zero = group_weights(WeightVector({0.0, 2.0}), 2);
  CHECK_FALSE(zero.t[0]);
}

TEST_CASE("word type and group subcodes") {
  const Code c = Code::from_strings({"1100", "0011", "0110"});
  const auto g = group_weights(WeightVector({1.0, 1.0, 100.0, 100.0}), 4);
  CHECK(g.t[2] == 1);
  CHECK(word_type(BitVector::from_string("1100"), g) == 0);
  CHECK(word_type(BitVector::from_string("0110"), g) == 1);
  CHECK_FALSE(word_type(BitVector::from_string("0000"), g));
  const auto subs = group_subcodes(c, g);
  REQUIRE(subs.size() == 2);
  // group 0 sees C_0 and C_1 restricted to {0, 1}
  CHECK(subs[0].code == Code::from_strings({"11", "01", "00"}));
  CHECK(subs[1].code == Code::from_strings({"11", "10"}));
}

TEST_CASE("group chain lengths add up to at most twice CL") {
  const auto f = testutil::wide_weight_fixture();
  const auto grouping = group_weights(f.weights, 48);
  CHECK(grouping.groups.size() == 3);
  std::size_t total = 0;
  for (const auto& sub : group_subcodes(f.code, grouping)) total += chain_length_exact(sub.code).value;
  CHECK(total <= 2 * chain_length_exact(f.code).value);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Code c = testutil::random_small_code(seed, 8, 12);
    std::vector<double> w(c.m());
    for (std::size_t i = 0; i < c.m(); ++i) w[i] = std::pow(static_cast<double>(c.m() * c.m() * c.m()), (seed + i) % 3);
    const auto gr = group_weights(WeightVector(w), c.m());
    std::size_t sum = 0;
    for (const auto& sub : group_subcodes(c, gr)) sum += oracle::chain_length(oracle::from_code(sub.code));
    CAPTURE(seed);
    CHECK(sum <= 2 * oracle::chain_length(oracle::from_code(c)));
  }
}

TEST_CASE("bounded weights are scale invariant") {
  const Code c = parallel_block_code({40, 40});
  std::vector<double> w(80), w3(80);
  for (std::size_t i = 0; i < 80; ++i) {
    w[i] = 1.0 + static_cast<double>(i % 4);
    w3[i] = 3.0 * w[i];
  }
  const auto params = small_eta(2);
  const auto a = sparsify_bounded_weights(c, WeightVector(w), 0.5, params);
  const auto b = sparsify_bounded_weights(c, WeightVector(w3), 0.5, params);
  for (std::size_t i = 0; i < 80; ++i) CHECK(b.weights[i] == doctest::Approx(3.0 * a.weights[i]));
  CHECK(a.report.verification.pass);
}

TEST_CASE("bounded weights on the two-block code with weights 1 and 3") {
  const Code c = parallel_block_code({250, 250});
  std::vector<double> w(500);
  for (std::size_t i = 0; i < 500; ++i) w[i] = i % 2 == 0 ? 1.0 : 3.0;
  const auto r = sparsify_bounded_weights(c, WeightVector(w), 0.5, small_eta(5));
  CHECK(r.report.verification.pass);
  CHECK(r.report.m_tilde == 250 * 4 + 250 * 12);
  CHECK(oracle::max_relative_error(oracle::from_code(c), w, r.weights.values()) <= 0.5 + 1e-9);
}

TEST_CASE("bounded weights reject weights above m cubed") {
  const Code c = Code::from_strings({"11"});
  CHECK_THROWS_AS(sparsify_bounded_weights(c, WeightVector({1.0, 9.0}), 0.9, small_eta(1)), InputError);
}

TEST_CASE("zero weights never reach the output") {
  const Code c = parallel_block_code({30, 30});
  std::vector<double> w(60, 2.0);
  for (std::size_t i = 0; i < 60; i += 7) w[i] = 0.0;
  auto params = small_eta(3);
  params.small_eps_shortcuts = false;
  const auto r = sparsify_weighted(c, WeightVector(w), 0.5, params);
  for (std::size_t i = 0; i < 60; i += 7) CHECK(r.weights[i] == 0.0);
  CHECK(r.report.verification.pass);
  const auto b = sparsify_bounded_weights(c, WeightVector(w), 0.5, params);
  for (std::size_t i = 0; i < 60; i += 7) CHECK(b.weights[i] == 0.0);
}

TEST_CASE("small eps returns w unchanged") {
  const Code c = parallel_block_code({8, 8});
  const auto w = WeightVector::uniform(16, 2.0);
  const auto r = sparsify_weighted(c, w, 0.5, small_eta(1));  // 8 / sqrt(16) > 1/2
  CHECK(r.report.shortcut == "small-eps");
  CHECK(r.weights.values() == w.values());
}

TEST_CASE("wide-weight fixture sparsifies group by group") {
  const auto f = testutil::wide_weight_fixture();
  auto params = small_eta(9, 0.01);
  params.small_eps_shortcuts = false;
  const auto r = sparsify_weighted(f.code, f.weights, 0.5, params);
  CHECK(r.report.verification.pass);
  CHECK(r.report.groups.size() == 3);
  for (const auto& g : r.report.groups) CHECK(g.within_cap);
  CHECK(oracle::max_relative_error(oracle::from_code(f.code), f.weights.values(), r.weights.values()) <= 0.5 + 1e-9);
}

TEST_CASE("dimension-free below the threshold makes two passes") {
  WeightedParams params = small_eta(4);
  const auto r = sparsify_dimension_free(kK3, WeightVector::uniform(3), 0.5, params);
  REQUIRE(r.report.passes.size() == 2);
  CHECK(r.report.passes[0].kind == 2);
  CHECK(r.report.passes[1].kind == 2);
  CHECK(r.report.verification.pass);
  CHECK_THROWS_AS(sparsify_dimension_free(kK3, WeightVector::uniform(3), 0.6, params), InputError);
}

TEST_CASE("log star") {
  CHECK(log_star(1) == 0);
  CHECK(log_star(2) == 1);
  CHECK(log_star(16) == 3);
  CHECK(log_star(65536) == 4);
  CHECK(log_star(65537) == 5);
}

TEST_CASE("error series") {
  // With x -> 2^(x^(1/6)) the terms shrink for q in [10, 60], so the series
  // does not behave like O(1/q) there.
  for (double q : {10.0, 30.0, 60.0}) {
    const auto s = error_series_root(q);
    CHECK_FALSE(s.increasing);
    CHECK(s.sum > 2.0 / q);
  }
  // With x -> 2^(x/6) the terms grow once q is large enough.
  const auto lin = error_series_linear(60.0);
  CHECK(lin.increasing);
  CHECK(lin.sum <= 2.0 / 60.0);
  CHECK(lin.sum >= 1.0 / 60.0);
}
