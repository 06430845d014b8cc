#include <doctest.h>

#include <cmath>
#include <vector>

#include "chainsparse/code.hpp"
#include "chainsparse/errors.hpp"

using namespace chainsparse;

namespace {

const Code kI3 = Code::from_strings({"100", "010", "001"});
const Code kK3 = Code::from_strings({"110", "101", "011", "000"});

std::vector<std::size_t> idx(std::initializer_list<std::size_t> v) { return v; }

}  // namespace

TEST_CASE("bit strings round trip and reject junk") {
  const auto v = BitVector::from_string("10110");
  CHECK(v.size() == 5);
  CHECK(v.count() == 3);
  CHECK(v.to_string() == "10110");
  CHECK(v.indices() == idx({0, 2, 3}));
  CHECK_THROWS_AS(BitVector::from_string("10x"), InputError);
}

TEST_CASE("bit vectors past one block") {
  BitVector a(130), b(130);
  a.set(3);
  a.set(129);
  b.set(129);
  CHECK(b.is_subset_of(a));
  CHECK_FALSE(a.is_subset_of(b));
  CHECK(a.find_next(4) == 129);
  CHECK((a & b).count() == 1);
  CHECK(BitVector::ones(130).count() == 130);
}

TEST_CASE("codes deduplicate and sort their words") {
  const Code c = Code::from_strings({"11", "01", "11", "00"});
  CHECK(c.size() == 3);
  CHECK(c.m() == 2);
  CHECK(c.contains(BitVector::from_string("01")));
  CHECK_FALSE(c.contains(BitVector::from_string("10")));
  CHECK(c.nonzero_count() == 2);
  CHECK_THROWS_AS(Code::from_strings({"11", "1"}), InputError);
}

TEST_CASE("restrict I3 to the first two coordinates") {
  const Code r = restrict(kI3, idx({0, 1}));
  CHECK(r.m() == 2);
  CHECK(r == Code::from_strings({"10", "01", "00"}));
}

TEST_CASE("restrict to every coordinate is the identity") {
  CHECK(restrict(kK3, idx({0, 1, 2})) == kK3);
  CHECK(restrict(kK3, idx({2, 0, 1, 1})) == kK3);
}

TEST_CASE("restrict K3 to coordinate 1") {
  const Code r = restrict(kK3, idx({0}));
  CHECK(r == Code::from_strings({"1", "0"}));
}

TEST_CASE("restrict out of range throws") { CHECK_THROWS_AS(restrict(kK3, idx({3})), InputError); }

TEST_CASE("restrict composes and keeps origins") {
  const Code c = Code::from_strings({"110100", "011010", "000111", "101001"});
  const Code a = restrict(c, idx({0, 2, 3, 5}));
  const Code ab = restrict(a, idx({1, 3}));  // original 2 and 5
  CHECK(ab == restrict(c, idx({2, 5})));
  CHECK(ab.origin() == idx({2, 5}));
  CHECK(restrict(a, idx({0, 1, 2, 3})) == a);
}

TEST_CASE("support") {
  CHECK(support_indices(Code::from_strings({"000"})).empty());
  CHECK(support_indices(kI3) == idx({0, 1, 2}));
  CHECK(support_indices(Code::from_strings({"110", "010"})) == idx({0, 1}));
  const std::vector<std::uint64_t> copies{2, 5, 7};
  CHECK(support_size(Code::from_strings({"110", "010"}), copies) == 7);
}

TEST_CASE("weighted value") {
  CHECK(weighted_value(BitVector::from_string("111"), WeightVector::uniform(3)) == 3.0);
  CHECK(weighted_value(BitVector::from_string("000"), WeightVector({4.0, 1.0, 9.0})) == 0.0);
  CHECK(weighted_value(BitVector::from_string("101"), WeightVector({2.0, 5.0, 0.5})) == 2.5);
  CHECK_THROWS_AS(weighted_value(BitVector::from_string("10"), WeightVector::uniform(3)), InputError);
}

TEST_CASE("weight vectors reject negative and non-finite entries") {
  CHECK_THROWS_AS(WeightVector({1.0, -1.0}), InputError);
  CHECK_THROWS_AS(WeightVector({NAN}), InputError);
  WeightVector w({0.0, 2.0, 0.5});
  CHECK(w.support_size() == 2);
  CHECK(w.min_positive() == 0.5);
  CHECK(w.max() == 2.0);
}

TEST_CASE("certify flags a doubled weight") {
  const auto w = WeightVector::uniform(3);
  CHECK(certify(kK3, w, w, 0.1).valid);
  const auto twice = WeightVector::uniform(3, 2.0);
  const auto cert = certify(kK3, w, twice, 0.5);
  CHECK_FALSE(cert.valid);
  CHECK(cert.max_relative_error == doctest::Approx(1.0));
}
