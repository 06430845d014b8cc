#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "chainsparse/code.hpp"
#include "chainsparse/generators.hpp"

namespace testutil {

// Three blocks of 16 coordinates, one per weight group. Block g holds
// weights M^g * (0.9 M)^(k/15) for k = 0..15 with M = 48^3, so the weights
// span [1, 0.9^3 * 48^9] and block g lands in group t = g.
struct WideWeightFixture {
  chainsparse::Code code;
  chainsparse::WeightVector weights;
  std::vector<std::size_t> block_sizes;
};

inline WideWeightFixture wide_weight_fixture() {
  WideWeightFixture f;
  f.block_sizes = {16, 16, 16};
  f.code = chainsparse::parallel_block_code(f.block_sizes);
  const double m3 = 48.0 * 48.0 * 48.0;
  std::vector<double> w(48);
  for (std::size_t j = 0; j < 48; ++j) {
    const double g = static_cast<double>(j / 16);
    const double k = static_cast<double>(j % 16);
    w[j] = std::pow(m3, g) * std::pow(0.9 * m3, k / 15.0);
  }
  f.weights = chainsparse::WeightVector(std::move(w));
  return f;
}

}  // namespace testutil
