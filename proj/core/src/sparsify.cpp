#include "chainsparse/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "chainsparse/density.hpp"
#include "chainsparse/errors.hpp"
#include "columns.hpp"

namespace chainsparse {

SparsifyParams SparsifyParams::theory(double epsilon, std::uint64_t seed) {
  SparsifyParams p;
  p.epsilon = epsilon;
  p.eta_constant = 1000.0;
  p.denom_constant = 20.0;
  p.mode = SparsifyMode::kTheory;
  p.seed = seed;
  return p;
}

SparsifyParams SparsifyParams::practical(double epsilon, std::uint64_t seed) {
  SparsifyParams p;
  p.epsilon = epsilon;
  p.seed = seed;
  return p;
}

void SparsifyParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InputError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
  if (!(eta_constant > 0.0) || !std::isfinite(eta_constant)) throw InputError("eta constant must be positive");
  if (!(denom_constant > 0.0) || !std::isfinite(denom_constant)) {
    throw InputError("denominator constant must be positive");
  }
  if (max_depth && *max_depth == 0) throw InputError("max depth must be at least 1");
  if (attempt_cap == 0) throw InputError("attempt cap must be at least 1");
}

double llog(double m) { return std::max(1.0, std::log2(std::log2(m))); }

double compute_eta(double m, double epsilon, const SparsifyParams& params) {
  if (m < 2.0) throw InputError("eta needs m >= 2");
  const double r = params.denom_constant * llog(m) / epsilon;
  return params.eta_constant * std::log2(m) * r * r;
}

double compose_accuracy(const std::vector<double>& child_eps) {
  double up = 1.0;
  double down = 1.0;
  for (double e : child_eps) {
    up *= 1.0 + e;
    down *= 1.0 - e;
  }
  return std::max(up - 1.0, 1.0 - down);
}

namespace {

// Uniform K-subset of {0..n-1}, sorted.
std::vector<std::uint64_t> choose_units(std::uint64_t n, std::uint64_t k, Rng& rng) {
  const bool flip = k > n / 2;
  const std::uint64_t draw = flip ? n - k : k;
  std::unordered_set<std::uint64_t> picked;
  picked.reserve(draw * 2);
  // Floyd's algorithm.
  for (std::uint64_t j = n - draw; j < n; ++j) {
    std::uniform_int_distribution<std::uint64_t> u(0, j);
    const std::uint64_t t = u(rng);
    if (!picked.insert(t).second) picked.insert(j);
  }
  std::vector<std::uint64_t> out;
  if (flip) {
    out.reserve(k);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (!picked.count(i)) out.push_back(i);
    }
  } else {
    out.assign(picked.begin(), picked.end());
    std::sort(out.begin(), out.end());
  }
  return out;
}

}  // namespace

SubsampleResult subsample_remaining(const Code& code, CopySpan copies, std::size_t cl_bound,
                                    double eta, double target_eps, std::size_t attempt_cap,
                                    Rng& rng) {
  if (!copies.empty() && copies.size() != code.m()) {
    throw InputError("copy counts do not match the code length");
  }
  if (cl_bound == 0) throw InputError("CL bound must be at least 1");
  SubsampleResult result;
  result.sampled.assign(code.m(), 0);
  const detail::ColumnClasses cc = detail::build_column_classes(code, copies);
  std::uint64_t m_prime = 0;
  for (auto w : cc.weight) m_prime += w;

  const double p = m_prime == 0 ? 1.0
                                : std::min(1.0, std::sqrt(eta * static_cast<double>(cl_bound) /
                                                          static_cast<double>(m_prime)));
  result.p = p;
  if (p >= 1.0) {
    for (const auto& members : cc.members) {
      for (auto j : members) result.sampled[j] = copies.empty() ? 1 : copies[j];
    }
    result.sampled_size = m_prime;
    result.degenerate = true;
    return result;
  }

  const double limit = 2.0 * std::sqrt(static_cast<double>(cl_bound) * static_cast<double>(m_prime) * eta);
  // Word -> classes it contains, and its true weight.
  const std::size_t n = cc.word_count();
  std::vector<std::vector<std::size_t>> word_classes(n);
  std::vector<double> true_weight(n, 0.0);
  for (std::size_t k = 0; k < cc.class_count(); ++k) {
    cc.patterns[k].for_each_set_bit([&](std::size_t w) {
      word_classes[w].push_back(k);
      true_weight[w] += static_cast<double>(cc.weight[k]);
    });
  }

  std::vector<std::uint64_t> totals(cc.class_count());
  for (std::size_t attempt = 1; attempt <= attempt_cap; ++attempt) {
    std::uint64_t size = 0;
    for (std::size_t k = 0; k < totals.size(); ++k) {
      std::binomial_distribution<std::uint64_t> bin(cc.weight[k], p);
      totals[k] = bin(rng);
      size += totals[k];
    }
    if (static_cast<double>(size) > limit) continue;
    bool ok = true;
    double worst = 0.0;
    for (std::size_t w = 0; w < n && ok; ++w) {
      double approx = 0.0;
      for (auto k : word_classes[w]) approx += static_cast<double>(totals[k]);
      approx /= p;
      ok = within_relative(approx, true_weight[w], target_eps);
      worst = std::max(worst, std::abs(approx - true_weight[w]) / true_weight[w]);
    }
    if (!ok) continue;

    for (std::size_t k = 0; k < totals.size(); ++k) {
      const auto& members = cc.members[k];
      if (members.size() == 1) {
        result.sampled[members[0]] = totals[k];
        continue;
      }
      const auto units = choose_units(cc.weight[k], totals[k], rng);
      std::size_t idx = 0;
      std::uint64_t end = 0;
      for (auto j : members) {
        end += copies.empty() ? 1 : copies[j];
        while (idx < units.size() && units[idx] < end) {
          ++result.sampled[j];
          ++idx;
        }
      }
    }
    result.sampled_size = size;
    result.weight = 1.0 / p;
    result.attempts = attempt;
    result.max_error = worst;
    return result;
  }
  throw SamplingFailure("no acceptable subsample in " + std::to_string(attempt_cap) +
                        " attempts (p = " + std::to_string(p) + ", target eps = " +
                        std::to_string(target_eps) + ")");
}

namespace {

struct Run {
  const SparsifyParams& params;
  double eta;
  std::size_t max_depth;
  double level_eps;
  double root_m;
  std::size_t root_cl;
  std::size_t restart;
  std::vector<double> out;
  SparsifyReport& report;

  std::size_t node_cl(const Code& code) const {
    const std::size_t upper = chain_length_upper(code);
    if (params.cl_bound) return std::min(*params.cl_bound, upper);
    try {
      return chain_length_exact(code, params.budget).value;
    } catch (const InexactError&) {
      return upper;
    }
  }

  void retain(const Code& code, const std::vector<std::uint64_t>& copies, double multiplier) {
    support(code).for_each_set_bit([&](std::size_t j) {
      if (copies[j] > 0) out[code.origin()[j]] += multiplier * static_cast<double>(copies[j]);
    });
  }

  void visit(const Code& code, const std::vector<std::uint64_t>& copies, double multiplier,
             const std::string& path, std::size_t depth) {
    SparsifyNodeRecord rec;
    rec.path = path;
    rec.depth = depth;
    rec.support = support_size(code, copies);
    rec.multiplier = multiplier;
    rec.level_eps = level_eps;
    if (root_cl > 0) {
      rec.size_bound = 4.0 * static_cast<double>(root_cl) *
                       std::pow(root_m / static_cast<double>(root_cl), 1.0 / std::ldexp(1.0, static_cast<int>(depth))) *
                       eta;
    }
    if (params.mode == SparsifyMode::kTheory && static_cast<double>(rec.support) > rec.size_bound &&
        rec.support > 0) {
      throw CertificateViolation("node " + path + " has support " + std::to_string(rec.support) +
                                 " above the level size bound");
    }
    const std::size_t index = report.nodes.size();
    report.nodes.push_back(rec);
    auto leaf = [&](const char* why) {
      report.nodes[index].leaf = why;
      ++report.leaves;
      retain(code, copies, multiplier);
    };
    if (rec.support == 0) return leaf("empty");
    if (depth >= max_depth) return leaf("depth");

    const std::size_t cl = depth == 0 ? root_cl : node_cl(code);
    report.nodes[index].cl_bound = cl;
    const double mp = static_cast<double>(rec.support);
    if (2.0 * std::sqrt(static_cast<double>(cl) * mp * eta) >= mp) return leaf("retain");

    const double d = std::sqrt(mp * eta / static_cast<double>(cl));
    DecomposeOptions dopts;
    dopts.cl_bound = cl;
    dopts.copies = copies;
    dopts.budget = params.budget;
    const DecompositionResult dec = decompose(code, d, DensityMode::kExact, dopts);

    std::vector<std::uint64_t> peel_copies;
    std::vector<std::uint64_t> kept_copies;
    for (auto j : dec.peeled) peel_copies.push_back(copies[j]);
    for (auto j : dec.kept) kept_copies.push_back(copies[j]);

    Rng rng = make_rng(params.seed, "sparsify/" + path, restart);
    const SubsampleResult sub = subsample_remaining(dec.remaining_code, kept_copies, cl, eta,
                                                    level_eps, params.attempt_cap, rng);
    auto& r = report.nodes[index];
    r.d = d;
    r.peeled = dec.peeled_size;
    r.sampled = sub.sampled_size;
    r.attempts = sub.attempts;
    r.p = sub.p;
    r.max_error = sub.max_error;

    std::vector<std::size_t> keep;
    std::vector<std::uint64_t> child_copies;
    for (std::size_t j = 0; j < sub.sampled.size(); ++j) {
      if (sub.sampled[j] > 0) {
        keep.push_back(j);
        child_copies.push_back(sub.sampled[j]);
      }
    }
    visit(restrict(dec.remaining_code, keep), child_copies, multiplier * sub.weight, path + "s",
          depth + 1);
    visit(dec.peel_code, peel_copies, multiplier, path + "p", depth + 1);
  }
};

}  // namespace

SparsifyResult sparsify_duplicated(const Code& code, CopySpan copies, const SparsifyParams& params) {
  params.validate();
  if (copies.size() != code.m()) throw InputError("copy counts do not match the code length");
  const Code base = code.rebased();
  const std::vector<std::uint64_t> root_copies(copies.begin(), copies.end());
  const std::uint64_t total = std::accumulate(root_copies.begin(), root_copies.end(), std::uint64_t{0});
  const double m = std::max(2.0, static_cast<double>(total));

  SparsifyResult result;
  SparsifyReport& report = result.report;
  report.epsilon = params.epsilon;
  report.eta_constant = params.eta_constant;
  report.denom_constant = params.denom_constant;
  report.eta = compute_eta(m, params.epsilon, params);
  report.level_eps = params.epsilon / (params.denom_constant * llog(m));
  report.max_depth = params.max_depth.value_or(static_cast<std::size_t>(std::ceil(llog(m))));
  report.composed_eps = compose_accuracy(std::vector<double>(report.max_depth, report.level_eps));
  report.seed = params.seed;
  report.mode = params.mode;
  report.m = total;
  report.input_support = support(code).count();

  const WeightVector truth = WeightVector::from_copies(copies);
  for (std::size_t restart = 0;; ++restart) {
    report.nodes.clear();
    report.leaves = 0;
    report.restarts = restart;
    Run run{params, report.eta, report.max_depth, report.level_eps, m, 0, restart,
            std::vector<double>(code.m(), 0.0), report};
    run.root_cl = run.node_cl(base);
    report.root_cl = run.root_cl;
    run.visit(base, root_copies, 1.0, "r", 0);
    WeightVector tilde(std::move(run.out));
    report.verification = verify_sparsifier(code, truth, tilde, params.epsilon);
    if (report.verification.pass) {
      report.output_support = tilde.support_size();
      result.weights = std::move(tilde);
      return result;
    }
    if (restart >= params.restart_cap) {
      throw SamplingFailure("sparsifier failed exhaustive verification after " +
                            std::to_string(restart + 1) + " runs");
    }
  }
}

SparsifyResult sparsify_unweighted(const Code& code, const SparsifyParams& params) {
  const std::vector<std::uint64_t> ones(code.m(), 1);
  return sparsify_duplicated(code, ones, params);
}

}  // namespace chainsparse
