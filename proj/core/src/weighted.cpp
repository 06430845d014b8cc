#include "chainsparse/weighted.hpp"

#include <algorithm>
#include <cmath>

#include "chainsparse/chain_metrics.hpp"
#include "chainsparse/errors.hpp"

namespace chainsparse {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InputError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
}

void check_lengths(const Code& code, const WeightVector& w) {
  if (w.m() != code.m()) {
    throw InputError("weight vector of length " + std::to_string(w.m()) + " for a code over " +
                     std::to_string(code.m()) + " coordinates");
  }
}

long double power(double base, long exponent) {
  return std::pow(static_cast<long double>(base), static_cast<long double>(exponent));
}

}  // namespace

DuplicationPlan make_duplication_plan(const WeightVector& normalized, double epsilon) {
  check_epsilon(epsilon);
  DuplicationPlan plan;
  plan.scale = epsilon / 2.0;
  plan.copies.reserve(normalized.m());
  for (double v : normalized.values()) {
    if (v < 1.0) throw InputError("duplication needs normalized weights >= 1");
    const double b = std::floor(2.0 * v / epsilon);
    if (b > 9.0e18) throw InputError("duplication count overflows");
    plan.copies.push_back(static_cast<std::uint64_t>(b));
    plan.m_tilde += plan.copies.back();
  }
  return plan;
}

bool duplication_fidelity_check(const Code& code, const WeightVector& w, double epsilon) {
  check_lengths(code, w);
  const double min_w = w.min_positive();
  if (min_w == 0.0) return true;
  std::vector<double> normalized;
  std::vector<std::size_t> pos = w.support();
  for (auto i : pos) normalized.push_back(w[i] / min_w);
  const DuplicationPlan plan = make_duplication_plan(WeightVector(normalized), epsilon);
  for (const auto& word : code.words()) {
    double exact = 0.0;
    double dup = 0.0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      if (!word.test(pos[k])) continue;
      exact += normalized[k];
      dup += static_cast<double>(plan.copies[k]);
    }
    if (exact == 0.0) continue;
    if (!within_relative(plan.scale * dup, exact, epsilon / 2.0)) return false;
  }
  return true;
}

BoundedResult sparsify_bounded_weights(const Code& code, const WeightVector& w, double epsilon,
                                       const WeightedParams& params) {
  check_epsilon(epsilon);
  check_lengths(code, w);
  BoundedResult result;
  BoundedReport& report = result.report;
  report.epsilon = epsilon;
  const std::vector<std::size_t> pos = w.support();
  report.m_effective = pos.size();
  auto unchanged = [&](const char* why) {
    report.shortcut = why;
    result.weights = w;
    report.verification = verify_sparsifier(code, w, w, epsilon);
    report.output_support = pos.size();
    return result;
  };
  if (pos.empty()) return unchanged("no-weight");
  if (params.small_eps_shortcuts && epsilon <= 1.0 / std::sqrt(static_cast<double>(pos.size()))) {
    return unchanged("small-eps");
  }

  const double min_w = w.min_positive();
  report.min_weight = min_w;
  const double ref = static_cast<double>(params.reference_m.value_or(pos.size()));
  const double cap = ref * ref * ref;
  std::vector<double> normalized;
  normalized.reserve(pos.size());
  for (auto i : pos) {
    const double v = w[i] / min_w;
    if (v > cap * (1.0 + 1e-12)) {
      throw InputError("normalized weight " + std::to_string(v) + " exceeds m^3 = " + std::to_string(cap));
    }
    normalized.push_back(v);
  }
  const DuplicationPlan plan = make_duplication_plan(WeightVector(normalized), epsilon);
  report.m_tilde = plan.m_tilde;

  SparsifyParams inner = params.sparsify;
  inner.epsilon = epsilon / 3.0;
  const SparsifyResult sparse = sparsify_duplicated(restrict(code, pos), plan.copies, inner);
  report.inner = sparse.report;

  std::vector<double> tilde(code.m(), 0.0);
  for (std::size_t k = 0; k < pos.size(); ++k) tilde[pos[k]] = sparse.weights[k] * plan.scale * min_w;
  result.weights = WeightVector(std::move(tilde));
  report.output_support = result.weights.support_size();
  report.verification = verify_sparsifier(code, w, result.weights, epsilon);
  if (!report.verification.pass) {
    throw CertificateViolation("bounded-weight sparsifier failed verification at eps = " +
                               std::to_string(epsilon));
  }
  return result;
}

WeightGrouping group_weights(const WeightVector& w, std::size_t m) {
  WeightGrouping g;
  g.m = m;
  g.min_weight = w.min_positive();
  g.t.assign(w.m(), std::nullopt);
  if (g.min_weight == 0.0) return g;
  const double log_m = m > 1 ? std::log(static_cast<double>(m)) : 0.0;
  for (std::size_t i = 0; i < w.m(); ++i) {
    if (w[i] == 0.0) continue;
    const double x = w[i] / g.min_weight;
    long t = 0;
    if (log_m > 0.0) {
      t = static_cast<long>(std::floor(std::log(x) / (3.0 * log_m)));
      const auto md = static_cast<double>(m);
      while (power(md, 3 * (t + 1)) <= static_cast<long double>(x)) ++t;
      while (t > 0 && power(md, 3 * t) > static_cast<long double>(x)) --t;
    }
    g.t[i] = t;
    g.groups[t].push_back(i);
  }
  return g;
}

std::optional<long> word_type(const BitVector& word, const WeightGrouping& grouping) {
  std::optional<long> type;
  word.for_each_set_bit([&](std::size_t i) {
    if (grouping.t[i] && (!type || *grouping.t[i] > *type)) type = grouping.t[i];
  });
  return type;
}

std::vector<GroupSubcode> group_subcodes(const Code& code, const WeightGrouping& grouping) {
  std::vector<std::optional<long>> types;
  types.reserve(code.size());
  for (const auto& word : code.words()) types.push_back(word_type(word, grouping));
  std::vector<GroupSubcode> out;
  for (const auto& [t, coords] : grouping.groups) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < code.size(); ++i) {
      if (types[i] && (*types[i] == t || *types[i] == t + 1)) members.push_back(i);
    }
    GroupSubcode g;
    g.t = t;
    g.coordinates = coords;
    g.code = restrict(code.subcode(members), coords);
    g.proper = g.code.nonzero_count() > 0;
    out.push_back(std::move(g));
  }
  return out;
}

WeightedResult sparsify_weighted(const Code& code, const WeightVector& w, double epsilon,
                                 const WeightedParams& params) {
  check_epsilon(epsilon);
  check_lengths(code, w);
  WeightedResult result;
  WeightedReport& report = result.report;
  report.epsilon = epsilon;
  const std::vector<std::size_t> pos = w.support();
  report.m_effective = pos.size();
  report.min_weight = w.min_positive();
  auto unchanged = [&](const char* why) {
    report.shortcut = why;
    result.weights = w;
    report.verification = verify_sparsifier(code, w, w, epsilon);
    report.output_support = pos.size();
    return result;
  };
  if (pos.empty()) return unchanged("no-weight");
  if (params.small_eps_shortcuts && epsilon < 8.0 / std::sqrt(static_cast<double>(pos.size()))) {
    return unchanged("small-eps");
  }

  const WeightGrouping grouping = group_weights(w, pos.size());
  const auto subs = group_subcodes(code, grouping);
  const double md = static_cast<double>(pos.size());
  std::vector<double> tilde(code.m(), 0.0);
  for (const auto& sub : subs) {
    GroupRecord rec;
    rec.t = sub.t;
    rec.size = sub.coordinates.size();
    rec.words = sub.code.size();
    rec.proper = sub.proper;
    if (sub.proper) {
      std::vector<BitVector> words = sub.code.words();
      words.push_back(BitVector::ones(sub.coordinates.size()));
      const Code augmented(sub.coordinates.size(), std::move(words));
      std::vector<double> local;
      local.reserve(sub.coordinates.size());
      for (auto i : sub.coordinates) local.push_back(w[i]);

      WeightedParams inner = params;
      inner.reference_m = pos.size();
      inner.sparsify.seed = derive_seed(params.sparsify.seed, "group", static_cast<std::uint64_t>(sub.t));
      if (params.sparsify.cl_bound) inner.sparsify.cl_bound = *params.sparsify.cl_bound + 1;
      const BoundedResult bounded =
          sparsify_bounded_weights(augmented, WeightVector(std::move(local)), epsilon / 2.0, inner);
      for (std::size_t k = 0; k < sub.coordinates.size(); ++k) {
        const double v = bounded.weights[k];
        tilde[sub.coordinates[k]] = v;
        rec.max_normalized_weight = std::max(rec.max_normalized_weight, v / report.min_weight);
        if (v != 0.0) ++rec.output_support;
      }
      rec.within_cap = static_cast<long double>(rec.max_normalized_weight) <=
                       2.0L * power(md, 3 * sub.t + 4);
      rec.bounded = bounded.report;
    }
    report.groups.push_back(std::move(rec));
  }

  result.weights = WeightVector(std::move(tilde));
  report.output_support = result.weights.support_size();
  report.verification = verify_sparsifier(code, w, result.weights, epsilon);
  if (!report.verification.pass) {
    throw CertificateViolation("weighted sparsifier failed verification at eps = " +
                               std::to_string(epsilon));
  }
  return result;
}

std::size_t log_star(double m) {
  std::size_t k = 0;
  while (m > 1.0) {
    m = std::log2(m);
    ++k;
  }
  return k;
}

DimFreeResult sparsify_dimension_free(const Code& code, const WeightVector& w, double epsilon,
                                      const WeightedParams& params) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw InputError("dimension-free sparsification needs eps in (0, 1/2], got " + std::to_string(epsilon));
  }
  check_lengths(code, w);
  DimFreeResult result;
  DimFreeReport& report = result.report;
  report.epsilon = epsilon;
  report.q_constant = params.q_constant;
  report.input_support = w.support_size();

  const std::size_t upper = chain_length_upper(code);
  if (params.sparsify.cl_bound) {
    report.cl_bound = std::min(*params.sparsify.cl_bound, upper);
  } else {
    try {
      report.cl_bound = chain_length_exact(code, params.sparsify.budget).value;
    } catch (const InexactError&) {
      report.cl_bound = upper;
    }
  }
  report.log2_threshold = static_cast<double>(report.cl_bound) / (epsilon * epsilon);
  report.iteration_cap = log_star(std::max<double>(2.0, static_cast<double>(report.input_support))) + 3;

  WeightVector current = w;
  std::size_t pass_index = 0;
  auto run_pass = [&](int kind, double eps) {
    DimFreePass pass;
    pass.kind = kind;
    pass.epsilon = eps;
    pass.support_before = current.support_size();
    pass.log6_bound = std::pow(std::log2(std::max<double>(2.0, static_cast<double>(pass.support_before))), 6);
    WeightedParams inner = params;
    inner.sparsify.seed = derive_seed(params.sparsify.seed, "dimfree", pass_index++);
    WeightedResult r = sparsify_weighted(code, current, eps, inner);
    current = std::move(r.weights);
    pass.support_after = current.support_size();
    pass.report = std::move(r.report);
    report.passes.push_back(std::move(pass));
  };
  auto reduced_eps = [&] {
    const double m = std::max(2.0, static_cast<double>(current.support_size()));
    return epsilon / (params.q_constant * std::log2(m));
  };
  auto above_threshold = [&] {
    const double m = static_cast<double>(current.support_size());
    return m >= 2.0 && std::log2(m) >= report.log2_threshold;
  };

  const bool started_above = above_threshold();
  std::size_t iterations = 0;
  while (above_threshold() && iterations < report.iteration_cap) {
    run_pass(1, reduced_eps());
    ++iterations;
    if (report.passes.back().support_after >= report.passes.back().support_before) {
      report.stopped_without_progress = true;
      break;
    }
  }
  run_pass(2, reduced_eps());
  run_pass(2, epsilon / 2.0);

  std::vector<double> eps_list;
  for (const auto& p : report.passes) eps_list.push_back(p.epsilon);
  report.composed_eps = compose_accuracy(eps_list);
  report.composed_within_eps = report.composed_eps <= epsilon;
  report.output_support = current.support_size();
  if (started_above && report.output_support >= report.input_support) {
    throw StagnationError("support stayed at " + std::to_string(report.output_support) +
                          " although the instance is above the case-1 threshold; the constants are "
                          "too large for this instance");
  }
  report.verification = verify_sparsifier(code, w, current, epsilon);
  if (!report.verification.pass) {
    throw CertificateViolation("dimension-free sparsifier failed verification at eps = " +
                               std::to_string(epsilon));
  }
  result.weights = std::move(current);
  return result;
}

namespace {

template <typename Step>
ErrorSeries error_series(double q, std::size_t max_terms, Step step) {
  ErrorSeries s;
  s.increasing = true;
  double x = q;
  for (std::size_t i = 0; i < max_terms; ++i) {
    s.terms.push_back(x);
    s.sum += 1.0 / x;
    if (1.0 / x < 1e-18 || !std::isfinite(x)) break;
    const double next = step(x);
    if (!(next > x)) s.increasing = false;
    x = next;
  }
  return s;
}

}  // namespace

ErrorSeries error_series_root(double q, std::size_t max_terms) {
  return error_series(q, max_terms, [](double x) { return std::exp2(std::pow(x, 1.0 / 6.0)); });
}

ErrorSeries error_series_linear(double q, std::size_t max_terms) {
  return error_series(q, max_terms, [](double x) { return std::exp2(x / 6.0); });
}

}  // namespace chainsparse
