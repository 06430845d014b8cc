#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "chainsparse/errors.hpp"
#include "json_io.hpp"

namespace chainsparse::cli {
namespace {

using io::Json;

struct Outcome {
  Json result = Json::object();
  bool pass = true;
  std::string summary;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::size_t resolve_threads(std::size_t flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CHAINSPARSE_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw InputError(std::string("CHAINSPARSE_THREADS is not a positive integer: ") + env);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

Code load_code(const std::string& path) { return io::code_from_json(io::read_json_file(path)); }

WeightVector load_weights(const std::string& path, std::size_t m) {
  auto w = io::weights_from_json(io::read_json_file(path));
  if (w.m() != m) throw InputError(path + ": weight vector length does not match the code");
  return w;
}

DensityMode parse_density_mode(const std::string& s) {
  if (s == "exact") return DensityMode::kExact;
  if (s == "heuristic") return DensityMode::kHeuristic;
  throw InputError("mode must be exact or heuristic, got " + s);
}

SparsifyMode parse_sparsify_mode(const std::string& s) {
  if (s == "theory") return SparsifyMode::kTheory;
  if (s == "practical") return SparsifyMode::kPractical;
  throw InputError("mode must be theory or practical, got " + s);
}

ContractStop parse_stop(const std::string& s) {
  if (s == "at-least") return ContractStop::kWhileAtLeastAlpha;
  if (s == "above") return ContractStop::kWhileAboveAlpha;
  throw InputError("stop must be at-least or above, got " + s);
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw InputError("bad block size \"" + item + "\"");
    }
  }
  return out;
}

// One flag may be registered on several subcommands; it is set if any copy was given.
using OptionSet = std::vector<CLI::Option*>;

bool given(const OptionSet& opts) {
  return std::any_of(opts.begin(), opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
}

Json null_if_unset(const CLI::Option* opt, const Json& value) {
  return opt->count() > 0 ? value : Json(nullptr);
}

Json null_if_unset(const OptionSet& opts, const Json& value) { return given(opts) ? value : Json(nullptr); }

// Options shared by the three sparsifier subcommands.
struct SparsifyOptions {
  double epsilon = 0.5;
  std::string mode = "practical";
  std::uint64_t seed = 0;
  std::size_t cl_bound = 0;
  OptionSet cl_bound_opt;
  double eta_constant = 1.0;
  OptionSet eta_opt;
  double denom_constant = 1.0;
  OptionSet denom_opt;
  std::size_t max_depth = 0;
  OptionSet depth_opt;
  std::size_t attempt_cap = 100;
  std::size_t restart_cap = 3;
  std::uint64_t budget = kDefaultNodeBudget;

  void add_to(CLI::App* app) {
    app->add_option("--eps", epsilon, "Target accuracy in (0,1)");
    app->add_option("--mode", mode, "theory or practical");
    app->add_option("--seed", seed, "Top-level 64-bit seed");
    cl_bound_opt.push_back(app->add_option("--cl-bound", cl_bound, "Known upper bound on the chain length"));
    eta_opt.push_back(app->add_option("--eta-constant", eta_constant, "Multiplier in eta"));
    denom_opt.push_back(app->add_option("--denom-constant", denom_constant, "Multiplier of llog m in eta"));
    depth_opt.push_back(app->add_option("--max-depth", max_depth, "Recursion depth cap"));
    app->add_option("--attempt-cap", attempt_cap, "Rejection-sampling attempts per node");
    app->add_option("--restart-cap", restart_cap, "Reruns after a failed final verification");
    app->add_option("--budget", budget, "Node budget of exact chain-length searches");
  }

  [[nodiscard]] SparsifyParams params() const {
    const SparsifyMode m = parse_sparsify_mode(mode);
    SparsifyParams p = m == SparsifyMode::kTheory ? SparsifyParams::theory(epsilon, seed)
                                                  : SparsifyParams::practical(epsilon, seed);
    if (given(eta_opt)) p.eta_constant = eta_constant;
    if (given(denom_opt)) p.denom_constant = denom_constant;
    if (given(depth_opt)) p.max_depth = max_depth;
    if (given(cl_bound_opt)) p.cl_bound = cl_bound;
    p.attempt_cap = attempt_cap;
    p.restart_cap = restart_cap;
    p.budget = budget;
    return p;
  }

  [[nodiscard]] Json config() const {
    const SparsifyParams p = params();
    return Json{{"epsilon", epsilon},
                {"mode", mode},
                {"seed", seed},
                {"cl_bound", null_if_unset(cl_bound_opt, cl_bound)},
                {"eta_constant", p.eta_constant},
                {"denom_constant", p.denom_constant},
                {"max_depth", null_if_unset(depth_opt, max_depth)},
                {"attempt_cap", attempt_cap},
                {"restart_cap", restart_cap},
                {"budget", budget}};
  }
};

struct WeightedOptions {
  double q_constant = 40.0;
  bool no_shortcuts = false;
  std::size_t reference_m = 0;
  OptionSet reference_opt;

  void add_to(CLI::App* app) {
    app->add_option("--q", q_constant, "Constant Q in the per-pass accuracy");
    app->add_flag("--no-shortcuts", no_shortcuts, "Never return w unchanged for small eps");
    reference_opt.push_back(app->add_option("--reference-m", reference_m, "m in the m^3 weight cap"));
  }

  [[nodiscard]] WeightedParams params(const SparsifyParams& inner) const {
    WeightedParams p;
    p.sparsify = inner;
    p.q_constant = q_constant;
    p.small_eps_shortcuts = !no_shortcuts;
    if (given(reference_opt)) p.reference_m = reference_m;
    return p;
  }

  void echo(Json& config) const {
    config["q_constant"] = q_constant;
    config["small_eps_shortcuts"] = !no_shortcuts;
    config["reference_m"] = null_if_unset(reference_opt, reference_m);
  }
};

Json chain_summary(const ChainWitness& w) { return io::to_json(w); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chain-length sparsification of binary codes", "chainsparse"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "chainsparse 0.1.0");

  std::size_t threads_flag = 0;
  std::string report_path;
  app.add_option("--threads", threads_flag, "Thread cap (falls back to CHAINSPARSE_THREADS)");
  app.add_option("--report", report_path, "Write the JSON report here instead of stdout");

  Json config = Json::object();
  std::function<Outcome()> action;
  bool raw_output = false;  // gen prints the code itself, not a report

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "Generate a code");
  gen->require_subcommand(1);
  std::string gen_out;

  auto* gen_cut = gen->add_subcommand("cut", "Cut code of a graph");
  std::string graph_path, weights_out;
  std::size_t gen_n = 0;
  double gen_p = 0.5;
  std::uint64_t gen_seed = 0;
  gen_cut->add_option("--graph", graph_path, "Edge list file: header \"n m\", then \"u v [w]\"");
  gen_cut->add_option("--n", gen_n, "Vertices of a random connected G(n, p)");
  gen_cut->add_option("--p", gen_p, "Edge probability of the random graph");
  gen_cut->add_option("--seed", gen_seed, "Seed of the random graph");
  gen_cut->add_option("--weights-out", weights_out, "Write edge weights as a weight vector");
  gen_cut->callback([&] {
    raw_output = true;
    action = [&] {
      Graph g;
      if (!graph_path.empty()) {
        std::ifstream in(graph_path);
        if (!in) throw InputError("cannot open " + graph_path);
        g = Graph::parse_edge_list(in);
      } else if (gen_n > 0) {
        Rng rng = make_rng(gen_seed, "gen/graph");
        g = random_connected_graph(gen_n, gen_p, rng);
      } else {
        throw InputError("gen cut needs --graph or --n");
      }
      const Code code = cut_code(g);
      if (!weights_out.empty()) io::write_json_file(weights_out, io::to_json(WeightVector(g.weights())));
      Outcome o;
      o.result = io::to_json(code);
      o.summary = "cut code: " + std::to_string(g.vertex_count()) + " vertices, " +
                  std::to_string(g.edge_count()) + " edges, " + std::to_string(code.size()) + " words";
      return o;
    };
  });

  auto* gen_linear = gen->add_subcommand("linear", "Support code of a linear code over F_q");
  std::string spec_path;
  unsigned lin_q = 2;
  std::size_t lin_k = 0, lin_m = 0;
  gen_linear->add_option("--spec", spec_path, "Generator matrix JSON {\"q\", \"rows\"}");
  gen_linear->add_option("--q", lin_q, "Field size of a random generator matrix");
  gen_linear->add_option("--k", lin_k, "Rows of a random generator matrix");
  gen_linear->add_option("--m", lin_m, "Columns of a random generator matrix");
  gen_linear->add_option("--seed", gen_seed, "Seed of the random matrix");
  gen_linear->callback([&] {
    raw_output = true;
    action = [&] {
      LinearCodeSpec spec;
      if (!spec_path.empty()) {
        spec = io::linear_spec_from_json(io::read_json_file(spec_path));
      } else if (lin_k > 0 && lin_m > 0) {
        Rng rng = make_rng(gen_seed, "gen/linear");
        spec = random_linear_spec(lin_q, lin_k, lin_m, rng);
      } else {
        throw InputError("gen linear needs --spec or --k and --m");
      }
      const Code code = linear_support_code(spec);
      Outcome o;
      o.result = io::to_json(code);
      o.summary = "linear support code: rank " + std::to_string(generator_rank(spec)) + ", " +
                  std::to_string(code.size()) + " words";
      return o;
    };
  });

  auto* gen_blocks = gen->add_subcommand("blocks", "Block indicators plus the all-ones word");
  std::string sizes;
  gen_blocks->add_option("--sizes", sizes, "Comma-separated block sizes")->required();
  gen_blocks->callback([&] {
    raw_output = true;
    action = [&] {
      const Code code = parallel_block_code(parse_sizes(sizes));
      Outcome o;
      o.result = io::to_json(code);
      o.summary = "block code: m = " + std::to_string(code.m());
      return o;
    };
  });

  auto* gen_random = gen->add_subcommand("random", "Random code with Bernoulli bits");
  std::size_t rnd_m = 0, rnd_count = 0;
  double rnd_density = 0.5;
  gen_random->add_option("--m", rnd_m, "Length")->required();
  gen_random->add_option("--count", rnd_count, "Words drawn before deduplication")->required();
  gen_random->add_option("--density", rnd_density, "Probability of a 1");
  gen_random->add_option("--seed", gen_seed, "Seed");
  gen_random->callback([&] {
    raw_output = true;
    action = [&] {
      Rng rng = make_rng(gen_seed, "gen/random");
      const Code code = random_code(rnd_m, rnd_count, rnd_density, rng);
      Outcome o;
      o.result = io::to_json(code);
      o.summary = "random code: " + std::to_string(code.size()) + " words";
      return o;
    };
  });

  for (auto* sub : {gen_cut, gen_linear, gen_blocks, gen_random}) {
    sub->add_option("--out", gen_out, "Write the code here instead of stdout");
  }

  // ---- structural metrics ----
  std::string in_path;
  std::uint64_t budget = kDefaultNodeBudget;

  auto* cl = app.add_subcommand("cl", "Exact chain length with witness");
  cl->add_option("--in", in_path, "Code JSON")->required();
  cl->add_option("--budget", budget, "Node budget");
  cl->callback([&] {
    config = Json{{"in", in_path}, {"budget", budget}};
    action = [&] {
      const Code code = load_code(in_path);
      const auto r = chain_length_exact(code, budget);
      Outcome o;
      o.result = Json{{"value", r.value}, {"witness", chain_summary(r.witness)}, {"nodes", r.nodes}};
      o.summary = "CL = " + std::to_string(r.value);
      return o;
    };
  });

  auto* nrd = app.add_subcommand("nrd", "Exact non-redundancy with witness");
  nrd->add_option("--in", in_path, "Code JSON")->required();
  nrd->add_option("--budget", budget, "Node budget");
  nrd->callback([&] {
    config = Json{{"in", in_path}, {"budget", budget}};
    action = [&] {
      const Code code = load_code(in_path);
      const auto r = nrd_exact(code, budget);
      Outcome o;
      o.result = Json{{"value", r.value}, {"witness", io::to_json(r.witness)}, {"nodes", r.nodes}};
      o.summary = "NRD = " + std::to_string(r.value);
      return o;
    };
  });

  auto* closure = app.add_subcommand("cl-closure", "Chain length through the union closure");
  closure->add_option("--in", in_path, "Code JSON")->required();
  closure->callback([&] {
    config = Json{{"in", in_path}};
    action = [&] {
      const Code code = load_code(in_path);
      const std::size_t v = union_closure_chain_length(code);
      Outcome o;
      o.result = Json{{"value", v}, {"witness", nullptr}};
      o.summary = "closure chain length = " + std::to_string(v);
      return o;
    };
  });

  std::string density_mode = "exact";
  auto* dens = app.add_subcommand("density", "Minimum subcode density");
  dens->add_option("--in", in_path, "Code JSON")->required();
  dens->add_option("--mode", density_mode, "exact or heuristic");
  dens->callback([&] {
    config = Json{{"in", in_path}, {"mode", density_mode}};
    action = [&] {
      const Code code = load_code(in_path);
      const auto r = density(code, parse_density_mode(density_mode));
      Outcome o;
      o.result = io::to_json(r);
      o.summary = "phi = " + std::to_string(r.phi);
      return o;
    };
  });

  double decompose_d = 1.0;
  std::size_t cl_bound = 0;
  auto* dec = app.add_subcommand("decompose", "Peel sparse subcodes at density d");
  dec->add_option("--in", in_path, "Code JSON")->required();
  dec->add_option("--d", decompose_d, "Density threshold")->required();
  dec->add_option("--mode", density_mode, "exact or heuristic");
  auto* dec_cl = dec->add_option("--cl-bound", cl_bound, "Known upper bound on CL");
  dec->add_option("--budget", budget, "Node budget");
  dec->callback([&] {
    config = Json{{"in", in_path},
                  {"d", decompose_d},
                  {"mode", density_mode},
                  {"cl_bound", null_if_unset(dec_cl, cl_bound)},
                  {"budget", budget}};
    action = [&] {
      const Code code = load_code(in_path);
      DecomposeOptions opts;
      if (dec_cl->count() > 0) opts.cl_bound = cl_bound;
      opts.budget = budget;
      const auto r = decompose(code, decompose_d, parse_density_mode(density_mode), opts);
      Outcome o;
      o.result = io::to_json(r);
      o.pass = r.audit.pass;
      o.summary = "|T| = " + std::to_string(r.peeled_size) + " <= " +
                  std::to_string(static_cast<double>(r.chain_length) * r.d);
      return o;
    };
  });

  // ---- contraction ----
  std::size_t alpha = 1, trials = 1;
  std::uint64_t seed = 0;
  std::string target, stop = "at-least";
  bool no_precondition = false;
  auto* con = app.add_subcommand("contract", "Random contraction down to chain length alpha");
  con->add_option("--in", in_path, "Code JSON")->required();
  con->add_option("--alpha", alpha, "Target chain length")->required();
  con->add_option("--seed", seed, "Seed");
  con->add_option("--trials", trials, "Independent contractions");
  con->add_option("--target", target, "Word whose return frequency is estimated");
  auto* stop_opt = con->add_option("--stop", stop, "at-least (stop once CL < alpha) or above (once CL <= alpha)");
  con->add_flag("--no-precondition", no_precondition, "Skip the weight(target) <= alpha phi check");
  con->add_option("--budget", budget, "Node budget");
  con->callback([&] {
    if (!target.empty() && stop_opt->count() == 0) stop = "above";
    config = Json{{"in", in_path},   {"alpha", alpha}, {"seed", seed},
                  {"trials", trials}, {"stop", stop},   {"target", target.empty() ? Json(nullptr) : Json(target)},
                  {"check_precondition", !no_precondition}, {"budget", budget}};
    action = [&] {
      const Code code = load_code(in_path);
      if (trials == 0) throw InputError("--trials must be positive");
      Outcome o;
      if (!target.empty()) {
        const BitVector t = BitVector::from_string(target);
        if (t.size() != code.m()) throw InputError("target length does not match the code");
        SurvivalOptions opts;
        opts.stop = parse_stop(stop);
        opts.check_precondition = !no_precondition;
        opts.budget = budget;
        const auto e = survival_probability_experiment(code, t, alpha, trials, seed, opts);
        o.result = io::to_json(e);
        o.pass = e.passes;
        o.summary = "return frequency " + std::to_string(e.probability) + " vs bound " +
                    std::to_string(e.lower_bound);
        return o;
      }
      ContractOptions opts;
      opts.stop = parse_stop(stop);
      opts.budget = budget;
      if (trials == 1) {
        Rng rng = make_rng(seed, "contract", 0);
        o.result = Json{{"trace", io::to_json(contract(code, alpha, rng, opts))}};
        o.summary = "one contraction traced";
        return o;
      }
      std::map<std::string, std::size_t> counts;
      std::size_t emptied = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(seed, "contract", t);
        const auto trace = contract(code, alpha, rng, opts);
        if (trace.returned) {
          ++counts[trace.returned->to_string()];
        } else {
          ++emptied;
        }
      }
      Json freq = Json::object();
      for (const auto& [word, c] : counts) {
        freq[word] = Json{{"count", c}, {"frequency", static_cast<double>(c) / static_cast<double>(trials)}};
      }
      o.result = Json{{"trials", trials}, {"emptied", emptied}, {"frequencies", freq}};
      o.summary = std::to_string(counts.size()) + " distinct words returned";
      return o;
    };
  });

  // ---- sparsifiers ----
  SparsifyOptions sp;
  WeightedOptions wopt;
  std::string weights_path, out_path;

  auto write_weights = [&](const WeightVector& w, Outcome& o) {
    if (out_path.empty()) {
      o.result["weights"] = io::to_json(w);
    } else {
      io::write_json_file(out_path, io::to_json(w));
    }
  };

  auto* spz = app.add_subcommand("sparsify", "Sparsify an unweighted code");
  spz->add_option("--in", in_path, "Code JSON")->required();
  spz->add_option("--out", out_path, "Write the sparsifier weights here");
  sp.add_to(spz);
  spz->callback([&] {
    config = sp.config();
    config["in"] = in_path;
    config["out"] = out_path.empty() ? Json(nullptr) : Json(out_path);
    action = [&] {
      const Code code = load_code(in_path);
      const auto r = sparsify_unweighted(code, sp.params());
      Outcome o;
      o.result = io::to_json(r.report);
      write_weights(r.weights, o);
      o.pass = r.report.verification.pass;
      o.summary = "support " + std::to_string(r.report.input_support) + " -> " +
                  std::to_string(r.report.output_support);
      return o;
    };
  });

  auto* spw = app.add_subcommand("sparsify-weighted", "Sparsify a weighted code by weight groups");
  auto* spd = app.add_subcommand("sparsify-dimfree", "Iterated weighted sparsification");
  for (auto* sub : {spw, spd}) {
    sub->add_option("--in", in_path, "Code JSON")->required();
    sub->add_option("--weights", weights_path, "Weight vector JSON (default all ones)");
    sub->add_option("--out", out_path, "Write the sparsifier weights here");
    sp.add_to(sub);
    wopt.add_to(sub);
  }
  auto weighted_config = [&] {
    config = sp.config();
    wopt.echo(config);
    config["in"] = in_path;
    config["weights"] = weights_path.empty() ? Json(nullptr) : Json(weights_path);
    config["out"] = out_path.empty() ? Json(nullptr) : Json(out_path);
  };
  auto load_inputs = [&] {
    Code code = load_code(in_path);
    WeightVector w = weights_path.empty() ? WeightVector::uniform(code.m()) : load_weights(weights_path, code.m());
    return std::pair{std::move(code), std::move(w)};
  };
  spw->callback([&] {
    weighted_config();
    action = [&] {
      const auto [code, w] = load_inputs();
      const auto params = wopt.params(sp.params());
      const auto r = sparsify_weighted(code, w, sp.epsilon, params);
      Outcome o;
      o.result = io::to_json(r.report);
      write_weights(r.weights, o);
      o.pass = r.report.verification.pass;
      o.summary = "support " + std::to_string(w.support_size()) + " -> " +
                  std::to_string(r.report.output_support);
      return o;
    };
  });
  spd->callback([&] {
    weighted_config();
    action = [&] {
      const auto [code, w] = load_inputs();
      const auto params = wopt.params(sp.params());
      const auto r = sparsify_dimension_free(code, w, sp.epsilon, params);
      Outcome o;
      o.result = io::to_json(r.report);
      write_weights(r.weights, o);
      o.pass = r.report.verification.pass;
      o.summary = "support " + std::to_string(r.report.input_support) + " -> " +
                  std::to_string(r.report.output_support) + " in " +
                  std::to_string(r.report.passes.size()) + " passes";
      return o;
    };
  });

  // ---- verification ----
  double epsilon = 0.5;
  std::string w_path, wt_path, from_report;
  std::size_t sample = 0;
  auto* ver = app.add_subcommand("verify", "Check a sparsifier against every word");
  ver->add_option("--eps", epsilon, "Accuracy");
  ver->add_option("--code", in_path, "Code JSON");
  ver->add_option("--w", w_path, "Original weights (default all ones)");
  ver->add_option("--wt", wt_path, "Sparsifier weights");
  ver->add_option("--from-report", from_report, "Re-check the output of a sparsify report");
  ver->add_option("--sample", sample, "Check this many sampled words instead of all");
  ver->add_option("--seed", seed, "Seed of the word sample");
  ver->callback([&] {
    config = Json{{"eps", epsilon},
                  {"code", in_path},
                  {"w", w_path.empty() ? Json(nullptr) : Json(w_path)},
                  {"wt", wt_path},
                  {"from_report", from_report.empty() ? Json(nullptr) : Json(from_report)},
                  {"sample", sample},
                  {"seed", seed}};
    action = [&] {
      std::optional<bool> recorded;
      if (!from_report.empty()) {
        const Json rep = io::read_json_file(from_report);
        try {
          const Json& c = rep.at("config");
          in_path = c.at("in").get<std::string>();
          epsilon = c.at("epsilon").get<double>();
          if (c.contains("weights") && !c.at("weights").is_null()) w_path = c.at("weights").get<std::string>();
          if (c.at("out").is_null()) throw InputError(from_report + " has no weights file (run with --out)");
          wt_path = c.at("out").get<std::string>();
          recorded = rep.at("pass").get<bool>();
        } catch (const Json::exception& e) {
          throw InputError(from_report + ": not a sparsifier report: " + e.what());
        }
      }
      if (in_path.empty() || wt_path.empty()) throw InputError("verify needs --code and --wt, or --from-report");
      config["eps"] = epsilon;
      config["code"] = in_path;
      config["w"] = w_path.empty() ? Json(nullptr) : Json(w_path);
      config["wt"] = wt_path;
      const Code code = load_code(in_path);
      const WeightVector w = w_path.empty() ? WeightVector::uniform(code.m()) : load_weights(w_path, code.m());
      const WeightVector wt = load_weights(wt_path, code.m());
      const auto rep = sample > 0 ? verify_sparsifier_sampled(code, w, wt, epsilon, sample, seed)
                                  : verify_sparsifier(code, w, wt, epsilon);
      Outcome o;
      o.result = io::to_json(rep);
      if (recorded) o.result["recorded_pass"] = *recorded;
      o.pass = rep.pass;
      o.summary = std::string(rep.pass ? "pass" : "FAIL") + ", max deviation " +
                  std::to_string(rep.max_deviation());
      return o;
    };
  });

  double audit_d = 0.0;
  std::size_t alpha_max = 0;
  auto* aud = app.add_subcommand("audit-counting", "Count light words against the counting bound");
  aud->add_option("--in", in_path, "Code JSON")->required();
  auto* aud_d = aud->add_option("--d", audit_d, "Density threshold (default: the code's density)");
  auto* aud_cl = aud->add_option("--cl-bound", cl_bound, "Chain length (default: exact)");
  auto* aud_alpha = aud->add_option("--alpha-max", alpha_max, "Largest alpha (default: CL)");
  aud->add_option("--budget", budget, "Node budget");
  aud->callback([&] {
    config = Json{{"in", in_path},
                  {"d", null_if_unset(aud_d, audit_d)},
                  {"cl_bound", null_if_unset(aud_cl, cl_bound)},
                  {"alpha_max", null_if_unset(aud_alpha, alpha_max)},
                  {"budget", budget}};
    action = [&] {
      const Code code = load_code(in_path);
      const std::size_t c = aud_cl->count() > 0 ? cl_bound : chain_length_exact(code, budget).value;
      double d = audit_d;
      if (aud_d->count() == 0) {
        const auto mode = code.nonzero_count() <= kExactSubcodeLimit ? DensityMode::kExact : DensityMode::kHeuristic;
        d = density(code, mode).phi;
      }
      const auto audit = counting_bound_audit(code, c, d, aud_alpha->count() > 0 ? alpha_max : c);
      Outcome o;
      o.result = io::to_json(audit);
      o.result["chain_length"] = c;
      o.result["d"] = d;
      o.pass = audit.pass;
      o.summary = std::string(audit.pass ? "pass" : "FAIL") + " over " + std::to_string(audit.rows.size()) + " alphas";
      return o;
    };
  });

  std::size_t ell = 1000;
  double prob = 0.5;
  std::size_t mc_trials = 100000;
  auto* mc = app.add_subcommand("mc-concentration", "Monte Carlo check of the subsampling tail bound");
  mc->add_option("--ell", ell, "Number of summands");
  mc->add_option("--p", prob, "Keep probability");
  mc->add_option("--eps", epsilon, "Relative deviation");
  mc->add_option("--trials", mc_trials, "Trials");
  mc->add_option("--seed", seed, "Seed");
  mc->callback([&] {
    config = Json{{"ell", ell}, {"p", prob}, {"eps", epsilon}, {"trials", mc_trials}, {"seed", seed}};
    action = [&] {
      const auto e = concentration_monte_carlo(ell, prob, epsilon, mc_trials, seed);
      Outcome o;
      o.result = io::to_json(e);
      o.pass = e.pass;
      o.summary = "failure rate " + std::to_string(e.rate) + " vs bound " + std::to_string(e.bound);
      return o;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  std::string sub;
  for (const auto* s : app.get_subcommands()) sub = s->get_name();
  try {
    const std::size_t threads = resolve_threads(threads_flag);
    Outcome o = action();
    if (!o.summary.empty()) err << sub << ": " << o.summary << '\n';
    if (raw_output) {
      if (gen_out.empty()) {
        out << o.result.dump(2) << '\n';
      } else {
        io::write_json_file(gen_out, o.result);
      }
      return kExitOk;
    }
    config["threads"] = threads;
    Json report{{"command", sub}, {"timestamp", utc_timestamp()}, {"config", config}, {"pass", o.pass}};
    for (auto& [k, v] : o.result.items()) report[k] = v;
    if (report_path.empty()) {
      out << report.dump(2) << '\n';
    } else {
      io::write_json_file(report_path, report);
    }
    return o.pass ? kExitOk : kExitFail;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InexactError& e) {
    err << "budget exhausted: " << e.what() << " (lower bound " << e.lower_bound() << ")\n";
    return kExitExhausted;
  } catch (const SamplingFailure& e) {
    err << "sampling failed: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const StagnationError& e) {
    err << "no progress: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const CertificateViolation& e) {
    err << "certificate violated: " << e.what() << '\n';
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace chainsparse::cli
