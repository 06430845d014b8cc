#include "json_io.hpp"

#include <cmath>
#include <fstream>

#include "chainsparse/errors.hpp"

namespace chainsparse::io {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InputError(std::string("missing field \"") + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad field \"") + name + "\": " + e.what());
  }
}

// JSON has no infinity; non-finite values become null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Code code_from_json(const Json& j) {
  const auto m = field<std::size_t>(j, "m");
  const auto strings = field<std::vector<std::string>>(j, "words");
  std::vector<BitVector> words;
  words.reserve(strings.size());
  for (const auto& s : strings) {
    if (s.size() != m) {
      throw InputError("word \"" + s + "\" has length " + std::to_string(s.size()) + ", expected " +
                       std::to_string(m));
    }
    words.push_back(BitVector::from_string(s));
  }
  return Code(m, std::move(words));
}

Json to_json(const Code& code) {
  return Json{{"m", code.m()}, {"words", code.to_strings()}};
}

WeightVector weights_from_json(const Json& j) {
  const auto m = field<std::size_t>(j, "m");
  auto values = field<std::vector<double>>(j, "weights");
  if (values.size() != m) throw InputError("weights array length does not match m");
  return WeightVector(std::move(values));
}

Json to_json(const WeightVector& w) { return Json{{"m", w.m()}, {"weights", w.values()}}; }

LinearCodeSpec linear_spec_from_json(const Json& j) {
  LinearCodeSpec spec;
  spec.q = field<unsigned>(j, "q");
  spec.rows = field<std::vector<std::vector<unsigned>>>(j, "rows");
  return spec;
}

Json to_json(const ChainWitness& w) {
  return Json{{"length", w.length()}, {"coordinates", w.coordinates}, {"words", w.words}};
}

Json to_json(const NrdWitness& w) {
  return Json{{"size", w.coordinates.size()}, {"coordinates", w.coordinates}, {"words", w.words}};
}

Json to_json(const DensityResult& r) {
  return Json{{"phi", r.phi},
              {"exact", r.exact},
              {"support_size", r.support_size},
              {"chain_length", r.chain_length},
              {"witness", r.witness}};
}

Json to_json(const CountingAudit& a) {
  Json rows = Json::array();
  for (const auto& r : a.rows) {
    rows.push_back(Json{{"alpha", r.alpha},
                        {"threshold", r.threshold},
                        {"count", r.count},
                        {"bound", number(static_cast<double>(r.bound))},
                        {"pass", r.pass}});
  }
  return Json{{"pass", a.pass}, {"rows", rows}};
}

Json to_json(const DecompositionResult& r) {
  Json rounds = Json::array();
  for (const auto& round : r.rounds) {
    std::vector<std::string> words;
    for (const auto& w : round.words) words.push_back(w.to_string());
    rounds.push_back(Json{{"coordinates", round.coordinates},
                          {"words", words},
                          {"support_size", round.support_size},
                          {"chain_length", round.chain_length},
                          {"density", round.density}});
  }
  return Json{{"d", r.d},
              {"mode", r.mode == DensityMode::kExact ? "exact" : "heuristic"},
              {"chain_length", r.chain_length},
              {"peeled", r.peeled},
              {"peeled_size", r.peeled_size},
              {"size_cap", static_cast<double>(r.chain_length) * r.d},
              {"peel_code", to_json(r.peel_code)},
              {"remaining_code", to_json(r.remaining_code)},
              {"remaining_coordinates", r.kept},
              {"rounds", rounds},
              {"counting_audit", to_json(r.audit)}};
}

Json to_json(const ContractionTrace& t) {
  return Json{{"alpha", t.alpha},
              {"picked", t.picked},
              {"sizes", t.sizes},
              {"chain_lengths", t.chain_lengths},
              {"returned", t.returned ? Json(t.returned->to_string()) : Json(nullptr)}};
}

Json to_json(const SurvivalEstimate& e) {
  return Json{{"trials", e.trials},       {"hits", e.hits},   {"probability", e.probability},
              {"lower_bound", e.lower_bound}, {"sigma", e.sigma}, {"pass", e.passes}};
}

Json to_json(const ConcentrationEstimate& e) {
  return Json{{"trials", e.trials}, {"failures", e.failures}, {"rate", e.rate},
              {"bound", e.bound},   {"sigma", e.sigma},       {"pass", e.pass}};
}

Json to_json(const VerificationReport& r) {
  Json j{{"mode", r.mode == VerificationMode::kExhaustive ? "exhaustive" : "sampled"},
         {"epsilon", r.epsilon},
         {"words_checked", r.words_checked},
         {"max_over", number(r.max_over)},
         {"max_under", number(r.max_under)},
         {"worst_word", r.worst_word ? Json(*r.worst_word) : Json(nullptr)},
         {"pass", r.pass}};
  if (r.mode == VerificationMode::kSampled) j["sample_seed"] = r.sample_seed;
  return j;
}

Json to_json(const SparsifyReport& r) {
  Json nodes = Json::array();
  for (const auto& n : r.nodes) {
    nodes.push_back(Json{{"path", n.path},
                         {"depth", n.depth},
                         {"m_prime", n.support},
                         {"cl_bound", n.cl_bound},
                         {"d", n.d},
                         {"peeled", n.peeled},
                         {"sampled", n.sampled},
                         {"attempts", n.attempts},
                         {"p", n.p},
                         {"level_eps", n.level_eps},
                         {"max_error", n.max_error},
                         {"multiplier", n.multiplier},
                         {"size_bound", n.size_bound},
                         {"leaf", n.leaf.empty() ? Json(nullptr) : Json(n.leaf)}});
  }
  return Json{{"epsilon", r.epsilon},
              {"mode", r.mode == SparsifyMode::kTheory ? "theory" : "practical"},
              {"seed", r.seed},
              {"eta_constant", r.eta_constant},
              {"denom_constant", r.denom_constant},
              {"eta", r.eta},
              {"level_eps", r.level_eps},
              {"composed_eps", r.composed_eps},
              {"max_depth", r.max_depth},
              {"m", r.m},
              {"root_cl", r.root_cl},
              {"input_support", r.input_support},
              {"output_support", r.output_support},
              {"leaves", r.leaves},
              {"restarts", r.restarts},
              {"nodes", nodes},
              {"verification", to_json(r.verification)}};
}

Json to_json(const BoundedReport& r) {
  Json j{{"epsilon", r.epsilon},
         {"shortcut", r.shortcut.empty() ? Json(nullptr) : Json(r.shortcut)},
         {"m_effective", r.m_effective},
         {"min_weight", r.min_weight},
         {"m_tilde", r.m_tilde},
         {"output_support", r.output_support},
         {"verification", to_json(r.verification)}};
  if (r.shortcut.empty()) j["sparsify"] = to_json(r.inner);
  return j;
}

Json to_json(const WeightedReport& r) {
  Json groups = Json::array();
  for (const auto& g : r.groups) {
    groups.push_back(Json{{"t", g.t},
                          {"size", g.size},
                          {"words", g.words},
                          {"proper", g.proper},
                          {"output_support", g.output_support},
                          {"max_normalized_weight", g.max_normalized_weight},
                          {"within_cap", g.within_cap},
                          {"bounded", g.bounded ? to_json(*g.bounded) : Json(nullptr)}});
  }
  return Json{{"epsilon", r.epsilon},
              {"shortcut", r.shortcut.empty() ? Json(nullptr) : Json(r.shortcut)},
              {"m_effective", r.m_effective},
              {"min_weight", r.min_weight},
              {"groups", groups},
              {"output_support", r.output_support},
              {"verification", to_json(r.verification)}};
}

Json to_json(const DimFreeReport& r) {
  Json passes = Json::array();
  for (const auto& p : r.passes) {
    passes.push_back(Json{{"case", p.kind},
                          {"epsilon", p.epsilon},
                          {"support_before", p.support_before},
                          {"support_after", p.support_after},
                          {"log6_bound", p.log6_bound},
                          {"report", to_json(p.report)}});
  }
  return Json{{"epsilon", r.epsilon},
              {"q_constant", r.q_constant},
              {"cl_bound", r.cl_bound},
              {"log2_threshold", r.log2_threshold},
              {"iteration_cap", r.iteration_cap},
              {"stopped_without_progress", r.stopped_without_progress},
              {"composed_eps", r.composed_eps},
              {"composed_within_eps", r.composed_within_eps},
              {"input_support", r.input_support},
              {"output_support", r.output_support},
              {"passes", passes},
              {"verification", to_json(r.verification)}};
}

}  // namespace chainsparse::io
