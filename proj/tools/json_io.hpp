#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "chainsparse/chain_metrics.hpp"
#include "chainsparse/code.hpp"
#include "chainsparse/contraction.hpp"
#include "chainsparse/density.hpp"
#include "chainsparse/generators.hpp"
#include "chainsparse/sparsify.hpp"
#include "chainsparse/verify.hpp"
#include "chainsparse/weighted.hpp"

namespace chainsparse::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

Code code_from_json(const Json& j);
Json to_json(const Code& code);

WeightVector weights_from_json(const Json& j);
Json to_json(const WeightVector& w);

LinearCodeSpec linear_spec_from_json(const Json& j);

Json to_json(const ChainWitness& w);
Json to_json(const NrdWitness& w);
Json to_json(const DensityResult& r);
Json to_json(const CountingAudit& a);
Json to_json(const DecompositionResult& r);
Json to_json(const ContractionTrace& t);
Json to_json(const SurvivalEstimate& e);
Json to_json(const ConcentrationEstimate& e);
Json to_json(const VerificationReport& r);
Json to_json(const SparsifyReport& r);
Json to_json(const BoundedReport& r);
Json to_json(const WeightedReport& r);
Json to_json(const DimFreeReport& r);

}  // namespace chainsparse::io
