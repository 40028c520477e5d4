#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "graphomic/eval/pipeline.hpp"
#include "graphomic/eval/sweep.hpp"
#include "graphomic/synthgen.hpp"

namespace graphomic::io {

using Json = nlohmann::json;

/// Parses a file; syntax errors become ConfigError.
Json load_json(const std::filesystem::path& path);
Json parse_json(const std::string& text);
/// Sorted keys, two-space indent, trailing newline.
std::string canonical_text(const Json& j);
void save_json(const std::filesystem::path& path, const Json& j);

// Every *_from_json rejects unknown keys and wrong types with ConfigError and
// fills omitted optional keys with their defaults. The matching to_json
// writes every key, so to_json(from_json(j)) is a fixed point.

Json to_json(const SynthConfig& cfg);
SynthConfig synth_config_from_json(const Json& j);

Json to_json(const nn::Regularizer& reg);
nn::Regularizer regularizer_from_json(const Json& j, nn::Regularizer defaults);

Json to_json(const VaeSpec& spec);
VaeSpec vae_spec_from_json(const Json& j);

Json to_json(const GraphModelSpec& spec);
GraphModelSpec graph_model_spec_from_json(const Json& j);

Json to_json(const GraphParams& params);
GraphParams graph_params_from_json(const Json& j);

Json to_json(const PipelineConfig& cfg);
/// "seed" is mandatory unless `require_seed` is false.
PipelineConfig pipeline_config_from_json(const Json& j, bool require_seed = true);

Json to_json(const SweepConfig& cfg);
SweepConfig sweep_config_from_json(const Json& j);

}  // namespace graphomic::io
