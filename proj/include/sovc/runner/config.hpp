#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sovc/model/config.hpp"
#include "sovc/sampler/sampler.hpp"

namespace sovc::runner {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string annotations;  // CorrectionFile used as the annotation store
  int threads = 4;
};

struct RunConfig {
  std::string dataset;
  std::string checkpoint;
  std::string log;  // training log (JSON lines); defaults to <checkpoint>.log.jsonl
  int min_freq = 2;
  bool resume = false;
  int checkpoint_every = 100;
  int beam_width = 1;  // caption decoding; 1 is greedy
  sampler::SamplerConfig sampler;
  model::ModelConfig model;
  model::TrainConfig train;
  ServiceConfig service;
};

nlohmann::json to_json(const RunConfig& c);
/// Unknown keys are rejected with a ValidationError naming the dotted path.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Sets a dotted path ("model.d_model") in `j`. The value is parsed as JSON
/// when possible and kept as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& dotted, const std::string& value);

/// Layers, lowest precedence first: defaults, the JSON config file (if any),
/// SOVC_* environment variables, then command-line overrides. Environment
/// names map "__" to "." and lowercase the rest: SOVC_MODEL__D_MODEL=64 sets
/// model.d_model.
RunConfig resolve_config(const std::filesystem::path& file, const std::vector<std::string>& env,
                         const std::vector<std::pair<std::string, std::string>>& overrides);

/// Environment entries "NAME=value" starting with SOVC_.
std::vector<std::string> sovc_environment();

}  // namespace sovc::runner
