#include "sovc/runner/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "sovc/common/error.hpp"

extern char** environ;

namespace sovc::runner {

using nlohmann::json;

json to_json(const RunConfig& c) {
  return {{"dataset", c.dataset},
          {"checkpoint", c.checkpoint},
          {"log", c.log},
          {"min_freq", c.min_freq},
          {"resume", c.resume},
          {"checkpoint_every", c.checkpoint_every},
          {"beam_width", c.beam_width},
          {"sampler",
           {{"num_frames", c.sampler.num_frames},
            {"seed", c.sampler.seed},
            {"kmeans_max_iters", c.sampler.kmeans_max_iters},
            {"kmeans_inits", c.sampler.kmeans_inits},
            {"strategy", sampler::to_string(c.sampler.strategy)},
            {"min_gap", c.sampler.min_gap}}},
          {"model", json(c.model)},
          {"train", json(c.train)},
          {"service",
           {{"host", c.service.host},
            {"port", c.service.port},
            {"annotations", c.service.annotations},
            {"threads", c.service.threads}}}};
}

namespace {

void reject_unknown(const json& given, const json& known, const std::string& prefix) {
  if (!given.is_object()) throw ValidationError("config: '" + prefix + "' must be an object", prefix);
  for (auto it = given.begin(); it != given.end(); ++it) {
    auto path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!known.contains(it.key())) throw ValidationError("config: unknown field '" + path + "'", path);
    if (known[it.key()].is_object()) reject_unknown(it.value(), known[it.key()], path);
  }
}

template <typename T>
T field(const json& j, const std::string& path) {
  const json* cur = &j;
  std::size_t start = 0;
  while (true) {
    auto dot = path.find('.', start);
    cur = &cur->at(path.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  try {
    return cur->get<T>();
  } catch (const json::exception&) {
    throw ValidationError("config: field '" + path + "' has the wrong type (" + cur->dump() + ")", path);
  }
}

}  // namespace

RunConfig run_config_from_json(const json& given) {
  const json defaults = to_json(RunConfig{});
  reject_unknown(given, defaults, "");
  json j = defaults;
  j.merge_patch(given);
  RunConfig c;
  c.dataset = field<std::string>(j, "dataset");
  c.checkpoint = field<std::string>(j, "checkpoint");
  c.log = field<std::string>(j, "log");
  c.min_freq = field<int>(j, "min_freq");
  c.resume = field<bool>(j, "resume");
  c.checkpoint_every = field<int>(j, "checkpoint_every");
  c.beam_width = field<int>(j, "beam_width");
  c.sampler.num_frames = field<int>(j, "sampler.num_frames");
  c.sampler.seed = field<std::uint64_t>(j, "sampler.seed");
  c.sampler.kmeans_max_iters = field<int>(j, "sampler.kmeans_max_iters");
  c.sampler.kmeans_inits = field<int>(j, "sampler.kmeans_inits");
  try {
    c.sampler.strategy = sampler::strategy_from_string(field<std::string>(j, "sampler.strategy"));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("config: sampler.strategy: ") + e.what(), "sampler.strategy");
  }
  c.sampler.min_gap = field<int>(j, "sampler.min_gap");
  for (const char* k : {"patch_size", "d_model", "encoder_layers", "decoder_layers", "heads", "num_soft_tokens",
                        "subject_grid", "frame_side", "max_caption_len", "num_frames"})
    field<int>(j, std::string("model.") + k);
  c.model = j.at("model").get<model::ModelConfig>();
  c.train.batch_size = field<int>(j, "train.batch_size");
  c.train.learning_rate = field<double>(j, "train.learning_rate");
  c.train.steps = field<int>(j, "train.steps");
  c.train.seed = field<std::uint64_t>(j, "train.seed");
  c.train.beta1 = field<double>(j, "train.beta1");
  c.train.beta2 = field<double>(j, "train.beta2");
  c.train.adam_eps = field<double>(j, "train.adam_eps");
  c.train.weight_decay = field<double>(j, "train.weight_decay");
  c.service.host = field<std::string>(j, "service.host");
  c.service.port = field<int>(j, "service.port");
  c.service.annotations = field<std::string>(j, "service.annotations");
  c.service.threads = field<int>(j, "service.threads");
  c.model.validate();
  c.train.validate();
  if (c.min_freq < 1) throw ValidationError("config: min_freq must be >= 1", "min_freq");
  if (c.checkpoint_every < 1) throw ValidationError("config: checkpoint_every must be >= 1", "checkpoint_every");
  if (c.sampler.kmeans_inits < 1)
    throw ValidationError("config: sampler.kmeans_inits must be >= 1", "sampler.kmeans_inits");
  if (c.beam_width < 1) throw ValidationError("config: beam_width must be >= 1", "beam_width");
  if (c.service.port < 0 || c.service.port > 65535) throw ValidationError("config: service.port out of range", "service.port");
  return c;
}

void apply_override(json& j, const std::string& dotted, const std::string& value) {
  if (dotted.empty()) throw ValidationError("empty override name");
  json* cur = &j;
  std::size_t start = 0;
  while (true) {
    auto dot = dotted.find('.', start);
    auto key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ValidationError("malformed override name '" + dotted + "'", dotted);
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*cur)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    if (!cur->contains(key) || !(*cur)[key].is_object()) (*cur)[key] = json::object();
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

RunConfig resolve_config(const std::filesystem::path& file, const std::vector<std::string>& env,
                         const std::vector<std::pair<std::string, std::string>>& overrides) {
  json j = json::object();
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open config file " + file.string(), "config");
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError("config file " + file.string() + ": " + e.what(), "config");
    }
    if (!j.is_object()) throw ParseError("config file " + file.string() + " must hold a JSON object", "config");
  }
  for (const auto& entry : env) {
    auto eq = entry.find('=');
    if (eq == std::string::npos || !entry.starts_with("SOVC_")) continue;
    std::string name = entry.substr(5, eq - 5), dotted;
    for (std::size_t i = 0; i < name.size(); ++i) {
      if (name.compare(i, 2, "__") == 0) {
        dotted += '.';
        ++i;
      } else {
        dotted += static_cast<char>(std::tolower(static_cast<unsigned char>(name[i])));
      }
    }
    // Variables that do not name a config field (e.g. dataset roots used by tests) are ignored.
    json probe = to_json(RunConfig{});
    json* cur = &probe;
    bool known = true;
    std::size_t start = 0;
    while (known) {
      auto dot = dotted.find('.', start);
      auto key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (!cur->is_object() || !cur->contains(key)) known = false;
      else cur = &(*cur)[key];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (known) apply_override(j, dotted, entry.substr(eq + 1));
  }
  for (const auto& [k, v] : overrides) apply_override(j, k, v);
  return run_config_from_json(j);
}

std::vector<std::string> sovc_environment() {
  std::vector<std::string> out;
  for (char** e = environ; e && *e; ++e)
    if (std::string_view(*e).starts_with("SOVC_")) out.emplace_back(*e);
  return out;
}

}  // namespace sovc::runner
