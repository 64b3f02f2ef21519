#include "sovc/model/config.hpp"

#include <string>

#include "sovc/common/error.hpp"

namespace sovc::model {

using nlohmann::json;

namespace {

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError("model config: " + field + " " + what, field);
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field '") + key + "': " + e.what(), key);
  }
}

}  // namespace

void ModelConfig::validate() const {
  check(patch_size > 0, "patch_size", "must be positive");
  check(d_model > 0, "d_model", "must be positive");
  check(heads > 0 && d_model % heads == 0, "heads", "must divide d_model");
  check(encoder_layers >= 0, "encoder_layers", "must be >= 0");
  check(decoder_layers >= 1, "decoder_layers", "must be >= 1");
  check(num_soft_tokens >= 0, "num_soft_tokens", "must be >= 0");
  check(subject_grid >= 1, "subject_grid", "must be >= 1");
  check(frame_side >= 4 && frame_side % patch_size == 0, "frame_side", "must be >= 4 and divisible by patch_size");
  check(max_caption_len >= 1, "max_caption_len", "must be >= 1");
  check(num_frames >= 1, "num_frames", "must be >= 1");
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ValidationError("train config: batch_size must be >= 1", "batch_size");
  if (!(learning_rate > 0)) throw ValidationError("train config: learning_rate must be > 0", "learning_rate");
  if (steps < 0) throw ValidationError("train config: steps must be >= 0", "steps");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1))
    throw ValidationError("train config: betas must lie in [0, 1)", "beta1");
}

void to_json(json& j, const ModelConfig& c) {
  j = {{"patch_size", c.patch_size},       {"d_model", c.d_model},
       {"encoder_layers", c.encoder_layers}, {"decoder_layers", c.decoder_layers},
       {"heads", c.heads},                 {"num_soft_tokens", c.num_soft_tokens},
       {"subject_grid", c.subject_grid},   {"frame_side", c.frame_side},
       {"max_caption_len", c.max_caption_len}, {"num_frames", c.num_frames}};
}

void from_json(const json& j, ModelConfig& c) {
  if (!j.is_object()) throw ParseError("model config must be a JSON object");
  read_opt(j, "patch_size", c.patch_size);
  read_opt(j, "d_model", c.d_model);
  read_opt(j, "encoder_layers", c.encoder_layers);
  read_opt(j, "decoder_layers", c.decoder_layers);
  read_opt(j, "heads", c.heads);
  read_opt(j, "num_soft_tokens", c.num_soft_tokens);
  read_opt(j, "subject_grid", c.subject_grid);
  read_opt(j, "frame_side", c.frame_side);
  read_opt(j, "max_caption_len", c.max_caption_len);
  read_opt(j, "num_frames", c.num_frames);
}

void to_json(json& j, const TrainConfig& c) {
  j = {{"batch_size", c.batch_size}, {"learning_rate", c.learning_rate},
       {"steps", c.steps},           {"seed", c.seed},
       {"beta1", c.beta1},           {"beta2", c.beta2},
       {"adam_eps", c.adam_eps},     {"weight_decay", c.weight_decay}};
}

void from_json(const json& j, TrainConfig& c) {
  if (!j.is_object()) throw ParseError("train config must be a JSON object");
  read_opt(j, "batch_size", c.batch_size);
  read_opt(j, "learning_rate", c.learning_rate);
  read_opt(j, "steps", c.steps);
  read_opt(j, "seed", c.seed);
  read_opt(j, "beta1", c.beta1);
  read_opt(j, "beta2", c.beta2);
  read_opt(j, "adam_eps", c.adam_eps);
  read_opt(j, "weight_decay", c.weight_decay);
}

}  // namespace sovc::model
