#pragma once

#include <cstdint>

#include <json.hpp>

namespace sovc::model {

struct ModelConfig {
  int patch_size = 8;        // P
  int d_model = 128;
  int encoder_layers = 2;
  int decoder_layers = 2;
  int heads = 4;
  int num_soft_tokens = 5;   // K
  int subject_grid = 2;      // g; g*g hard-prompt tokens
  int frame_side = 32;       // R
  int max_caption_len = 20;
  int num_frames = 8;        // T

  /// Throws ValidationError naming the offending field.
  void validate() const;

  int patches_per_frame() const { return (frame_side / patch_size) * (frame_side / patch_size); }
  int num_hard_tokens() const { return subject_grid * subject_grid; }
  int num_frame_tokens() const { return num_frames * patches_per_frame(); }
  int sequence_length() const { return num_hard_tokens() + num_frame_tokens() + num_soft_tokens; }
};

struct TrainConfig {
  int batch_size = 16;
  double learning_rate = 7.5e-5;
  int steps = 500;
  std::uint64_t seed = 7;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.01;  // decoupled; not applied to biases, norms or prompts

  void validate() const;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

}  // namespace sovc::model
