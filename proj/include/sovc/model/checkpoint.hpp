#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "sovc/model/caption_model.hpp"
#include "sovc/model/train.hpp"

namespace sovc::model {

// Big-endian layout: "SOVC", u32 version, u32 n + n bytes of ModelConfig JSON,
// u32 n + n bytes of metadata JSON (vocabulary, optimizer step), u32 tensor
// count, then per tensor: u32 name length, name, u32 rank, u32 dims, f32
// row-major payload. Optimizer moments are stored as "adam.m/<param>" and
// "adam.v/<param>".
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  CaptionModel model;
  std::optional<AdamState> optimizer;
  std::string model_id;  // derived from the file contents
};

/// Writes to a temporary sibling and renames, so a crash never leaves a torn file.
void save_checkpoint(const std::filesystem::path& path, const CaptionModel& m, const AdamState* opt = nullptr);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sovc::model
