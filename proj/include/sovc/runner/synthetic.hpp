#pragma once

#include <filesystem>

#include "sovc/data/types.hpp"

namespace sovc::runner {

struct SyntheticOptions {
  int num_videos = 8;  // at most 8: every (colour, motion) pair is used once
  int num_frames = 16;
  int side = 32;
};

// Each video shows two coloured squares on a dark background: one sliding
// horizontally along the bottom band, one vertically near the top. Subject
// s1 is the horizontal square, s2 the vertical one; both are boxed in frame
// 0. Captions read "the <colour> square moves <direction>", one per subject,
// and the 16 of them are pairwise distinct.
data::Dataset make_synthetic_dataset(const SyntheticOptions& opts = {});

/// Writes annotations.json and <video_id>.svf bundles into `dir`.
data::Dataset write_synthetic_dataset(const std::filesystem::path& dir, const SyntheticOptions& opts = {});

}  // namespace sovc::runner
