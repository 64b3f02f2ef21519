#pragma once

#include <string>
#include <vector>

#include "sovc/data/frames.hpp"
#include "sovc/data/types.hpp"
#include "sovc/model/caption_model.hpp"
#include "sovc/sampler/sampler.hpp"

namespace sovc::runner {

/// Vocabulary over every caption of the (training) dataset.
model::Vocabulary build_vocabulary(const data::Dataset& ds, int min_freq = 2);

struct PreparedInput {
  model::Example example;       // tokens left empty
  std::vector<int> frame_indices;  // sorted sampler output
};

/// Samples T = model.num_frames frames with the subject crop as the query,
/// resizes them to R x R and scales to [0, 1]. The sampler seed is mixed with
/// `stream` (the video id), so a caption request with the training seed sees
/// the frames the model was trained on.
PreparedInput prepare_input(const data::FrameTensor& frames, const data::SubjectRegion& region,
                            const sampler::SamplerConfig& sampler_cfg, const model::ModelConfig& model_cfg,
                            const std::string& stream);

struct TrainingSet {
  std::vector<model::Example> examples;  // one per caption
  std::vector<std::string> keys;         // "<video_id>/<subject_id>" per example
  std::vector<std::string> captions;     // raw caption per example
};

/// The subject's first region supplies the crop. Subjects without regions or
/// captions are skipped.
TrainingSet prepare_training_set(const data::Dataset& ds, const sampler::SamplerConfig& sampler_cfg,
                                 const model::ModelConfig& model_cfg, const model::Vocabulary& vocab);

}  // namespace sovc::runner
