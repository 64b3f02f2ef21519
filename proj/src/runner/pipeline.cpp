#include "sovc/runner/pipeline.hpp"

#include "sovc/common/rng.hpp"
#include "sovc/common/text.hpp"
#include "sovc/data/frames.hpp"
#include "sovc/metrics/report.hpp"

namespace sovc::runner {

model::Vocabulary build_vocabulary(const data::Dataset& ds, int min_freq) {
  std::vector<std::vector<std::string>> caps;
  for (const auto& v : ds.videos)
    for (const auto& s : v.subjects)
      for (const auto& c : s.captions) caps.push_back(tokenize_caption(c));
  return model::Vocabulary::build(caps, min_freq);
}

PreparedInput prepare_input(const data::FrameTensor& frames, const data::SubjectRegion& region,
                            const sampler::SamplerConfig& sampler_cfg, const model::ModelConfig& model_cfg,
                            const std::string& stream) {
  auto crop = data::crop_subject(frames, region);
  sampler::ToyExtractor extractor;
  auto features = sampler::extract_frame_features(frames, crop, extractor);
  auto cfg = sampler_cfg;
  cfg.num_frames = model_cfg.num_frames;
  cfg.seed = derive_seed(sampler_cfg.seed, stream);
  auto picked = sampler::sample_frames(features, cfg);

  PreparedInput out;
  out.frame_indices = picked.indices;
  for (int i : picked.indices)
    out.example.frames.push_back(model::resize_bilinear(model::to_real(frames[static_cast<std::size_t>(i)]),
                                                        model_cfg.frame_side, model_cfg.frame_side));
  out.example.crop = model::to_real(crop);
  return out;
}

TrainingSet prepare_training_set(const data::Dataset& ds, const sampler::SamplerConfig& sampler_cfg,
                                 const model::ModelConfig& model_cfg, const model::Vocabulary& vocab) {
  TrainingSet out;
  for (const auto& v : ds.videos) {
    data::FrameTensor frames;
    bool loaded = false;
    for (const auto& s : v.subjects) {
      if (s.regions.empty() || s.captions.empty()) continue;
      if (!loaded) {
        frames = data::load_frames(ds, v);
        loaded = true;
      }
      auto key = metrics::sample_key(v.video_id, s.subject_id);
      auto in = prepare_input(frames, s.regions.front(), sampler_cfg, model_cfg, v.video_id);
      for (const auto& c : s.captions) {
        auto ex = in.example;
        ex.tokens = vocab.encode(tokenize_caption(c), model_cfg.max_caption_len);
        out.examples.push_back(std::move(ex));
        out.keys.push_back(key);
        out.captions.push_back(c);
      }
    }
  }
  return out;
}

}  // namespace sovc::runner
