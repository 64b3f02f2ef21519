#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sovc/data/types.hpp"
#include "sovc/model/checkpoint.hpp"
#include "sovc/runner/config.hpp"

namespace sovc::runner {

struct CaptionRequest {
  std::string video_id;
  int frame_index = 0;
  data::BBox bbox;
  std::optional<sampler::Strategy> strategy;  // defaults to the config's
  std::optional<std::uint64_t> seed;
};

struct CaptionResponse {
  std::string caption;
  std::vector<int> sampled_frame_indices;
  std::string subject_crop_ref;  // "<video_id>/frames/<i>#xywh=x,y,w,h"
  std::string model_id;
};

/// Throws ParseError / ValidationError naming the offending field.
CaptionRequest caption_request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CaptionResponse& r);

/// Rejects an unknown video, an out-of-range frame index or a bbox outside the frame.
void validate_request(const data::Dataset& ds, const CaptionRequest& req);

/// Samples frames, encodes and decodes greedily (or with cfg beam width).
CaptionResponse caption(const data::Dataset& ds, const model::Checkpoint& ckpt, const RunConfig& cfg,
                        const CaptionRequest& req);

/// Runs cfg.train.steps updates in total (a resumed run continues from the
/// stored optimizer step). Writes the checkpoint every cfg.checkpoint_every
/// steps and at the end, and appends {step, loss, lr} lines to the log. On a
/// non-finite loss the last good state is saved before DivergenceError
/// propagates.
struct TrainSummary {
  long steps = 0;  // optimizer step after training
  double final_loss = 0;
  std::size_t examples = 0;
  std::size_t parameters = 0;
};
TrainSummary cmd_train(const RunConfig& cfg);

nlohmann::json cmd_caption(const RunConfig& cfg, const CaptionRequest& req);

/// One prediction per subject sample (first region), as JSON lines {id, caption}.
std::vector<nlohmann::json> cmd_predict(const RunConfig& cfg);

nlohmann::json cmd_eval(const std::filesystem::path& dataset, const std::filesystem::path& preds);

nlohmann::json cmd_sample(const RunConfig& cfg, const std::string& video_id, const std::string& subject_id);

nlohmann::json cmd_stats(const RunConfig& cfg);

/// Annotates a draft dataset and writes the merged dataset to `out`. Returns the merge report.
nlohmann::json cmd_annotate(const std::filesystem::path& draft, const std::filesystem::path& detections,
                            const std::filesystem::path& corrections, const std::filesystem::path& out);

/// Parses arguments (without the program name) and runs one subcommand.
/// Returns 0 on success, 1 on an internal error, 2 on an input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sovc::runner
