#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sovc/model/caption_model.hpp"

namespace sovc::model {

struct AdamState {
  long step = 0;
  std::map<std::string, Matrix> m;
  std::map<std::string, Matrix> v;
};

struct LossAndGrads {
  double loss = 0;  // mean over scored tokens of the batch
  int tokens = 0;
  std::map<std::string, Matrix> grads;
};

/// Mean token cross-entropy over the batch with PAD targets masked. Throws
/// ContractError when the batch has no scored token.
double batch_loss(const CaptionModel& m, std::span<const Example> batch);
LossAndGrads loss_and_grads(const CaptionModel& m, std::span<const Example> batch);

/// One AdamW update; returns the loss measured before the update. Throws
/// DivergenceError (leaving the model untouched) on a non-finite loss or gradient.
double train_step(CaptionModel& m, AdamState& opt, std::span<const Example> batch, const TrainConfig& cfg);

/// Only weight matrices (last name segment starting with 'w') are decayed.
bool decays(const std::string& name);

struct TrainLogEntry {
  long step;
  double loss;
  double lr;
};

/// Runs cfg.steps updates. Batches are drawn without replacement from a
/// permutation reshuffled every epoch (SplitMix64 seeded with cfg.seed and
/// the epoch number). The callback sees every step.
void train(CaptionModel& m, AdamState& opt, std::span<const Example> data, const TrainConfig& cfg,
           const std::function<void(const TrainLogEntry&)>& on_step = {});

/// Indices of the batch used at `step` (0-based).
std::vector<std::size_t> batch_indices(std::size_t n, int batch_size, long step, std::uint64_t seed);

struct GradcheckResult {
  double max_rel_error = 0;
  std::string worst_param;
  std::map<std::string, double> per_param;
  std::size_t entries_checked = 0;
};

/// Central differences on the example's loss for every entry of `names`.
/// Relative error per entry: |a - n| / max(|a| + |n|, 1e-8).
GradcheckResult gradcheck(const CaptionModel& m, const Example& ex, double epsilon,
                          const std::vector<std::string>& names = {"soft", "patch.w", "subj.w"});

}  // namespace sovc::model
