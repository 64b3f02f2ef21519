#pragma once

#include <map>
#include <string>

#include "sovc/model/caption_model.hpp"

namespace sovc::model::detail {

// One forward pass over a model's parameters. Parameters are registered on
// first use; with track = false nothing on the tape needs a gradient.
class Graph {
 public:
  Graph(const CaptionModel& m, bool track) : model_(m), track_(track) {}

  Var p(const std::string& name);
  const CaptionModel& model() const { return model_; }

  Tape tape;

 private:
  const CaptionModel& model_;
  bool track_;
  std::map<std::string, Var> cache_;
};

/// (num frames * patches per frame) x 3P^2 matrix of flattened patches.
Matrix flatten_patches(const std::vector<RealImage>& frames, int side, int patch);

Var linear(Graph& g, Var x, const std::string& prefix);  // prefix.w, prefix.b
Var patch_tokens(Graph& g, const Matrix& patches);
Var hard_prompt(Graph& g, const RealImage& crop);
Var encoder_input(Graph& g, Var frame_tokens, Var hard_tokens, TokenSequence* layout);
Var encoder(Graph& g, Var x);
Var subject_token(Graph& g, const RealImage& crop);
Var decoder(Graph& g, Var memory, const std::vector<int>& prefix);

/// Summed token cross-entropy of one example; *count receives the number of
/// scored (non-PAD) targets. Returns an empty Var when that number is zero.
Var example_loss(Graph& g, const Example& ex, int* count);

}  // namespace sovc::model::detail
