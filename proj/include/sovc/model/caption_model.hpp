#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sovc/model/autograd.hpp"
#include "sovc/model/config.hpp"
#include "sovc/model/image_ops.hpp"
#include "sovc/model/vocab.hpp"

namespace sovc::model {

enum class TokenType { Hard = 0, Frame = 1, Soft = 2 };

struct TokenSequence {
  Matrix embeddings;  // L x d_model, types and positions already added
  std::vector<TokenType> type_tags;
  std::vector<int> positions;
};

// Parameter names:
//   patch.w (3P^2 x d), patch.b          frame and hard-prompt patch embedding
//   soft (K x d)                         soft prompt rows
//   type (3 x d)                         HARD / FRAME / SOFT type embeddings
//   enc.<l>.{ln1,ln2}.{g,b}, enc.<l>.attn.{wq,wk,wv,wo,bq,bk,bv,bo},
//   enc.<l>.ff.{w1,b1,w2,b2}, enc.ln.{g,b}  (final norm only when layers > 0)
//   subj.w (48 x d), subj.b              subject encoder
//   tok (V x d)                          decoder token embeddings
//   dec.<l>.{ln1,ln2,ln3}.{g,b}, dec.<l>.self.*, dec.<l>.cross.*, dec.<l>.ff.*
//   dec.ln.{g,b}, out.w (d x V), out.b
struct CaptionModel {
  ModelConfig config;
  Vocabulary vocab;
  std::map<std::string, Matrix> params;

  /// Each tensor draws from its own stream derive_seed(seed, name), so
  /// changing one size leaves the other tensors' initial values intact.
  static CaptionModel init(const ModelConfig& config, Vocabulary vocab, std::uint64_t seed);

  const Matrix& param(const std::string& name) const;
  std::size_t num_parameters() const;
};

/// Closed form:
///   encoder layers * (12 d^2 + 13 d) + decoder layers * (16 d^2 + 19 d)
///   + 3 P^2 d + d + K d + 3 d + [2 d if encoder layers > 0] + 48 d + d
///   + V d + 2 d + d V + V
std::size_t parameter_count(const ModelConfig& config, int vocab_size);

Matrix sinusoidal_positions(int length, int d_model);

/// Frames must already be R x R. Output rows are frame-major, row-major
/// patches within a frame; each patch is flattened as (y, x, channel).
Matrix patch_embed(const std::vector<RealImage>& frames, const CaptionModel& m);
/// Crop resized to (g P) x (g P) and embedded with the frame patch weights.
Matrix embed_subject_prompt(const RealImage& crop, const CaptionModel& m);
/// Layout [hard][frame][soft] plus type embeddings and sinusoidal positions.
TokenSequence build_encoder_input(const Matrix& frame_tokens, const Matrix& hard_tokens,
                                  const CaptionModel& m);
/// Pre-norm transformer encoder; a zero-layer encoder is the identity.
Matrix encode(const TokenSequence& seq, const CaptionModel& m);
/// Crop resized to R x R, 4x4 grid mean pooled (48 values), linear map to 1 x d.
Matrix encode_subject(const RealImage& crop, const CaptionModel& m);

/// Decoder logits (prefix length x V) with cross-attention over [vbar; subject].
Matrix decoder_logits(const Matrix& vbar, const Matrix& subject, const std::vector<int>& prefix,
                      const CaptionModel& m);

struct DecodeOptions {
  int beam_width = 1;  // 1 is greedy
  double length_alpha = 0.6;
};

struct Generation {
  std::string caption;
  std::vector<int> token_ids;  // without BOS, ending in EOS when one was emitted
  bool empty = false;          // nothing before EOS
};

/// Beam scores are normalised by ((5 + len) / 6)^alpha. PAD and BOS are never emitted.
Generation generate(const Matrix& vbar, const Matrix& subject, const CaptionModel& m,
                    const DecodeOptions& opts = {});

/// Everything one caption needs: R x R frames, the raw subject crop, token ids.
struct Example {
  std::vector<RealImage> frames;
  RealImage crop;
  std::vector<int> tokens;  // [BOS, w..., EOS, PAD...]
};

/// Encodes the example's visual side: {vbar, subject token}.
std::pair<Matrix, Matrix> encode_example(const Example& ex, const CaptionModel& m);

Generation caption_example(const Example& ex, const CaptionModel& m, const DecodeOptions& opts = {});

}  // namespace sovc::model
