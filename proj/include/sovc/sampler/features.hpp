#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sovc/data/frames.hpp"

namespace sovc::sampler {

/// Per-frame features (one row per frame) plus the subject feature vector.
/// Rows and subject are L2-normalized when produced by extract_frame_features.
struct FrameFeatures {
  Eigen::MatrixXd matrix;   // N x d
  Eigen::VectorXd subject;  // d

  int num_frames() const { return static_cast<int>(matrix.rows()); }
  int dim() const { return static_cast<int>(matrix.cols()); }

  /// Throws ContractError if empty, mismatched or non-finite.
  void validate() const;
};

class FrameFeatureExtractor {
 public:
  virtual ~FrameFeatureExtractor() = default;
  virtual int dim() const = 0;
  virtual Eigen::VectorXd extract(const data::Image& image) const = 0;
};

// 4x4 grid of per-channel means scaled to [0,1] (48 values, cell-major then
// channel) followed by an 8-bin histogram per channel as pixel fractions
// (24 values, bin = value >> 5). d = 72. Not normalized here.
class ToyExtractor : public FrameFeatureExtractor {
 public:
  static constexpr int kGrid = 4;
  static constexpr int kBins = 8;
  static constexpr int kDim = kGrid * kGrid * 3 + kBins * 3;

  int dim() const override { return kDim; }
  Eigen::VectorXd extract(const data::Image& image) const override;
};

/// Runs the extractor on every frame and on the subject crop and
/// L2-normalizes each vector. Throws ContractError if the extractor returns
/// a vector of the wrong dimension or a zero vector.
FrameFeatures extract_frame_features(const data::FrameTensor& frames, const data::Image& subject_crop,
                                     const FrameFeatureExtractor& extractor);

/// a.b / (|a| |b|); throws std::domain_error on a zero vector.
double cosine_sim(std::span<const double> a, std::span<const double> b);
double cosine_sim(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// .sff cache: "SFF1", big-endian u32 N and d, N*d big-endian f32 row-major,
// then d f32 for the subject vector.
void write_sff(const FrameFeatures& f, const std::filesystem::path& file);
FrameFeatures read_sff(const std::filesystem::path& file);

}  // namespace sovc::sampler
