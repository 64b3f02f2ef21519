#pragma once

#include <memory>
#include <string>

#include "sovc/data/frames.hpp"
#include "sovc/runner/config.hpp"

namespace sovc::runner {

/// 24-bit uncompressed BMP (bottom-up rows, 4-byte row padding).
std::string encode_bmp(const data::Image& img);

// Routes:
//   GET  /health
//   GET  /videos                         [{video_id, num_frames, width, height, subjects}]
//   GET  /videos/{id}                    full record
//   GET  /videos/{id}/frames/{i}         image/bmp
//   POST /caption                        CaptionRequest -> CaptionResponse
//   GET  /annotations/{vid}/{sid}        {video_id, subject_id, correction, version}
//   PUT  /annotations/{vid}/{sid}        body {correction..., "version": expected}
// Input errors answer 422 {error, field}; unknown resources 404; a stale
// version on PUT answers 409 with the current version.
class Service {
 public:
  /// Loads the dataset, the checkpoint and the annotation store (created on first write).
  explicit Service(const RunConfig& cfg);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the socket; port 0 picks a free one. Returns the bound port and
  /// throws Error if the port is busy.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sovc::runner
