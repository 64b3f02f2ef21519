#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sovc/data/types.hpp"

namespace sovc::data {

/// One 8-bit RGB image, row-major, channel-last.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // height * width * 3

  Image() = default;
  Image(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w * 3, 0) {}

  std::uint8_t& at(int y, int x, int c) { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  std::uint8_t at(int y, int x, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  bool operator==(const Image&) const = default;
};

/// M frames of identical size, M x H x W x 3.
struct FrameTensor {
  std::vector<Image> frames;

  int num_frames() const { return static_cast<int>(frames.size()); }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
  int width() const { return frames.empty() ? 0 : frames.front().width; }
  const Image& operator[](std::size_t i) const { return frames[i]; }
};

std::string frame_file_name(int index);  // frame_000000.ppm

Image read_ppm(const std::filesystem::path& file);
void write_ppm(const Image& img, const std::filesystem::path& file);

// .svf container: "SVF1", big-endian u32 M, H, W, C, then M*H*W*C bytes.
FrameTensor read_svf(const std::filesystem::path& file);
void write_svf(const FrameTensor& frames, const std::filesystem::path& file);

/// Writes frames as frame_000000.ppm ... into `dir`.
void write_ppm_bundle(const FrameTensor& frames, const std::filesystem::path& dir);

/// Loads the bundle at `source` (a .svf file or a PPM directory) and checks it
/// against the record's num_frames/height/width. Missing PPM indices are
/// reported together in one FormatError.
FrameTensor load_frames(const std::filesystem::path& source, const VideoRecord& video);
FrameTensor load_frames(const Dataset& ds, const VideoRecord& video);

/// Exact pixel copy of the region's bbox from frames[region.frame_index].
Image crop_subject(const FrameTensor& frames, const SubjectRegion& region);
Image crop(const Image& frame, const BBox& box);

}  // namespace sovc::data
