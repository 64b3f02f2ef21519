#include "sovc/runner/synthetic.hpp"

#include <array>

#include "sovc/common/error.hpp"
#include "sovc/data/dataset_io.hpp"
#include "sovc/data/frames.hpp"

namespace sovc::runner {

namespace {

struct Colour {
  const char* name;
  std::array<std::uint8_t, 3> rgb;
};

const std::array<Colour, 4> kColours = {{{"red", {220, 40, 40}},
                                         {"green", {40, 200, 60}},
                                         {"blue", {50, 80, 230}},
                                         {"yellow", {230, 210, 40}}}};

constexpr int kSquare = 8;

struct Track {
  int colour;
  const char* direction;
  int x0, y0, dx, dy;  // position at frame f: x0 + dx * f / (M - 1), likewise y
};

data::BBox box_at(const Track& t, int f, int frames) {
  int denom = std::max(frames - 1, 1);
  return {t.x0 + t.dx * f / denom, t.y0 + t.dy * f / denom, kSquare, kSquare};
}

void paint(data::Image& img, const data::BBox& b, const std::array<std::uint8_t, 3>& rgb) {
  for (int y = b.y; y < b.y + b.h; ++y)
    for (int x = b.x; x < b.x + b.w; ++x)
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = rgb[static_cast<std::size_t>(c)];
}

std::array<Track, 2> tracks(int video, int side) {
  const int travel = side - kSquare;
  const bool second_half = video >= 4;
  Track horizontal{video % 4, second_half ? "right" : "left", second_half ? 0 : travel, side - kSquare - 1,
                   second_half ? travel : -travel, 0};
  const int band = side - 2 * kSquare - 2;
  Track vertical{(video + 1) % 4, second_half ? "down" : "up", 3 + 4 * (video % 4), second_half ? 0 : band, 0,
                 second_half ? band : -band};
  return {horizontal, vertical};
}

}  // namespace

data::Dataset make_synthetic_dataset(const SyntheticOptions& opts) {
  if (opts.num_videos < 1 || opts.num_videos > 8) throw ValidationError("synthetic: num_videos must be in [1, 8]", "num_videos");
  if (opts.num_frames < 2) throw ValidationError("synthetic: num_frames must be >= 2", "num_frames");
  if (opts.side < 3 * kSquare) throw ValidationError("synthetic: side must be >= 24", "side");
  data::Dataset ds;
  ds.split = data::Split::Train;
  for (int v = 0; v < opts.num_videos; ++v) {
    data::VideoRecord rec;
    rec.video_id = "syn" + std::to_string(v);
    rec.frame_source = rec.video_id + ".svf";
    rec.num_frames = opts.num_frames;
    rec.width = rec.height = opts.side;
    int k = 1;
    for (const auto& t : tracks(v, opts.side)) {
      data::SubjectSample s;
      s.subject_id = "s" + std::to_string(k++);
      s.subject_word = "square";
      s.regions.push_back({0, box_at(t, 0, opts.num_frames)});
      s.captions.push_back(std::string("the ") + kColours[static_cast<std::size_t>(t.colour)].name + " square moves " +
                           t.direction);
      rec.subjects.push_back(std::move(s));
    }
    ds.videos.push_back(std::move(rec));
  }
  return ds;
}

data::Dataset write_synthetic_dataset(const std::filesystem::path& dir, const SyntheticOptions& opts) {
  auto ds = make_synthetic_dataset(opts);
  std::filesystem::create_directories(dir);
  for (std::size_t v = 0; v < ds.videos.size(); ++v) {
    data::FrameTensor frames;
    auto tr = tracks(static_cast<int>(v), opts.side);
    for (int f = 0; f < opts.num_frames; ++f) {
      data::Image img(opts.side, opts.side);
      for (int y = 0; y < opts.side; ++y)
        for (int x = 0; x < opts.side; ++x)
          for (int c = 0; c < 3; ++c) img.at(y, x, c) = static_cast<std::uint8_t>(20 + ((x + y + c) % 4) * 3);
      for (const auto& t : tr) paint(img, box_at(t, f, opts.num_frames), kColours[static_cast<std::size_t>(t.colour)].rgb);
      frames.frames.push_back(std::move(img));
    }
    data::write_svf(frames, dir / ds.videos[v].frame_source);
  }
  data::save_dataset(ds, dir);
  ds.root = dir;
  return ds;
}

}  // namespace sovc::runner
