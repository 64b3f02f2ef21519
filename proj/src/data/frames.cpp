#include "sovc/data/frames.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "sovc/common/error.hpp"

namespace sovc::data {

namespace {

std::vector<std::uint8_t> read_all(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + file.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string header_token(const std::vector<std::uint8_t>& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else if (std::isspace(buf[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < buf.size() && !std::isspace(buf[pos]) && buf[pos] != '#') tok += static_cast<char>(buf[pos++]);
  return tok;
}

int header_int(const std::vector<std::uint8_t>& buf, std::size_t& pos, const std::filesystem::path& file) {
  const std::string tok = header_token(buf, pos);
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw FormatError(file.string() + ": bad PPM header value '" + tok + "'");
  }
}

}  // namespace

std::string frame_file_name(int index) {
  char name[32];
  std::snprintf(name, sizeof name, "frame_%06d.ppm", index);
  return name;
}

Image read_ppm(const std::filesystem::path& file) {
  const auto buf = read_all(file);
  std::size_t pos = 0;
  if (header_token(buf, pos) != "P6") throw FormatError(file.string() + ": not a binary P6 PPM");
  const int w = header_int(buf, pos, file);
  const int h = header_int(buf, pos, file);
  const int maxval = header_int(buf, pos, file);
  if (maxval != 255) throw FormatError(file.string() + ": only maxval 255 is supported");
  if (pos >= buf.size() || !std::isspace(buf[pos]))
    throw FormatError(file.string() + ": truncated PPM header");
  ++pos;  // single whitespace before the raster
  Image img(h, w);
  if (buf.size() - pos != img.pixels.size()) {
    std::ostringstream os;
    os << file.string() << ": expected " << img.pixels.size() << " payload bytes, found "
       << buf.size() - pos;
    throw FormatError(os.str());
  }
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(pos), buf.end(), img.pixels.begin());
  return img;
}

void write_ppm(const Image& img, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

FrameTensor read_svf(const std::filesystem::path& file) {
  const auto buf = read_all(file);
  if (buf.size() < 20 || buf[0] != 'S' || buf[1] != 'V' || buf[2] != 'F' || buf[3] != '1')
    throw FormatError(file.string() + ": missing SVF1 header");
  const std::uint32_t m = read_be32(&buf[4]);
  const std::uint32_t h = read_be32(&buf[8]);
  const std::uint32_t w = read_be32(&buf[12]);
  const std::uint32_t c = read_be32(&buf[16]);
  if (c != 3) throw FormatError(file.string() + ": only 3-channel SVF is supported");
  if (m == 0 || h == 0 || w == 0) throw FormatError(file.string() + ": zero-sized SVF dimension");
  const std::uint64_t expected = std::uint64_t{m} * h * w * c;
  const std::uint64_t found = buf.size() - 20;
  if (found != expected) {
    std::ostringstream os;
    os << file.string() << ": " << (found < expected ? "truncated payload" : "trailing bytes")
       << ", expected " << expected << " bytes, found " << found;
    throw FormatError(os.str());
  }
  FrameTensor t;
  const std::size_t frame_bytes = std::size_t{h} * w * c;
  for (std::uint32_t i = 0; i < m; ++i) {
    Image img(static_cast<int>(h), static_cast<int>(w));
    auto begin = buf.begin() + 20 + static_cast<std::ptrdiff_t>(i * frame_bytes);
    std::copy(begin, begin + static_cast<std::ptrdiff_t>(frame_bytes), img.pixels.begin());
    t.frames.push_back(std::move(img));
  }
  return t;
}

void write_svf(const FrameTensor& frames, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out.write("SVF1", 4);
  write_be32(out, static_cast<std::uint32_t>(frames.num_frames()));
  write_be32(out, static_cast<std::uint32_t>(frames.height()));
  write_be32(out, static_cast<std::uint32_t>(frames.width()));
  write_be32(out, 3);
  for (const auto& f : frames.frames)
    out.write(reinterpret_cast<const char*>(f.pixels.data()),
              static_cast<std::streamsize>(f.pixels.size()));
}

void write_ppm_bundle(const FrameTensor& frames, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < frames.num_frames(); ++i) write_ppm(frames.frames[i], dir / frame_file_name(i));
}

FrameTensor load_frames(const std::filesystem::path& source, const VideoRecord& video) {
  FrameTensor t;
  if (std::filesystem::is_directory(source)) {
    std::vector<int> missing;
    for (int i = 0; i < video.num_frames; ++i)
      if (!std::filesystem::exists(source / frame_file_name(i))) missing.push_back(i);
    if (!missing.empty()) {
      std::ostringstream os;
      os << "video '" << video.video_id << "': missing frame indices";
      for (int i : missing) os << ' ' << i;
      throw FormatError(os.str(), "frame_source");
    }
    for (int i = 0; i < video.num_frames; ++i) t.frames.push_back(read_ppm(source / frame_file_name(i)));
  } else if (source.extension() == ".svf") {
    t = read_svf(source);
  } else {
    throw FormatError("video '" + video.video_id + "': unsupported frame source '" +
                          source.string() + "'",
                      "frame_source");
  }
  for (const auto& f : t.frames) {
    if (f.height != video.height || f.width != video.width) {
      std::ostringstream os;
      os << "video '" << video.video_id << "': frame is " << f.width << "x" << f.height
         << ", record says " << video.width << "x" << video.height;
      throw FormatError(os.str(), "frame_source");
    }
  }
  if (t.num_frames() != video.num_frames)
    throw FormatError("video '" + video.video_id + "': bundle has " +
                          std::to_string(t.num_frames()) + " frames, record says " +
                          std::to_string(video.num_frames),
                      "num_frames");
  return t;
}

FrameTensor load_frames(const Dataset& ds, const VideoRecord& video) {
  return load_frames(ds.resolve(video), video);
}

Image crop(const Image& frame, const BBox& box) {
  if (!box.fits(frame.width, frame.height)) throw ContractError("crop box does not fit the frame");
  Image out(box.h, box.w);
  for (int y = 0; y < box.h; ++y)
    for (int x = 0; x < box.w; ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = frame.at(box.y + y, box.x + x, c);
  return out;
}

Image crop_subject(const FrameTensor& frames, const SubjectRegion& region) {
  if (region.frame_index < 0 || region.frame_index >= frames.num_frames())
    throw ContractError("region frame_index outside the frame tensor");
  return crop(frames.frames[static_cast<std::size_t>(region.frame_index)], region.bbox);
}

}  // namespace sovc::data
