#include "sovc/sampler/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "sovc/common/error.hpp"

namespace sovc::sampler {

void FrameFeatures::validate() const {
  if (matrix.rows() < 1 || matrix.cols() < 1) throw ContractError("frame features are empty");
  if (subject.size() != matrix.cols()) throw ContractError("subject feature dimension mismatch");
  if (!matrix.allFinite() || !subject.allFinite()) throw ContractError("frame features contain NaN/Inf");
}

Eigen::VectorXd ToyExtractor::extract(const data::Image& image) const {
  if (image.height < 1 || image.width < 1) throw ContractError("toy extractor: empty image");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kDim);
  const int h = image.height;
  const int w = image.width;
  auto bounds = [](int i, int extent) {
    int lo = std::min(i * extent / kGrid, extent - 1);
    int hi = std::max(lo + 1, (i + 1) * extent / kGrid);
    return std::pair{lo, std::min(hi, extent)};
  };
  for (int gy = 0; gy < kGrid; ++gy) {
    const auto [y0, y1] = bounds(gy, h);
    for (int gx = 0; gx < kGrid; ++gx) {
      const auto [x0, x1] = bounds(gx, w);
      const double n = static_cast<double>((y1 - y0) * (x1 - x0));
      for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (int y = y0; y < y1; ++y)
          for (int x = x0; x < x1; ++x) sum += image.at(y, x, c);
        v[(gy * kGrid + gx) * 3 + c] = sum / (255.0 * n);
      }
    }
  }
  const double pixels = static_cast<double>(h) * w;
  const int base = kGrid * kGrid * 3;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) v[base + c * kBins + (image.at(y, x, c) >> 5)] += 1.0 / pixels;
  return v;
}

namespace {

Eigen::VectorXd normalized(Eigen::VectorXd v, const FrameFeatureExtractor& ex) {
  if (v.size() != ex.dim())
    throw ContractError("extractor returned dimension " + std::to_string(v.size()) + ", expected " +
                        std::to_string(ex.dim()));
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ContractError("extractor returned a zero or non-finite vector");
  return v / n;
}

}  // namespace

FrameFeatures extract_frame_features(const data::FrameTensor& frames, const data::Image& subject_crop,
                                     const FrameFeatureExtractor& extractor) {
  if (frames.frames.empty()) throw ContractError("extract_frame_features: no frames");
  FrameFeatures f;
  f.matrix.resize(frames.num_frames(), extractor.dim());
  for (int i = 0; i < frames.num_frames(); ++i)
    f.matrix.row(i) = normalized(extractor.extract(frames[static_cast<std::size_t>(i)]), extractor).transpose();
  f.subject = normalized(extractor.extract(subject_crop), extractor);
  return f;
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("cosine_sim: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw std::domain_error("cosine_sim: zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine_sim(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return cosine_sim(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                    std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
}

namespace {

void put_be32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

void put_f32(std::ostream& out, double v) { put_be32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

std::uint32_t get_be32(const std::vector<unsigned char>& buf, std::size_t& pos) {
  std::uint32_t v = (std::uint32_t{buf[pos]} << 24) | (std::uint32_t{buf[pos + 1]} << 16) |
                    (std::uint32_t{buf[pos + 2]} << 8) | std::uint32_t{buf[pos + 3]};
  pos += 4;
  return v;
}

}  // namespace

void write_sff(const FrameFeatures& f, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out.write("SFF1", 4);
  put_be32(out, static_cast<std::uint32_t>(f.matrix.rows()));
  put_be32(out, static_cast<std::uint32_t>(f.matrix.cols()));
  for (Eigen::Index i = 0; i < f.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < f.matrix.cols(); ++j) put_f32(out, f.matrix(i, j));
  for (Eigen::Index j = 0; j < f.subject.size(); ++j) put_f32(out, f.subject[j]);
}

FrameFeatures read_sff(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + file.string() + "'");
  std::vector<unsigned char> buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (buf.size() < 12 || std::memcmp(buf.data(), "SFF1", 4) != 0)
    throw FormatError(file.string() + ": missing SFF1 header");
  std::size_t pos = 4;
  const std::uint32_t n = get_be32(buf, pos);
  const std::uint32_t d = get_be32(buf, pos);
  const std::uint64_t expected = 12 + 4ull * (std::uint64_t{n} * d + d);
  if (buf.size() != expected)
    throw FormatError(file.string() + ": expected " + std::to_string(expected) + " bytes, found " +
                      std::to_string(buf.size()));
  FrameFeatures f;
  f.matrix.resize(n, d);
  f.subject.resize(d);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < d; ++j) f.matrix(i, j) = std::bit_cast<float>(get_be32(buf, pos));
  for (std::uint32_t j = 0; j < d; ++j) f.subject[j] = std::bit_cast<float>(get_be32(buf, pos));
  return f;
}

}  // namespace sovc::sampler
