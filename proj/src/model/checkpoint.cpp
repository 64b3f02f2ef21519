#include "sovc/model/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "sovc/common/error.hpp"

namespace sovc::model {

using nlohmann::json;

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xFF));
}

void put_block(std::string& out, const std::string& bytes) {
  put_u32(out, static_cast<std::uint32_t>(bytes.size()));
  out += bytes;
}

void put_tensor(std::string& out, const std::string& name, const Matrix& w) {
  put_block(out, name);
  put_u32(out, 2);
  put_u32(out, static_cast<std::uint32_t>(w.rows()));
  put_u32(out, static_cast<std::uint32_t>(w.cols()));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(w(i, j))));
}

class Reader {
 public:
  Reader(const std::string& bytes, std::string where) : b_(bytes), where_(std::move(where)) {}

  std::uint32_t u32() {
    need(4, "u32");
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v = (v << 8) | static_cast<unsigned char>(b_[pos_++]);
    return v;
  }
  std::string bytes(std::size_t n, const char* what) {
    need(n, what);
    auto s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string block(const char* what) { return bytes(u32(), what); }
  bool done() const { return pos_ == b_.size(); }
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError(where_ + ": " + msg + " (offset " + std::to_string(pos_) + ")");
  }

 private:
  void need(std::size_t n, const char* what) {
    if (b_.size() - pos_ < n) fail(std::string("truncated checkpoint while reading ") + what);
  }
  const std::string& b_;
  std::string where_;
  std::size_t pos_ = 0;
};

std::string hex_id(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) h = (h ^ c) * 0x100000001b3ULL;
  std::ostringstream os;
  os << "sovc-" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const CaptionModel& m, const AdamState* opt) {
  std::string out = "SOVC";
  put_u32(out, kCheckpointVersion);
  put_block(out, json(m.config).dump());
  if (opt && opt->step == 0) opt = nullptr;  // nothing to resume from yet
  json meta = {{"vocab", m.vocab.to_json()}, {"optimizer_step", opt ? opt->step : 0}, {"has_optimizer", opt != nullptr}};
  put_block(out, meta.dump());
  std::size_t count = m.params.size() + (opt ? opt->m.size() + opt->v.size() : 0);
  put_u32(out, static_cast<std::uint32_t>(count));
  for (const auto& [name, w] : m.params) put_tensor(out, name, w);
  if (opt) {
    for (const auto& [name, w] : opt->m) put_tensor(out, "adam.m/" + name, w);
    for (const auto& [name, w] : opt->v) put_tensor(out, "adam.v/" + name, w);
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write checkpoint " + tmp.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open checkpoint " + path.string(), "checkpoint");
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  Reader r(bytes, path.string());
  if (r.bytes(4, "magic") != "SOVC") r.fail("bad magic, not a checkpoint");
  if (auto v = r.u32(); v != kCheckpointVersion) r.fail("unsupported checkpoint version " + std::to_string(v));
  json cfg_j, meta;
  try {
    cfg_j = json::parse(r.block("config"));
    meta = json::parse(r.block("metadata"));
  } catch (const json::parse_error& e) {
    r.fail(std::string("corrupt JSON block: ") + e.what());
  }
  ModelConfig cfg = cfg_j.get<ModelConfig>();
  cfg.validate();
  Checkpoint ck;
  ck.model = CaptionModel::init(cfg, Vocabulary::from_json(meta.at("vocab")), 0);
  ck.model_id = hex_id(bytes);
  AdamState opt;
  opt.step = meta.value("optimizer_step", 0L);
  std::set<std::string> seen;
  const std::uint32_t count = r.u32();
  for (std::uint32_t t = 0; t < count; ++t) {
    std::string name = r.block("tensor name");
    if (r.u32() != 2) r.fail("tensor " + name + " is not rank 2");
    const auto rows = r.u32(), cols = r.u32();
    Matrix w(rows, cols);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = std::bit_cast<float>(r.u32());
    std::string base = name;
    std::map<std::string, Matrix>* dest = &ck.model.params;
    if (name.starts_with("adam.m/")) {
      base = name.substr(7);
      dest = &opt.m;
    } else if (name.starts_with("adam.v/")) {
      base = name.substr(7);
      dest = &opt.v;
    }
    auto it = ck.model.params.find(base);
    if (it == ck.model.params.end()) r.fail("unknown tensor " + name);
    if (it->second.rows() != w.rows() || it->second.cols() != w.cols())
      r.fail("tensor " + name + " has shape " + std::to_string(rows) + "x" + std::to_string(cols) + ", expected " +
             std::to_string(it->second.rows()) + "x" + std::to_string(it->second.cols()));
    if (!seen.insert(name).second) r.fail("duplicate tensor " + name);
    (*dest)[base] = std::move(w);
  }
  if (!r.done()) r.fail("trailing bytes after the last tensor");
  for (const auto& [name, w] : ck.model.params)
    if (!seen.contains(name)) r.fail("missing tensor " + name);
  if (meta.value("has_optimizer", false)) {
    for (const auto& [name, w] : ck.model.params)
      if (!opt.m.contains(name) || !opt.v.contains(name)) r.fail("missing optimizer state for " + name);
    ck.optimizer = std::move(opt);
  }
  return ck;
}

}  // namespace sovc::model
