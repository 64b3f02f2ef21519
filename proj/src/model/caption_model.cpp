#include "sovc/model/caption_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graph.hpp"
#include "sovc/common/error.hpp"
#include "sovc/common/rng.hpp"

namespace sovc::model {

using detail::Graph;

namespace {

enum class Init { Xavier, Zero, One, Small, Unit };

struct ParamSpec {
  std::string name;
  int rows, cols;
  Init init;
};

void add_attention(std::vector<ParamSpec>& out, const std::string& pre, int d) {
  for (const char* w : {"wq", "wk", "wv", "wo"}) out.push_back({pre + "." + w, d, d, Init::Xavier});
  for (const char* b : {"bq", "bk", "bv", "bo"}) out.push_back({pre + "." + b, 1, d, Init::Zero});
}

void add_norm(std::vector<ParamSpec>& out, const std::string& pre, int d) {
  out.push_back({pre + ".g", 1, d, Init::One});
  out.push_back({pre + ".b", 1, d, Init::Zero});
}

void add_ff(std::vector<ParamSpec>& out, const std::string& pre, int d) {
  out.push_back({pre + ".w1", d, 4 * d, Init::Xavier});
  out.push_back({pre + ".b1", 1, 4 * d, Init::Zero});
  out.push_back({pre + ".w2", 4 * d, d, Init::Xavier});
  out.push_back({pre + ".b2", 1, d, Init::Zero});
}

std::vector<ParamSpec> param_specs(const ModelConfig& c, int vocab) {
  const int d = c.d_model, P = c.patch_size;
  std::vector<ParamSpec> s;
  s.push_back({"patch.w", 3 * P * P, d, Init::Xavier});
  s.push_back({"patch.b", 1, d, Init::Zero});
  if (c.num_soft_tokens > 0) s.push_back({"soft", c.num_soft_tokens, d, Init::Small});
  s.push_back({"type", 3, d, Init::Small});
  for (int l = 0; l < c.encoder_layers; ++l) {
    auto pre = "enc." + std::to_string(l);
    add_norm(s, pre + ".ln1", d);
    add_attention(s, pre + ".attn", d);
    add_norm(s, pre + ".ln2", d);
    add_ff(s, pre + ".ff", d);
  }
  if (c.encoder_layers > 0) add_norm(s, "enc.ln", d);
  s.push_back({"subj.w", 48, d, Init::Xavier});
  s.push_back({"subj.b", 1, d, Init::Zero});
  s.push_back({"tok", vocab, d, Init::Unit});
  for (int l = 0; l < c.decoder_layers; ++l) {
    auto pre = "dec." + std::to_string(l);
    add_norm(s, pre + ".ln1", d);
    add_attention(s, pre + ".self", d);
    add_norm(s, pre + ".ln2", d);
    add_attention(s, pre + ".cross", d);
    add_norm(s, pre + ".ln3", d);
    add_ff(s, pre + ".ff", d);
  }
  add_norm(s, "dec.ln", d);
  s.push_back({"out.w", d, vocab, Init::Xavier});
  s.push_back({"out.b", 1, vocab, Init::Zero});
  return s;
}

}  // namespace

CaptionModel CaptionModel::init(const ModelConfig& config, Vocabulary vocab, std::uint64_t seed) {
  config.validate();
  CaptionModel m;
  m.config = config;
  m.vocab = std::move(vocab);
  for (const auto& spec : param_specs(config, m.vocab.size())) {
    Matrix w = Matrix::Zero(spec.rows, spec.cols);
    SplitMix64 rng(derive_seed(seed, spec.name));
    double std = 0;
    switch (spec.init) {
      case Init::Zero: break;
      case Init::One: w.setOnes(); break;
      case Init::Small: std = 0.02; break;
      case Init::Unit: std = 1.0; break;
      case Init::Xavier: std = std::sqrt(2.0 / (spec.rows + spec.cols)); break;
    }
    if (std > 0)
      for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = std * rng.normal();
    m.params.emplace(spec.name, std::move(w));
  }
  return m;
}

const Matrix& CaptionModel::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw ContractError("unknown model parameter " + name);
  return it->second;
}

std::size_t CaptionModel::num_parameters() const {
  std::size_t n = 0;
  for (const auto& [k, v] : params) n += static_cast<std::size_t>(v.size());
  return n;
}

std::size_t parameter_count(const ModelConfig& c, int vocab_size) {
  const std::size_t d = static_cast<std::size_t>(c.d_model), P = static_cast<std::size_t>(c.patch_size);
  const std::size_t V = static_cast<std::size_t>(vocab_size), K = static_cast<std::size_t>(c.num_soft_tokens);
  const auto le = static_cast<std::size_t>(c.encoder_layers), ld = static_cast<std::size_t>(c.decoder_layers);
  return le * (12 * d * d + 13 * d) + ld * (16 * d * d + 19 * d) + 3 * P * P * d + d + K * d + 3 * d +
         (le > 0 ? 2 * d : 0) + 48 * d + d + V * d + 2 * d + d * V + V;
}

Matrix sinusoidal_positions(int length, int d_model) {
  Matrix pe(length, d_model);
  for (int pos = 0; pos < length; ++pos)
    for (int i = 0; i < d_model; ++i) {
      double rate = std::pow(10000.0, static_cast<double>(2 * (i / 2)) / d_model);
      pe(pos, i) = i % 2 == 0 ? std::sin(pos / rate) : std::cos(pos / rate);
    }
  return pe;
}

namespace detail {

Var Graph::p(const std::string& name) {
  auto it = cache_.find(name);
  if (it != cache_.end()) return it->second;
  Var v = tape.parameter(name, model_.param(name), track_);
  cache_.emplace(name, v);
  return v;
}

Matrix flatten_patches(const std::vector<RealImage>& frames, int side, int patch) {
  const int per = side / patch;
  Matrix out(static_cast<Eigen::Index>(frames.size()) * per * per, 3 * patch * patch);
  Eigen::Index row = 0;
  for (const auto& f : frames) {
    if (f.height != side || f.width != side)
      throw ContractError("patch_embed: frame is " + std::to_string(f.height) + "x" + std::to_string(f.width) +
                          ", expected " + std::to_string(side) + "x" + std::to_string(side));
    for (int py = 0; py < per; ++py)
      for (int px = 0; px < per; ++px, ++row) {
        Eigen::Index col = 0;
        for (int y = 0; y < patch; ++y)
          for (int x = 0; x < patch; ++x)
            for (int c = 0; c < 3; ++c) out(row, col++) = f.at(py * patch + y, px * patch + x, c);
      }
  }
  return out;
}

Var linear(Graph& g, Var x, const std::string& prefix) {
  return g.tape.add_row(g.tape.matmul(x, g.p(prefix + ".w")), g.p(prefix + ".b"));
}

Var patch_tokens(Graph& g, const Matrix& patches) {
  if (patches.cols() != g.model().param("patch.w").rows()) throw ContractError("patch_embed: patch width mismatch");
  return linear(g, g.tape.constant(patches), "patch");
}

Var hard_prompt(Graph& g, const RealImage& crop) {
  const auto& c = g.model().config;
  const int side = c.subject_grid * c.patch_size;
  auto resized = resize_bilinear(crop, side, side);
  return patch_tokens(g, flatten_patches({resized}, side, c.patch_size));
}

Var encoder_input(Graph& g, Var frame_tokens, Var hard_tokens, TokenSequence* layout) {
  const auto& c = g.model().config;
  auto& t = g.tape;
  const int nh = static_cast<int>(t.value(hard_tokens).rows());
  const int nf = static_cast<int>(t.value(frame_tokens).rows());
  if (t.value(hard_tokens).cols() != c.d_model || t.value(frame_tokens).cols() != c.d_model)
    throw ContractError("build_encoder_input: token width differs from d_model");
  std::vector<Var> parts{hard_tokens, frame_tokens};
  if (c.num_soft_tokens > 0) parts.push_back(g.p("soft"));
  Var x = t.concat_rows(parts);
  const int L = nh + nf + c.num_soft_tokens;
  std::vector<int> tags;
  tags.insert(tags.end(), static_cast<std::size_t>(nh), static_cast<int>(TokenType::Hard));
  tags.insert(tags.end(), static_cast<std::size_t>(nf), static_cast<int>(TokenType::Frame));
  tags.insert(tags.end(), static_cast<std::size_t>(c.num_soft_tokens), static_cast<int>(TokenType::Soft));
  x = t.add(x, t.gather_rows(g.p("type"), tags));
  x = t.add(x, t.constant(sinusoidal_positions(L, c.d_model)));
  if (layout) {
    layout->type_tags.clear();
    layout->positions.clear();
    for (int i = 0; i < L; ++i) {
      layout->type_tags.push_back(static_cast<TokenType>(tags[static_cast<std::size_t>(i)]));
      layout->positions.push_back(i);
    }
  }
  return x;
}

namespace {

Var norm(Graph& g, Var x, const std::string& pre) {
  return g.tape.layer_norm(x, g.p(pre + ".g"), g.p(pre + ".b"));
}

Var attention(Graph& g, const std::string& pre, Var xq, Var xkv, const RowMask* mask) {
  auto& t = g.tape;
  const int d = g.model().config.d_model, h = g.model().config.heads, dh = d / h;
  auto proj = [&](Var x, const char* w, const char* b) {
    return t.add_row(t.matmul(x, g.p(pre + "." + w)), g.p(pre + "." + b));
  };
  Var q = proj(xq, "wq", "bq"), k = proj(xkv, "wk", "bk"), v = proj(xkv, "wv", "bv");
  std::vector<Var> heads;
  for (int i = 0; i < h; ++i) {
    Var s = t.scale(t.matmul_nt(t.slice_cols(q, i * dh, dh), t.slice_cols(k, i * dh, dh)),
                    1.0 / std::sqrt(static_cast<double>(dh)));
    heads.push_back(t.matmul(t.softmax_rows(s, mask), t.slice_cols(v, i * dh, dh)));
  }
  Var o = h == 1 ? heads[0] : t.concat_cols(heads);
  return proj(o, "wo", "bo");
}

Var feed_forward(Graph& g, Var x, const std::string& pre) {
  auto& t = g.tape;
  Var hdn = t.gelu(t.add_row(t.matmul(x, g.p(pre + ".w1")), g.p(pre + ".b1")));
  return t.add_row(t.matmul(hdn, g.p(pre + ".w2")), g.p(pre + ".b2"));
}

}  // namespace

Var encoder(Graph& g, Var x) {
  auto& t = g.tape;
  const int layers = g.model().config.encoder_layers;
  for (int l = 0; l < layers; ++l) {
    auto pre = "enc." + std::to_string(l);
    Var hn = norm(g, x, pre + ".ln1");
    x = t.add(x, attention(g, pre + ".attn", hn, hn, nullptr));
    x = t.add(x, feed_forward(g, norm(g, x, pre + ".ln2"), pre + ".ff"));
  }
  return layers > 0 ? norm(g, x, "enc.ln") : x;
}

Var subject_token(Graph& g, const RealImage& crop) {
  const int side = g.model().config.frame_side;
  auto pooled = grid_pool_4x4(resize_bilinear(crop, side, side));
  Matrix row = Eigen::Map<const Eigen::RowVectorXd>(pooled.data(), static_cast<Eigen::Index>(pooled.size()));
  return linear(g, g.tape.constant(std::move(row)), "subj");
}

Var decoder(Graph& g, Var memory, const std::vector<int>& prefix) {
  auto& t = g.tape;
  const auto& c = g.model().config;
  if (prefix.empty()) throw ContractError("decoder: empty prefix");
  const int n = static_cast<int>(prefix.size());
  Var x = t.add(t.gather_rows(g.p("tok"), prefix), t.constant(sinusoidal_positions(n, c.d_model)));
  RowMask causal(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) causal(i, j) = j <= i;
  for (int l = 0; l < c.decoder_layers; ++l) {
    auto pre = "dec." + std::to_string(l);
    Var hn = norm(g, x, pre + ".ln1");
    x = t.add(x, attention(g, pre + ".self", hn, hn, &causal));
    x = t.add(x, attention(g, pre + ".cross", norm(g, x, pre + ".ln2"), memory, nullptr));
    x = t.add(x, feed_forward(g, norm(g, x, pre + ".ln3"), pre + ".ff"));
  }
  return linear(g, norm(g, x, "dec.ln"), "out");
}

Var example_loss(Graph& g, const Example& ex, int* count) {
  auto& t = g.tape;
  const auto& c = g.model().config;
  if (static_cast<int>(ex.frames.size()) != c.num_frames)
    throw ContractError("example has " + std::to_string(ex.frames.size()) + " frames, model expects " +
                        std::to_string(c.num_frames));
  std::vector<int> input, target;
  for (std::size_t i = 0; i + 1 < ex.tokens.size(); ++i) {
    input.push_back(ex.tokens[i]);
    int tgt = ex.tokens[i + 1];
    target.push_back(tgt == Vocabulary::kPad ? -1 : tgt);
  }
  int n = 0;
  for (int tgt : target) n += tgt >= 0;
  *count = n;
  if (n == 0) return {};
  while (!target.empty() && target.back() < 0) {
    target.pop_back();
    input.pop_back();
  }
  Var frames = patch_tokens(g, flatten_patches(ex.frames, c.frame_side, c.patch_size));
  Var vbar = encoder(g, encoder_input(g, frames, hard_prompt(g, ex.crop), nullptr));
  Var memory = t.concat_rows({vbar, subject_token(g, ex.crop)});
  return t.cross_entropy_sum(decoder(g, memory, input), target);
}

}  // namespace detail

Matrix patch_embed(const std::vector<RealImage>& frames, const CaptionModel& m) {
  Graph g(m, false);
  return g.tape.value(detail::patch_tokens(g, detail::flatten_patches(frames, m.config.frame_side, m.config.patch_size)));
}

Matrix embed_subject_prompt(const RealImage& crop, const CaptionModel& m) {
  Graph g(m, false);
  return g.tape.value(detail::hard_prompt(g, crop));
}

TokenSequence build_encoder_input(const Matrix& frame_tokens, const Matrix& hard_tokens, const CaptionModel& m) {
  Graph g(m, false);
  TokenSequence seq;
  Var x = detail::encoder_input(g, g.tape.constant(frame_tokens), g.tape.constant(hard_tokens), &seq);
  seq.embeddings = g.tape.value(x);
  return seq;
}

Matrix encode(const TokenSequence& seq, const CaptionModel& m) {
  if (seq.embeddings.cols() != m.config.d_model) throw ContractError("encode: width differs from d_model");
  Graph g(m, false);
  Matrix out = g.tape.value(detail::encoder(g, g.tape.constant(seq.embeddings)));
  if (!out.allFinite()) throw DivergenceError("encoder produced non-finite activations");
  return out;
}

Matrix encode_subject(const RealImage& crop, const CaptionModel& m) {
  Graph g(m, false);
  return g.tape.value(detail::subject_token(g, crop));
}

Matrix decoder_logits(const Matrix& vbar, const Matrix& subject, const std::vector<int>& prefix,
                      const CaptionModel& m) {
  if (subject.rows() != 1 || subject.cols() != vbar.cols())
    throw ContractError("decoder: subject token must be 1 x d_model");
  Graph g(m, false);
  Matrix memory(vbar.rows() + 1, vbar.cols());
  memory << vbar, subject;
  return g.tape.value(detail::decoder(g, g.tape.constant(std::move(memory)), prefix));
}

std::pair<Matrix, Matrix> encode_example(const Example& ex, const CaptionModel& m) {
  auto seq = build_encoder_input(patch_embed(ex.frames, m), embed_subject_prompt(ex.crop, m), m);
  return {encode(seq, m), encode_subject(ex.crop, m)};
}

namespace {

Eigen::RowVectorXd log_softmax(const Eigen::RowVectorXd& logits) {
  double mx = logits.maxCoeff();
  double lse = mx + std::log((logits.array() - mx).exp().sum());
  return logits.array() - lse;
}

struct Hypothesis {
  std::vector<int> ids;  // starts with BOS
  double logp = 0;
};

double normalised(const Hypothesis& h, double alpha) {
  double len = static_cast<double>(h.ids.size() - 1);
  return h.logp / std::pow((5.0 + len) / 6.0, alpha);
}

Generation finish(const std::vector<int>& ids, const CaptionModel& m) {
  Generation gen;
  gen.token_ids.assign(ids.begin() + 1, ids.end());
  auto words = m.vocab.decode(gen.token_ids);
  gen.empty = words.empty();
  for (std::size_t i = 0; i < words.size(); ++i) gen.caption += (i ? " " : "") + words[i];
  return gen;
}

}  // namespace

Generation generate(const Matrix& vbar, const Matrix& subject, const CaptionModel& m, const DecodeOptions& opts) {
  if (opts.beam_width < 1) throw ContractError("beam width must be >= 1");
  const int max_len = m.config.max_caption_len;
  const auto width = static_cast<std::size_t>(opts.beam_width);
  std::vector<Hypothesis> live{{{Vocabulary::kBos}, 0.0}}, done;
  // max_len words plus the closing EOS
  for (int step = 0; step <= max_len && !live.empty(); ++step) {
    std::vector<Hypothesis> cand;
    for (const auto& h : live) {
      Eigen::RowVectorXd lp = log_softmax(decoder_logits(vbar, subject, h.ids, m).bottomRows(1));
      lp(Vocabulary::kPad) = lp(Vocabulary::kBos) = -std::numeric_limits<double>::infinity();
      if (step == max_len) {
        for (Eigen::Index v = 0; v < lp.size(); ++v)
          if (v != Vocabulary::kEos) lp(v) = -std::numeric_limits<double>::infinity();
      }
      std::vector<int> order(static_cast<std::size_t>(lp.size()));
      for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<int>(v);
      auto k = std::min(width, order.size());
      std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                        [&](int a, int b) { return lp(a) > lp(b) || (lp(a) == lp(b) && a < b); });
      for (std::size_t i = 0; i < k; ++i) {
        if (!std::isfinite(lp(order[i]))) continue;
        Hypothesis next = h;
        next.ids.push_back(order[i]);
        next.logp += lp(order[i]);
        cand.push_back(std::move(next));
      }
    }
    std::stable_sort(cand.begin(), cand.end(), [](const Hypothesis& a, const Hypothesis& b) { return a.logp > b.logp; });
    live.clear();
    for (std::size_t i = 0; i < cand.size() && i < width; ++i) {
      if (cand[i].ids.back() == Vocabulary::kEos) {
        done.push_back(std::move(cand[i]));
      } else {
        live.push_back(std::move(cand[i]));
      }
    }
    if (done.size() >= width) break;
  }
  for (auto& h : live) done.push_back(std::move(h));
  const Hypothesis* best = &done.front();
  for (const auto& h : done)
    if (normalised(h, opts.length_alpha) > normalised(*best, opts.length_alpha)) best = &h;
  return finish(best->ids, m);
}

Generation caption_example(const Example& ex, const CaptionModel& m, const DecodeOptions& opts) {
  auto [vbar, subject] = encode_example(ex, m);
  return generate(vbar, subject, m, opts);
}

}  // namespace sovc::model
