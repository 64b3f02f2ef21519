#include "sovc/model/train.hpp"

#include <cmath>
#include <numeric>

#include "graph.hpp"
#include "sovc/common/error.hpp"
#include "sovc/common/rng.hpp"

namespace sovc::model {

using detail::Graph;

namespace {

LossAndGrads run(const CaptionModel& m, std::span<const Example> batch, bool with_grads) {
  if (batch.empty()) throw ContractError("empty batch");
  Graph g(m, with_grads);
  std::vector<Var> sums;
  int total = 0;
  for (const auto& ex : batch) {
    int n = 0;
    Var v = detail::example_loss(g, ex, &n);
    if (n > 0) sums.push_back(v);
    total += n;
  }
  if (total == 0) throw ContractError("degenerate batch: every target token is PAD");
  Var acc = sums[0];
  for (std::size_t i = 1; i < sums.size(); ++i) acc = g.tape.add(acc, sums[i]);
  Var loss = g.tape.scale(acc, 1.0 / total);
  LossAndGrads out;
  out.loss = g.tape.value(loss)(0, 0);
  out.tokens = total;
  if (with_grads) {
    g.tape.backward(loss);
    out.grads = g.tape.parameter_grads();
    for (const auto& [name, w] : m.params)
      if (!out.grads.contains(name)) out.grads[name] = Matrix::Zero(w.rows(), w.cols());
  }
  return out;
}

}  // namespace

bool decays(const std::string& name) {
  auto dot = name.rfind('.');
  return dot != std::string::npos && name[dot + 1] == 'w';
}

double batch_loss(const CaptionModel& m, std::span<const Example> batch) { return run(m, batch, false).loss; }

LossAndGrads loss_and_grads(const CaptionModel& m, std::span<const Example> batch) { return run(m, batch, true); }

double train_step(CaptionModel& m, AdamState& opt, std::span<const Example> batch, const TrainConfig& cfg) {
  auto lg = loss_and_grads(m, batch);
  if (!std::isfinite(lg.loss)) throw DivergenceError("non-finite loss at step " + std::to_string(opt.step + 1));
  for (const auto& [name, gr] : lg.grads)
    if (!gr.allFinite()) throw DivergenceError("non-finite gradient for " + name + " at step " + std::to_string(opt.step + 1));
  ++opt.step;
  const double b1 = cfg.beta1, b2 = cfg.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(opt.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(opt.step));
  for (auto& [name, w] : m.params) {
    const Matrix& gr = lg.grads.at(name);
    auto [mit, fresh_m] = opt.m.try_emplace(name, Matrix::Zero(w.rows(), w.cols()));
    auto [vit, fresh_v] = opt.v.try_emplace(name, Matrix::Zero(w.rows(), w.cols()));
    Matrix& mm = mit->second;
    Matrix& vv = vit->second;
    mm = b1 * mm + (1 - b1) * gr;
    vv = b2 * vv + (1 - b2) * gr.cwiseProduct(gr);
    if (cfg.weight_decay > 0 && decays(name)) w *= 1.0 - cfg.learning_rate * cfg.weight_decay;
    w.array() -= cfg.learning_rate * (mm.array() / c1) / ((vv.array() / c2).sqrt() + cfg.adam_eps);
  }
  return lg.loss;
}

std::vector<std::size_t> batch_indices(std::size_t n, int batch_size, long step, std::uint64_t seed) {
  if (n == 0) throw ContractError("no training examples");
  std::vector<std::size_t> out;
  const auto bs = static_cast<std::size_t>(batch_size);
  // Position of the batch in the infinite stream of epoch permutations.
  std::size_t start = static_cast<std::size_t>(step) * bs;
  std::vector<std::size_t> perm;
  std::size_t perm_epoch = static_cast<std::size_t>(-1);
  for (std::size_t k = start; k < start + bs; ++k) {
    std::size_t epoch = k / n;
    if (epoch != perm_epoch) {
      perm.resize(n);
      std::iota(perm.begin(), perm.end(), 0);
      SplitMix64 rng(derive_seed(seed, "epoch" + std::to_string(epoch)));
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      perm_epoch = epoch;
    }
    out.push_back(perm[k % n]);
  }
  return out;
}

void train(CaptionModel& m, AdamState& opt, std::span<const Example> data, const TrainConfig& cfg,
           const std::function<void(const TrainLogEntry&)>& on_step) {
  cfg.validate();
  std::vector<Example> batch;
  for (int s = 0; s < cfg.steps; ++s) {
    batch.clear();
    for (auto i : batch_indices(data.size(), cfg.batch_size, opt.step, cfg.seed)) batch.push_back(data[i]);
    double loss = train_step(m, opt, batch, cfg);
    if (on_step) on_step({opt.step, loss, cfg.learning_rate});
  }
}

GradcheckResult gradcheck(const CaptionModel& m, const Example& ex, double epsilon,
                          const std::vector<std::string>& names) {
  std::span<const Example> one(&ex, 1);
  auto analytic = loss_and_grads(m, one).grads;
  CaptionModel probe = m;
  GradcheckResult res;
  for (const auto& name : names) {
    Matrix& w = probe.params.at(name);
    const Matrix& a = analytic.at(name);
    double worst = 0;
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double orig = w(i, j);
        w(i, j) = orig + epsilon;
        double up = batch_loss(probe, one);
        w(i, j) = orig - epsilon;
        double down = batch_loss(probe, one);
        w(i, j) = orig;
        double num = (up - down) / (2 * epsilon);
        double rel = std::abs(a(i, j) - num) / std::max(std::abs(a(i, j)) + std::abs(num), 1e-8);
        worst = std::max(worst, rel);
        ++res.entries_checked;
      }
    res.per_param[name] = worst;
    if (worst >= res.max_rel_error) {
      res.max_rel_error = worst;
      res.worst_param = name;
    }
  }
  return res;
}

}  // namespace sovc::model
