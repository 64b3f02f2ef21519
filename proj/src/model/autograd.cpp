#include "sovc/model/autograd.hpp"

#include <cmath>
#include <limits>

#include "sovc/common/error.hpp"

namespace sovc::model {

namespace {

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;

void require(bool ok, const char* what) {
  if (!ok) throw ContractError(what);
}

}  // namespace

int Tape::push(Matrix value, bool needs_grad, std::function<void(Tape&, int)> back) {
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  if (needs_grad) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

const Matrix& Tape::val(int id) const {
  const auto& n = nodes_[static_cast<std::size_t>(id)];
  return n.external ? *n.external : n.value;
}

const Matrix& Tape::value(Var v) const { return val(v.id); }

bool Tape::has_grad(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].grad_set; }

Matrix Tape::grad(Var v) const {
  const auto& n = nodes_[static_cast<std::size_t>(v.id)];
  if (n.grad_set) return n.grad;
  const auto& x = val(v.id);
  return Matrix::Zero(x.rows(), x.cols());
}

void Tape::accumulate(int id, const Matrix& delta) {
  auto& n = nodes_[static_cast<std::size_t>(id)];
  if (!n.needs_grad) return;
  if (!n.grad_set) {
    n.grad = delta;
    n.grad_set = true;
  } else {
    n.grad += delta;
  }
}

Var Tape::constant(Matrix value) { return {push(std::move(value), false)}; }

Var Tape::parameter(const std::string& name, const Matrix& value, bool track) {
  int id = push(Matrix(), track);
  nodes_.back().external = &value;
  if (track) params_[name] = id;
  return {id};
}

Var Tape::matmul(Var a, Var b) {
  require(val(a.id).cols() == val(b.id).rows(), "matmul: inner dimensions differ");
  int ia = a.id, ib = b.id;
  return {push(val(ia) * val(ib), needs(ia) || needs(ib), [ia, ib](Tape& t, int self) {
            if (t.needs(ia)) t.accumulate(ia, t.g(self) * t.val(ib).transpose());
            if (t.needs(ib)) t.accumulate(ib, t.val(ia).transpose() * t.g(self));
          })};
}

Var Tape::matmul_nt(Var a, Var b) {
  require(val(a.id).cols() == val(b.id).cols(), "matmul_nt: column counts differ");
  int ia = a.id, ib = b.id;
  return {push(val(ia) * val(ib).transpose(), needs(ia) || needs(ib), [ia, ib](Tape& t, int self) {
            if (t.needs(ia)) t.accumulate(ia, t.g(self) * t.val(ib));
            if (t.needs(ib)) t.accumulate(ib, t.g(self).transpose() * t.val(ia));
          })};
}

Var Tape::add(Var a, Var b) {
  require(val(a.id).rows() == val(b.id).rows() && val(a.id).cols() == val(b.id).cols(),
          "add: shapes differ");
  int ia = a.id, ib = b.id;
  return {push(val(ia) + val(ib), needs(ia) || needs(ib), [ia, ib](Tape& t, int self) {
            t.accumulate(ia, t.g(self));
            t.accumulate(ib, t.g(self));
          })};
}

Var Tape::add_row(Var a, Var row) {
  require(val(row.id).rows() == 1 && val(row.id).cols() == val(a.id).cols(), "add_row: shape");
  int ia = a.id, ir = row.id;
  Matrix out = val(ia).rowwise() + val(ir).row(0);
  return {push(std::move(out), needs(ia) || needs(ir), [ia, ir](Tape& t, int self) {
            t.accumulate(ia, t.g(self));
            if (t.needs(ir)) t.accumulate(ir, t.g(self).colwise().sum());
          })};
}

Var Tape::scale(Var a, double s) {
  int ia = a.id;
  return {push(val(ia) * s, needs(ia), [ia, s](Tape& t, int self) { t.accumulate(ia, t.g(self) * s); })};
}

Var Tape::gelu(Var a) {
  int ia = a.id;
  Matrix out = val(ia).unaryExpr([](double x) {
    return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x)));
  });
  return {push(std::move(out), needs(ia), [ia](Tape& t, int self) {
            Matrix d = t.val(ia).unaryExpr([](double x) {
              double th = std::tanh(kGeluC * (x + kGeluA * x * x * x));
              return 0.5 * (1.0 + th) + 0.5 * x * (1.0 - th * th) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
            });
            t.accumulate(ia, t.g(self).cwiseProduct(d));
          })};
}

Var Tape::layer_norm(Var x, Var gain, Var bias, double eps) {
  const Matrix& xv = val(x.id);
  const auto d = xv.cols();
  require(val(gain.id).rows() == 1 && val(gain.id).cols() == d, "layer_norm: gain shape");
  require(val(bias.id).rows() == 1 && val(bias.id).cols() == d, "layer_norm: bias shape");
  Eigen::VectorXd mean = xv.rowwise().mean();
  Matrix centered = xv.colwise() - mean;
  Eigen::VectorXd inv_std =
      ((centered.array().square().rowwise().sum() / static_cast<double>(d)) + eps).rsqrt();
  Matrix xhat = centered.array().colwise() * inv_std.array();
  Matrix out = (xhat.array().rowwise() * val(gain.id).row(0).array()).rowwise() +
               val(bias.id).row(0).array();
  int ix = x.id, ig = gain.id, ib = bias.id;
  bool ng = needs(ix) || needs(ig) || needs(ib);
  return {push(std::move(out), ng, [ix, ig, ib, xhat, inv_std](Tape& t, int self) {
            const Matrix& dy = t.g(self);
            if (t.needs(ig)) t.accumulate(ig, dy.cwiseProduct(xhat).colwise().sum());
            if (t.needs(ib)) t.accumulate(ib, dy.colwise().sum());
            if (t.needs(ix)) {
              const double n = static_cast<double>(xhat.cols());
              Matrix dxhat = dy.array().rowwise() * t.val(ig).row(0).array();
              Eigen::VectorXd s1 = dxhat.rowwise().sum();
              Eigen::VectorXd s2 = dxhat.cwiseProduct(xhat).rowwise().sum();
              Matrix dx = (n * dxhat.array() - (xhat.array().colwise() * s2.array())).colwise() - s1.array();
              dx = dx.array().colwise() * (inv_std.array() / n);
              t.accumulate(ix, dx);
            }
          })};
}

Var Tape::softmax_rows(Var a, const RowMask* mask) {
  const Matrix& av = val(a.id);
  if (mask) require(mask->rows() == av.rows() && mask->cols() == av.cols(), "softmax_rows: mask shape");
  Matrix out = Matrix::Zero(av.rows(), av.cols());
  for (Eigen::Index i = 0; i < av.rows(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < av.cols(); ++j)
      if (!mask || (*mask)(i, j)) mx = std::max(mx, av(i, j));
    require(mx > -std::numeric_limits<double>::infinity(), "softmax_rows: fully masked row");
    double sum = 0;
    for (Eigen::Index j = 0; j < av.cols(); ++j)
      if (!mask || (*mask)(i, j)) sum += out(i, j) = std::exp(av(i, j) - mx);
    out.row(i) /= sum;
  }
  int ia = a.id;
  return {push(out, needs(ia), [ia](Tape& t, int self) {
            const Matrix& y = t.val(self);
            const Matrix& dy = t.g(self);
            Eigen::VectorXd dot = dy.cwiseProduct(y).rowwise().sum();
            t.accumulate(ia, y.cwiseProduct(dy.colwise() - dot));
          })};
}

Var Tape::slice_rows(Var a, int start, int count) {
  require(start >= 0 && count >= 0 && start + count <= val(a.id).rows(), "slice_rows: range");
  int ia = a.id;
  return {push(val(ia).middleRows(start, count), needs(ia), [ia, start, count](Tape& t, int self) {
            Matrix d = Matrix::Zero(t.val(ia).rows(), t.val(ia).cols());
            d.middleRows(start, count) = t.g(self);
            t.accumulate(ia, d);
          })};
}

Var Tape::slice_cols(Var a, int start, int count) {
  require(start >= 0 && count >= 0 && start + count <= val(a.id).cols(), "slice_cols: range");
  int ia = a.id;
  return {push(val(ia).middleCols(start, count), needs(ia), [ia, start, count](Tape& t, int self) {
            Matrix d = Matrix::Zero(t.val(ia).rows(), t.val(ia).cols());
            d.middleCols(start, count) = t.g(self);
            t.accumulate(ia, d);
          })};
}

Var Tape::concat_rows(const std::vector<Var>& parts) {
  require(!parts.empty(), "concat_rows: no parts");
  Eigen::Index rows = 0, cols = val(parts[0].id).cols();
  bool ng = false;
  for (auto p : parts) {
    require(val(p.id).cols() == cols, "concat_rows: column counts differ");
    rows += val(p.id).rows();
    ng = ng || needs(p.id);
  }
  Matrix out(rows, cols);
  Eigen::Index r = 0;
  for (auto p : parts) {
    out.middleRows(r, val(p.id).rows()) = val(p.id);
    r += val(p.id).rows();
  }
  return {push(std::move(out), ng, [parts](Tape& t, int self) {
            Eigen::Index r0 = 0;
            for (auto p : parts) {
              auto n = t.val(p.id).rows();
              if (t.needs(p.id)) t.accumulate(p.id, t.g(self).middleRows(r0, n));
              r0 += n;
            }
          })};
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  require(!parts.empty(), "concat_cols: no parts");
  Eigen::Index cols = 0, rows = val(parts[0].id).rows();
  bool ng = false;
  for (auto p : parts) {
    require(val(p.id).rows() == rows, "concat_cols: row counts differ");
    cols += val(p.id).cols();
    ng = ng || needs(p.id);
  }
  Matrix out(rows, cols);
  Eigen::Index c = 0;
  for (auto p : parts) {
    out.middleCols(c, val(p.id).cols()) = val(p.id);
    c += val(p.id).cols();
  }
  return {push(std::move(out), ng, [parts](Tape& t, int self) {
            Eigen::Index c0 = 0;
            for (auto p : parts) {
              auto n = t.val(p.id).cols();
              if (t.needs(p.id)) t.accumulate(p.id, t.g(self).middleCols(c0, n));
              c0 += n;
            }
          })};
}

Var Tape::gather_rows(Var table, const std::vector<int>& ids) {
  const Matrix& tv = val(table.id);
  Matrix out(static_cast<Eigen::Index>(ids.size()), tv.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    require(ids[i] >= 0 && ids[i] < tv.rows(), "gather_rows: id out of range");
    out.row(static_cast<Eigen::Index>(i)) = tv.row(ids[i]);
  }
  int it = table.id;
  return {push(std::move(out), needs(it), [it, ids](Tape& t, int self) {
            Matrix d = Matrix::Zero(t.val(it).rows(), t.val(it).cols());
            for (std::size_t i = 0; i < ids.size(); ++i) d.row(ids[i]) += t.g(self).row(static_cast<Eigen::Index>(i));
            t.accumulate(it, d);
          })};
}

Var Tape::cross_entropy_sum(Var logits, const std::vector<int>& targets) {
  const Matrix& lv = val(logits.id);
  require(static_cast<Eigen::Index>(targets.size()) == lv.rows(), "cross_entropy: one target per row");
  Matrix probs(lv.rows(), lv.cols());
  double loss = 0;
  for (Eigen::Index i = 0; i < lv.rows(); ++i) {
    double mx = lv.row(i).maxCoeff();
    double lse = mx + std::log((lv.row(i).array() - mx).exp().sum());
    probs.row(i) = (lv.row(i).array() - lse).exp();
    int tgt = targets[static_cast<std::size_t>(i)];
    if (tgt < 0) continue;
    require(tgt < lv.cols(), "cross_entropy: target out of range");
    loss += lse - lv(i, tgt);
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  int il = logits.id;
  return {push(std::move(out), needs(il), [il, targets, probs](Tape& t, int self) {
            Matrix d = probs;
            for (std::size_t i = 0; i < targets.size(); ++i) {
              auto r = static_cast<Eigen::Index>(i);
              if (targets[i] < 0) {
                d.row(r).setZero();
              } else {
                d(r, targets[i]) -= 1.0;
              }
            }
            t.accumulate(il, d * t.g(self)(0, 0));
          })};
}

void Tape::backward(Var loss) {
  const Matrix& lv = val(loss.id);
  require(lv.rows() == 1 && lv.cols() == 1, "backward: loss must be a scalar");
  backward(loss, Matrix::Ones(1, 1));
}

void Tape::backward(Var out, const Matrix& seed) {
  require(seed.rows() == val(out.id).rows() && seed.cols() == val(out.id).cols(), "backward: seed shape");
  accumulate(out.id, seed);
  for (int i = out.id; i >= 0; --i) {
    auto& n = nodes_[static_cast<std::size_t>(i)];
    if (n.grad_set && n.back) n.back(*this, i);
  }
}

std::map<std::string, Matrix> Tape::parameter_grads() const {
  std::map<std::string, Matrix> out;
  for (const auto& [name, id] : params_) out[name] = grad(Var{id});
  return out;
}

}  // namespace sovc::model
