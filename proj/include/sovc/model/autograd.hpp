#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sovc::model {

using Matrix = Eigen::MatrixXd;
using RowMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Var {
  int id = -1;
};

// Reverse-mode differentiation over dense double matrices. Every op appends a
// node; backward() walks the nodes in reverse creation order.
class Tape {
 public:
  /// Constant input; never receives a gradient.
  Var constant(Matrix value);
  /// Trainable leaf that references `value` without copying. `value` must
  /// outlive the tape.
  Var parameter(const std::string& name, const Matrix& value, bool track = true);

  const Matrix& value(Var v) const;
  /// Zero matrix of the right shape when nothing flowed into `v`.
  Matrix grad(Var v) const;
  bool has_grad(Var v) const;

  Var matmul(Var a, Var b);
  Var matmul_nt(Var a, Var b);  // a * b^T
  Var add(Var a, Var b);
  Var add_row(Var a, Var row);  // row (1 x n) broadcast over a's rows
  Var scale(Var a, double s);
  Var gelu(Var a);              // tanh approximation
  Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
  /// Row softmax over entries where mask is true; masked entries are exactly 0.
  Var softmax_rows(Var a, const RowMask* mask = nullptr);
  Var slice_rows(Var a, int start, int count);
  Var slice_cols(Var a, int start, int count);
  Var concat_rows(const std::vector<Var>& parts);
  Var concat_cols(const std::vector<Var>& parts);
  Var gather_rows(Var table, const std::vector<int>& ids);
  /// Sum over rows of -log softmax(logits)[target]; rows with target < 0 are skipped.
  Var cross_entropy_sum(Var logits, const std::vector<int>& targets);

  void backward(Var loss);
  /// Backpropagates an arbitrary upstream gradient `seed` (same shape as `out`).
  void backward(Var out, const Matrix& seed);

  /// Gradients of every tracked parameter, keyed by name.
  std::map<std::string, Matrix> parameter_grads() const;

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    const Matrix* external = nullptr;
    Matrix grad;
    bool needs_grad = false;
    bool grad_set = false;
    std::function<void(Tape&, int)> back;
  };

  int push(Matrix value, bool needs_grad, std::function<void(Tape&, int)> back = {});
  const Matrix& val(int id) const;
  bool needs(int id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }
  const Matrix& g(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
  void accumulate(int id, const Matrix& delta);

  std::vector<Node> nodes_;
  std::map<std::string, int> params_;
};

}  // namespace sovc::model
