#include "setnovo/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "setnovo/kernels.hpp"

namespace setnovo::nn {

using kernels::active_table;

int Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

const Tensor& Tape::val(int id) const { return nodes_.at(id).v(); }

const Tensor& Tape::grad(int id) const {
  const Node& n = nodes_.at(id);
  if (n.grad.empty())
    throw std::logic_error("no gradient recorded for this node");
  return n.grad;
}

Tensor& Tape::grad_buf(int id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor(n.v().rows, n.v().cols);
  return n.grad;
}

int Tape::leaf(Tensor value, bool needs_grad) {
  Node n;
  n.op = Op::Leaf;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  return push(std::move(n));
}

int Tape::leaf_ref(const Tensor* value, bool needs_grad) {
  Node n;
  n.op = Op::Leaf;
  n.ref = value;
  n.needs_grad = needs_grad;
  return push(std::move(n));
}

int Tape::matmul(int a, int b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_shape(A.cols == B.rows, "matmul: inner dimensions differ");
  Node n;
  n.op = Op::MatMul;
  n.a = a;
  n.b = b;
  n.value = Tensor(A.rows, B.cols);
  active_table().matmul(A.data.data(), B.data.data(), n.value.data.data(),
                        A.rows, A.cols, B.cols);
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

int Tape::add(int a, int b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_shape(A.same_shape(B), "add: shape mismatch");
  Node n;
  n.op = Op::Add;
  n.a = a;
  n.b = b;
  n.value = A;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data[i] += B.data[i];
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

int Tape::mul(int a, int b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_shape(A.same_shape(B), "mul: shape mismatch");
  Node n;
  n.op = Op::Mul;
  n.a = a;
  n.b = b;
  n.value = A;
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value.data[i] *= B.data[i];
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

int Tape::add_row_broadcast(int a, int b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_shape(B.rows == 1 && B.cols == A.cols,
              "add_row_broadcast: bias must be (1, cols)");
  Node n;
  n.op = Op::AddRowBroadcast;
  n.a = a;
  n.b = b;
  n.value = A;
  for (std::size_t i = 0; i < A.rows; ++i) {
    double* r = n.value.row(i);
    for (std::size_t j = 0; j < A.cols; ++j) r[j] += B.data[j];
  }
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

int Tape::relu(int a) {
  const Tensor& A = val(a);
  Node n;
  n.op = Op::Relu;
  n.a = a;
  n.value = A;
  for (double& x : n.value.data)
    if (x < 0.0) x = 0.0;
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

int Tape::sigmoid(int a) {
  const Tensor& A = val(a);
  Node n;
  n.op = Op::Sigmoid;
  n.a = a;
  n.value = A;
  for (double& x : n.value.data) x = 1.0 / (1.0 + std::exp(-x));
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

int Tape::tanh(int a) {
  const Tensor& A = val(a);
  Node n;
  n.op = Op::Tanh;
  n.a = a;
  n.value = A;
  for (double& x : n.value.data) x = std::tanh(x);
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

int Tape::concat_cols(int a, int b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_shape(A.rows == B.rows, "concat_cols: row counts differ");
  Node n;
  n.op = Op::ConcatCols;
  n.a = a;
  n.b = b;
  n.value = Tensor(A.rows, A.cols + B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    std::copy(A.row(i), A.row(i) + A.cols, n.value.row(i));
    std::copy(B.row(i), B.row(i) + B.cols, n.value.row(i) + A.cols);
  }
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

int Tape::slice_cols(int a, std::size_t j0, std::size_t j1) {
  const Tensor& A = val(a);
  check_shape(j0 < j1 && j1 <= A.cols, "slice_cols: bad range");
  Node n;
  n.op = Op::SliceCols;
  n.a = a;
  n.j0 = j0;
  n.j1 = j1;
  n.value = Tensor(A.rows, j1 - j0);
  for (std::size_t i = 0; i < A.rows; ++i)
    std::copy(A.row(i) + j0, A.row(i) + j1, n.value.row(i));
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

int Tape::concat_rows(const std::vector<int>& parts) {
  check_shape(!parts.empty(), "concat_rows: no parts");
  std::size_t cols = val(parts[0]).cols;
  std::size_t rows = 0;
  for (int p : parts) {
    check_shape(val(p).cols == cols, "concat_rows: column counts differ");
    rows += val(p).rows;
  }
  Node n;
  n.op = Op::ConcatRows;
  n.srcs = parts;
  n.value = Tensor(rows, cols);
  std::size_t r = 0;
  for (int p : parts) {
    const Tensor& P = val(p);
    std::copy(P.data.begin(), P.data.end(), n.value.row(r));
    r += P.rows;
    n.needs_grad = n.needs_grad || nodes_[p].needs_grad;
  }
  return push(std::move(n));
}

int Tape::segment_max(int a, std::vector<std::size_t> starts) {
  const Tensor& A = val(a);
  check_shape(starts.size() >= 2 && starts.front() == 0 &&
                  starts.back() == A.rows,
              "segment_max: starts must span all rows");
  std::size_t s_count = starts.size() - 1;
  Node n;
  n.op = Op::SegmentMax;
  n.a = a;
  n.value = Tensor(s_count, A.cols);
  n.argmax.resize(s_count * A.cols);
  for (std::size_t s = 0; s < s_count; ++s) {
    std::size_t r0 = starts[s], r1 = starts[s + 1];
    check_shape(r1 > r0, "segment_max: empty segment");
    std::vector<std::size_t> local(A.cols);
    active_table().colwise_max(A.row(r0), n.value.row(s), local.data(),
                               r1 - r0, A.cols);
    for (std::size_t j = 0; j < A.cols; ++j)
      n.argmax[s * A.cols + j] = r0 + local[j];
  }
  n.starts = std::move(starts);
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

int Tape::embedding(int table, std::vector<int> indices) {
  const Tensor& T = val(table);
  Node n;
  n.op = Op::Embedding;
  n.a = table;
  n.value = Tensor(indices.size(), T.cols);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    int ix = indices[r];
    check_shape(ix >= 0 && static_cast<std::size_t>(ix) < T.rows,
                "embedding: index out of range");
    std::copy(T.row(ix), T.row(ix) + T.cols, n.value.row(r));
  }
  n.indices = std::move(indices);
  n.needs_grad = nodes_[table].needs_grad;
  return push(std::move(n));
}

int Tape::focal_loss(int logits, std::vector<int> targets, double gamma) {
  const Tensor& Z = val(logits);
  check_shape(targets.size() == Z.rows, "focal_loss: one target per row");
  check_shape(gamma >= 0.0, "focal_loss: gamma must be nonnegative");
  Node n;
  n.op = Op::FocalLoss;
  n.a = logits;
  n.gamma = gamma;
  n.probs = Tensor(Z.rows, Z.cols);
  double total = 0.0;
  for (std::size_t r = 0; r < Z.rows; ++r) {
    int t = targets[r];
    check_shape(t >= 0 && static_cast<std::size_t>(t) < Z.cols,
                "focal_loss: target out of range");
    const double* z = Z.row(r);
    double zmax = *std::max_element(z, z + Z.cols);
    double sum = 0.0;
    double* p = n.probs.row(r);
    for (std::size_t j = 0; j < Z.cols; ++j) {
      p[j] = std::exp(z[j] - zmax);
      sum += p[j];
    }
    for (std::size_t j = 0; j < Z.cols; ++j) p[j] /= sum;
    double pt = p[t];
    double s = std::log(std::max(pt, 1e-300));
    double q = 1.0 - pt;
    total += -std::pow(q, gamma) * s;
  }
  n.indices = std::move(targets);
  n.value = Tensor(1, 1);
  n.value.data[0] = total / static_cast<double>(Z.rows);
  n.needs_grad = nodes_[logits].needs_grad;
  return push(std::move(n));
}

void Tape::backward(int loss_id) {
  const Tensor& L = val(loss_id);
  check_shape(L.rows == 1 && L.cols == 1, "backward: loss must be scalar");
  grad_buf(loss_id).data[0] = 1.0;
  for (int id = loss_id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.grad.empty()) continue;
    backward_node(id);
  }
}

void Tape::backward_node(int id) {
  Node& n = nodes_[id];
  const Tensor& g = n.grad;
  auto want = [&](int src) { return src >= 0 && nodes_[src].needs_grad; };

  switch (n.op) {
    case Op::Leaf:
      break;

    case Op::MatMul: {
      const Tensor& A = val(n.a);
      const Tensor& B = val(n.b);
      if (want(n.a)) {
        Tensor tmp(A.rows, A.cols);
        active_table().matmul_nt(g.data.data(), B.data.data(), tmp.data.data(),
                                 A.rows, B.cols, A.cols);
        active_table().axpy(1.0, tmp.data.data(), grad_buf(n.a).data.data(),
                            tmp.size());
      }
      if (want(n.b)) {
        Tensor tmp(B.rows, B.cols);
        active_table().matmul_tn(A.data.data(), g.data.data(), tmp.data.data(),
                                 A.cols, A.rows, B.cols);
        active_table().axpy(1.0, tmp.data.data(), grad_buf(n.b).data.data(),
                            tmp.size());
      }
      break;
    }

    case Op::Add:
      if (want(n.a))
        active_table().axpy(1.0, g.data.data(), grad_buf(n.a).data.data(),
                            g.size());
      if (want(n.b))
        active_table().axpy(1.0, g.data.data(), grad_buf(n.b).data.data(),
                            g.size());
      break;

    case Op::Mul: {
      const Tensor& A = val(n.a);
      const Tensor& B = val(n.b);
      if (want(n.a)) {
        Tensor& ga = grad_buf(n.a);
        for (std::size_t i = 0; i < g.size(); ++i)
          ga.data[i] += g.data[i] * B.data[i];
      }
      if (want(n.b)) {
        Tensor& gb = grad_buf(n.b);
        for (std::size_t i = 0; i < g.size(); ++i)
          gb.data[i] += g.data[i] * A.data[i];
      }
      break;
    }

    case Op::AddRowBroadcast: {
      if (want(n.a))
        active_table().axpy(1.0, g.data.data(), grad_buf(n.a).data.data(),
                            g.size());
      if (want(n.b)) {
        Tensor& gb = grad_buf(n.b);
        for (std::size_t i = 0; i < g.rows; ++i)
          active_table().axpy(1.0, g.row(i), gb.data.data(), g.cols);
      }
      break;
    }

    case Op::Relu: {
      if (want(n.a)) {
        const Tensor& A = val(n.a);
        Tensor& ga = grad_buf(n.a);
        for (std::size_t i = 0; i < g.size(); ++i)
          if (A.data[i] > 0.0) ga.data[i] += g.data[i];
      }
      break;
    }

    case Op::Sigmoid: {
      if (want(n.a)) {
        Tensor& ga = grad_buf(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) {
          double y = n.value.data[i];
          ga.data[i] += g.data[i] * y * (1.0 - y);
        }
      }
      break;
    }

    case Op::Tanh: {
      if (want(n.a)) {
        Tensor& ga = grad_buf(n.a);
        for (std::size_t i = 0; i < g.size(); ++i) {
          double y = n.value.data[i];
          ga.data[i] += g.data[i] * (1.0 - y * y);
        }
      }
      break;
    }

    case Op::ConcatCols: {
      const Tensor& A = val(n.a);
      const Tensor& B = val(n.b);
      if (want(n.a)) {
        Tensor& ga = grad_buf(n.a);
        for (std::size_t i = 0; i < A.rows; ++i)
          active_table().axpy(1.0, g.row(i), ga.row(i), A.cols);
      }
      if (want(n.b)) {
        Tensor& gb = grad_buf(n.b);
        for (std::size_t i = 0; i < B.rows; ++i)
          active_table().axpy(1.0, g.row(i) + A.cols, gb.row(i), B.cols);
      }
      break;
    }

    case Op::SliceCols: {
      if (want(n.a)) {
        Tensor& ga = grad_buf(n.a);
        for (std::size_t i = 0; i < g.rows; ++i)
          active_table().axpy(1.0, g.row(i), ga.row(i) + n.j0, g.cols);
      }
      break;
    }

    case Op::ConcatRows: {
      std::size_t r = 0;
      for (int p : n.srcs) {
        const Tensor& P = val(p);
        if (want(p))
          active_table().axpy(1.0, g.row(r), grad_buf(p).data.data(),
                              P.size());
        r += P.rows;
      }
      break;
    }

    case Op::SegmentMax: {
      if (want(n.a)) {
        Tensor& ga = grad_buf(n.a);
        std::size_t s_count = n.value.rows;
        for (std::size_t s = 0; s < s_count; ++s)
          for (std::size_t j = 0; j < n.value.cols; ++j)
            ga.at(n.argmax[s * n.value.cols + j], j) += g.at(s, j);
      }
      break;
    }

    case Op::Embedding: {
      if (want(n.a)) {
        Tensor& gt = grad_buf(n.a);
        for (std::size_t r = 0; r < n.indices.size(); ++r)
          active_table().axpy(1.0, g.row(r), gt.row(n.indices[r]), gt.cols);
      }
      break;
    }

    case Op::FocalLoss: {
      if (want(n.a)) {
        Tensor& gz = grad_buf(n.a);
        double upstream = g.data[0] / static_cast<double>(n.probs.rows);
        for (std::size_t r = 0; r < n.probs.rows; ++r) {
          int t = n.indices[r];
          const double* p = n.probs.row(r);
          double pt = p[t];
          double q = 1.0 - pt;
          double s = std::log(std::max(pt, 1e-300));
          double coeff;
          if (n.gamma == 0.0) {
            coeff = -1.0;
          } else if (q <= 0.0) {
            coeff = 0.0;
          } else {
            coeff = n.gamma * pt * s * std::pow(q, n.gamma - 1.0) -
                    std::pow(q, n.gamma);
          }
          double* gr = gz.row(r);
          for (std::size_t j = 0; j < n.probs.cols; ++j) {
            double delta = (static_cast<int>(j) == t) ? 1.0 : 0.0;
            gr[j] += upstream * coeff * (delta - p[j]);
          }
        }
      }
      break;
    }
  }
}

std::vector<double> log_softmax(const double* logits, std::size_t n) {
  double zmax = *std::max_element(logits, logits + n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += std::exp(logits[j] - zmax);
  double lse = zmax + std::log(sum);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = logits[j] - lse;
  return out;
}

}  // namespace setnovo::nn
