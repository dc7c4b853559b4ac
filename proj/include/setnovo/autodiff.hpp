#pragma once

#include <cstddef>
#include <vector>

#include "setnovo/tensor.hpp"

namespace setnovo::nn {

// Tape-based reverse-mode autodiff. A Tape is built fresh for each forward
// pass; ops append nodes and return integer node ids. backward() runs the
// tape in reverse and accumulates gradients for every node that (transitively)
// depends on a gradient-tracked leaf.
//
// Parameter tensors are registered with leaf_ref and are not copied; the
// caller keeps them alive for the lifetime of the tape and reads their
// gradients back out of the tape afterwards.
class Tape {
 public:
  int leaf(Tensor value, bool needs_grad = false);
  int leaf_ref(const Tensor* value, bool needs_grad = true);

  // c (m,n) = a (m,k) * b (k,n)
  int matmul(int a, int b);
  // elementwise, same shape
  int add(int a, int b);
  int mul(int a, int b);
  // a (m,n) + b (1,n), broadcast over rows
  int add_row_broadcast(int a, int b);
  int relu(int a);
  int sigmoid(int a);
  int tanh(int a);
  // (m,n1),(m,n2) -> (m,n1+n2)
  int concat_cols(int a, int b);
  // columns [j0, j1)
  int slice_cols(int a, std::size_t j0, std::size_t j1);
  // stack parts with equal column counts
  int concat_rows(const std::vector<int>& parts);
  // starts has S+1 entries delimiting S contiguous row segments of a;
  // output (S, n) holds the per-segment column max (first row on ties)
  int segment_max(int a, std::vector<std::size_t> starts);
  // table (V,d), out (indices.size(), d)
  int embedding(int table, std::vector<int> indices);
  // logits (m, V); mean over rows of -(1-p_t)^gamma * log(p_t).
  // gamma == 0 reduces exactly to cross entropy.
  int focal_loss(int logits, std::vector<int> targets, double gamma);

  const Tensor& val(int id) const;
  const Tensor& grad(int id) const;
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Seeds d(loss)/d(loss) = 1 and propagates. loss must be (1,1).
  void backward(int loss_id);

 private:
  enum class Op {
    Leaf,
    MatMul,
    Add,
    Mul,
    AddRowBroadcast,
    Relu,
    Sigmoid,
    Tanh,
    ConcatCols,
    SliceCols,
    ConcatRows,
    SegmentMax,
    Embedding,
    FocalLoss,
  };

  struct Node {
    Op op = Op::Leaf;
    int a = -1;
    int b = -1;
    std::vector<int> srcs;
    Tensor value;
    const Tensor* ref = nullptr;
    Tensor grad;
    bool needs_grad = false;

    std::size_t j0 = 0, j1 = 0;
    std::vector<std::size_t> starts;
    std::vector<std::size_t> argmax;
    std::vector<int> indices;
    Tensor probs;
    double gamma = 0.0;

    const Tensor& v() const { return ref ? *ref : value; }
  };

  int push(Node n);
  Tensor& grad_buf(int id);
  void backward_node(int id);

  std::vector<Node> nodes_;
};

// Numerically stable log-softmax of one row; used by decoding, which scores
// against the full distribution and never renormalizes after masking.
std::vector<double> log_softmax(const double* logits, std::size_t n);

}  // namespace setnovo::nn
