#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "setnovo/autodiff.hpp"
#include "setnovo/rng.hpp"

using namespace setnovo;
using nn::Tape;
using nn::Tensor;

namespace {

Tensor make(std::size_t r, std::size_t c, std::initializer_list<double> v) {
  Tensor t(r, c);
  std::copy(v.begin(), v.end(), t.data.begin());
  return t;
}

Tensor random_tensor(Rng& rng, std::size_t r, std::size_t c) {
  Tensor t(r, c);
  for (auto& x : t.data) x = rng.normal() * 0.7;
  return t;
}

using Builder = std::function<int(Tape&, const std::vector<int>&)>;

double eval_scalar(const std::vector<Tensor>& params, const Builder& build) {
  Tape t;
  std::vector<int> ids;
  ids.reserve(params.size());
  for (const auto& p : params) ids.push_back(t.leaf_ref(&p, true));
  return t.val(build(t, ids)).at(0, 0);
}

// Central-difference check of every element of every parameter.
void check_grads(std::vector<Tensor> params, const Builder& build,
                 double tol = 1e-6) {
  Tape t;
  std::vector<int> ids;
  for (const auto& p : params) ids.push_back(t.leaf_ref(&p, true));
  int loss = build(t, ids);
  t.backward(loss);

  std::vector<Tensor> grads;
  for (int id : ids) grads.push_back(t.grad(id));

  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    REQUIRE(grads[pi].same_shape(params[pi]));
    for (std::size_t e = 0; e < params[pi].size(); ++e) {
      double orig = params[pi].data[e];
      double h = 1e-5 * std::max(1.0, std::abs(orig));
      params[pi].data[e] = orig + h;
      double fp = eval_scalar(params, build);
      params[pi].data[e] = orig - h;
      double fm = eval_scalar(params, build);
      params[pi].data[e] = orig;
      double numeric = (fp - fm) / (2.0 * h);
      double analytic = grads[pi].data[e];
      double denom = std::max({1.0, std::abs(numeric), std::abs(analytic)});
      CHECK(std::abs(numeric - analytic) / denom < tol);
    }
  }
}

// Contract an (m,n) node to a scalar with fixed all-ones probes.
int contract(Tape& t, int node) {
  const Tensor& v = t.val(node);
  Tensor u(1, v.rows), w(v.cols, 1);
  for (std::size_t i = 0; i < v.rows; ++i) u.at(0, i) = 0.3 + 0.1 * i;
  for (std::size_t j = 0; j < v.cols; ++j) w.at(j, 0) = 0.5 - 0.07 * j;
  return t.matmul(t.matmul(t.leaf(u), node), t.leaf(w));
}

}  // namespace

TEST_CASE("forward values of elementwise ops") {
  Tape t;
  int a = t.leaf(make(2, 2, {1, -2, 3, 0}));
  int b = t.leaf(make(2, 2, {5, 6, 7, 8}));
  CHECK(t.val(t.add(a, b)) == make(2, 2, {6, 4, 10, 8}));
  CHECK(t.val(t.mul(a, b)) == make(2, 2, {5, -12, 21, 0}));
  CHECK(t.val(t.relu(a)) == make(2, 2, {1, 0, 3, 0}));

  int s = t.sigmoid(t.leaf(make(1, 1, {0.0})));
  CHECK(t.val(s).at(0, 0) == 0.5);
  int th = t.tanh(t.leaf(make(1, 2, {0.0, 1.0})));
  CHECK(t.val(th).at(0, 0) == 0.0);
  CHECK(std::abs(t.val(th).at(0, 1) - std::tanh(1.0)) < 1e-15);
}

TEST_CASE("forward values of shape ops") {
  Tape t;
  int a = t.leaf(make(2, 2, {1, 2, 3, 4}));
  int b = t.leaf(make(2, 1, {9, 8}));
  CHECK(t.val(t.concat_cols(a, b)) == make(2, 3, {1, 2, 9, 3, 4, 8}));
  CHECK(t.val(t.slice_cols(a, 1, 2)) == make(2, 1, {2, 4}));
  CHECK(t.val(t.concat_rows({a, a})) == make(4, 2, {1, 2, 3, 4, 1, 2, 3, 4}));

  int brd = t.add_row_broadcast(a, t.leaf(make(1, 2, {10, 20})));
  CHECK(t.val(brd) == make(2, 2, {11, 22, 13, 24}));

  int emb = t.embedding(t.leaf(make(3, 2, {0, 1, 10, 11, 20, 21})), {2, 0, 2});
  CHECK(t.val(emb) == make(3, 2, {20, 21, 0, 1, 20, 21}));
}

TEST_CASE("segment_max forward and tie routing") {
  Tape t;
  Tensor a = make(5, 2, {1, 5,   //
                         1, 4,   //
                         0, 0,   //
                         7, -1,  //
                         7, 2});
  int ai = t.leaf_ref(&a, true);
  int sm = t.segment_max(ai, {0, 2, 5});
  CHECK(t.val(sm) == make(2, 2, {1, 5, 7, 2}));

  int loss = t.matmul(t.leaf(make(1, 2, {1, 1})),
                      t.matmul(sm, t.leaf(make(2, 1, {1, 1}))));
  t.backward(loss);
  // ties go to the first row of the segment
  CHECK(t.grad(ai) == make(5, 2, {1, 1,  //
                                  0, 0,  //
                                  0, 0,  //
                                  1, 0,  //
                                  0, 1}));
}

TEST_CASE("focal loss forward values") {
  {
    Tape t;
    int logits = t.leaf(make(1, 3, {0, 0, 0}));
    int l = t.focal_loss(logits, {1}, 0.0);
    CHECK(std::abs(t.val(l).at(0, 0) - std::log(3.0)) < 1e-15);
  }
  {
    // softmax of (log 3, 0) is (0.75, 0.25)
    Tape t;
    int logits = t.leaf(make(1, 2, {std::log(3.0), 0.0}));
    int l = t.focal_loss(logits, {0}, 2.0);
    double want = -0.0625 * std::log(0.75);
    CHECK(std::abs(t.val(l).at(0, 0) - want) < 1e-15);
  }
  {
    // mean over rows
    Tape t;
    int logits = t.leaf(make(2, 2, {0, 0, 0, 0}));
    int l = t.focal_loss(logits, {0, 1}, 0.0);
    CHECK(std::abs(t.val(l).at(0, 0) - std::log(2.0)) < 1e-15);
  }
}

TEST_CASE("log_softmax") {
  double logits[] = {1.0, 2.0, 3.0};
  auto ls = nn::log_softmax(logits, 3);
  double z = std::exp(0.0) + std::exp(-1.0) + std::exp(-2.0);
  CHECK(std::abs(ls[2] - (-std::log(z))) < 1e-15);
  double total = 0.0;
  for (double v : ls) total += std::exp(v);
  CHECK(std::abs(total - 1.0) < 1e-12);

  // shift invariance
  double shifted[] = {101.0, 102.0, 103.0};
  auto ls2 = nn::log_softmax(shifted, 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(ls[i] - ls2[i]) < 1e-12);

  // huge values do not overflow the sum
  double big[] = {1e306, -1e306, 0.0};
  auto ls3 = nn::log_softmax(big, 3);
  CHECK(ls3[0] == 0.0);
  CHECK(ls3[1] == -2e306);
}

TEST_CASE("gradcheck matmul chain") {
  Rng rng(3);
  check_grads({random_tensor(rng, 3, 4), random_tensor(rng, 4, 2)},
              [](Tape& t, const std::vector<int>& p) {
                return contract(t, t.matmul(p[0], p[1]));
              });
}

TEST_CASE("gradcheck add and mul with shared operand") {
  Rng rng(4);
  check_grads({random_tensor(rng, 2, 3), random_tensor(rng, 2, 3)},
              [](Tape& t, const std::vector<int>& p) {
                return contract(t, t.add(t.mul(p[0], p[1]), p[0]));
              });
}

TEST_CASE("gradcheck row broadcast") {
  Rng rng(5);
  check_grads({random_tensor(rng, 4, 3), random_tensor(rng, 1, 3)},
              [](Tape& t, const std::vector<int>& p) {
                return contract(t, t.add_row_broadcast(p[0], p[1]));
              });
}

TEST_CASE("gradcheck activations") {
  Rng rng(6);
  Tensor a = random_tensor(rng, 3, 3);
  for (auto& x : a.data)
    if (std::abs(x) < 0.05) x = 0.3;  // keep relu away from its kink
  check_grads({a}, [](Tape& t, const std::vector<int>& p) {
    return contract(t, t.relu(p[0]));
  });
  check_grads({a}, [](Tape& t, const std::vector<int>& p) {
    return contract(t, t.sigmoid(p[0]));
  });
  check_grads({a}, [](Tape& t, const std::vector<int>& p) {
    return contract(t, t.tanh(p[0]));
  });
}

TEST_CASE("gradcheck concat and slice") {
  Rng rng(7);
  check_grads({random_tensor(rng, 2, 3), random_tensor(rng, 2, 2)},
              [](Tape& t, const std::vector<int>& p) {
                int cc = t.concat_cols(p[0], p[1]);
                return contract(t, t.slice_cols(cc, 1, 4));
              });
  check_grads({random_tensor(rng, 2, 3), random_tensor(rng, 1, 3)},
              [](Tape& t, const std::vector<int>& p) {
                return contract(t, t.concat_rows({p[0], p[1], p[0]}));
              });
}

TEST_CASE("gradcheck segment_max") {
  Rng rng(8);
  Tensor a(6, 3);
  // well-separated entries so the argmax is stable under the probe step
  for (std::size_t e = 0; e < a.size(); ++e)
    a.data[e] = 0.01 * static_cast<double>((e * 7919) % 97);
  check_grads({a}, [](Tape& t, const std::vector<int>& p) {
    return contract(t, t.segment_max(p[0], {0, 1, 4, 6}));
  });
}

TEST_CASE("gradcheck embedding with repeated indices") {
  Rng rng(9);
  check_grads({random_tensor(rng, 4, 3)},
              [](Tape& t, const std::vector<int>& p) {
                return contract(t, t.embedding(p[0], {1, 3, 1, 1, 0}));
              });
}

TEST_CASE("gradcheck focal loss") {
  Rng rng(10);
  for (double gamma : {0.0, 1.0, 2.0}) {
    check_grads({random_tensor(rng, 4, 5)},
                [gamma](Tape& t, const std::vector<int>& p) {
                  return t.focal_loss(p[0], {0, 3, 2, 2}, gamma);
                });
  }
}

TEST_CASE("gradcheck small composed network") {
  Rng rng(11);
  check_grads(
      {random_tensor(rng, 3, 4), random_tensor(rng, 4, 5),
       random_tensor(rng, 1, 5), random_tensor(rng, 5, 3)},
      [](Tape& t, const std::vector<int>& p) {
        int h = t.sigmoid(t.add_row_broadcast(t.matmul(p[0], p[1]), p[2]));
        int logits = t.matmul(h, p[3]);
        return t.focal_loss(logits, {2, 0, 1}, 2.0);
      });
}

TEST_CASE("gradients accumulate across tape reuse of a node") {
  Tape t;
  Tensor a = make(1, 1, {3.0});
  int ai = t.leaf_ref(&a, true);
  int sq = t.mul(ai, ai);
  t.backward(sq);
  CHECK(t.grad(ai).at(0, 0) == 6.0);
}

TEST_CASE("shape violations throw") {
  Tape t;
  int a = t.leaf(make(2, 3, {1, 2, 3, 4, 5, 6}));
  int b = t.leaf(make(2, 2, {1, 2, 3, 4}));
  CHECK_THROWS_AS(t.matmul(a, b), std::invalid_argument);
  CHECK_THROWS_AS(t.add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(t.backward(a), std::invalid_argument);
}
