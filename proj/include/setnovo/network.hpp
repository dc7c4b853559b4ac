#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "setnovo/autodiff.hpp"
#include "setnovo/chem.hpp"
#include "setnovo/features.hpp"
#include "setnovo/rng.hpp"
#include "setnovo/tensor.hpp"

namespace setnovo::nn {

struct ModelConfig {
  // Row-shared dense layers applied per peak, then max-pooled over the set.
  std::vector<std::size_t> conv_channels = {64, 128, 256};
  // Dense layers applied to the pooled vector.
  std::vector<std::size_t> fc_dims = {256, 128, 64};
  std::size_t d_lstm = 512;
  bool use_lstm = true;
  double focal_gamma = 2.0;

  std::size_t feat_dim() const { return features::kFeatureDim; }
  std::size_t vocab() const { return chem::kVocabSize; }
};

// One training batch, flattened spectrum-major then step-minor. Segment s of
// `x` (rows [starts[s], starts[s+1])) is the feature matrix of one
// (spectrum, step) pair; `targets[s]` is that step's true token. `prev` and
// `summary` group the decoder inputs per spectrum; the concatenation of all
// prev vectors aligns with the segment order.
struct BatchPlan {
  Tensor x;
  std::vector<std::size_t> starts{0};
  std::vector<int> targets;
  std::vector<std::vector<int>> prev;
  std::vector<Tensor> summary;

  std::size_t n_steps() const { return starts.size() - 1; }
};

// Decoder recurrent state for incremental stepping.
struct DecodeState {
  Tensor h;
  Tensor c;
};

class Model {
 public:
  explicit Model(ModelConfig cfg);

  const ModelConfig& config() const { return cfg_; }

  std::vector<std::pair<std::string, Tensor>>& params() { return params_; }
  const std::vector<std::pair<std::string, Tensor>>& params() const {
    return params_;
  }
  std::size_t param_count() const;

  // Xavier-uniform weights, zero biases except the LSTM forget gate at 1.
  void init_params(Rng& rng);

  // Builds the teacher-forced forward pass on the tape. Returns the logits
  // node, (n_steps, 26), and fills param_ids with the tape ids of params()
  // in order (for gradient readout).
  int forward(Tape& tape, const BatchPlan& plan,
              std::vector<int>* param_ids = nullptr) const;

  // Fresh decoder state for one spectrum (h = c = summary).
  DecodeState initial_state(const Tensor& summary) const;

  // One decoding step: consumes the previous token and candidate-enumerated
  // features, advances the state in place, returns logits (1, 26). Matches
  // the training forward bit for bit at equal inputs.
  Tensor step(const Tensor& feature_matrix, int prev_token,
              DecodeState& state) const;

  const Tensor& param(const std::string& name) const;
  Tensor& param(const std::string& name);

  struct ParamIds;

 private:
  int forward_impl(Tape& tape, const BatchPlan& plan,
                   std::vector<int>* out_ids) const;

  ModelConfig cfg_;
  std::vector<std::pair<std::string, Tensor>> params_;
};

}  // namespace setnovo::nn
