#include "setnovo/network.hpp"

#include <cmath>
#include <stdexcept>

namespace setnovo::nn {

namespace {

Tensor xavier(std::size_t rows, std::size_t cols, Rng& rng) {
  Tensor t(rows, cols);
  double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  for (double& x : t.data) x = rng.uniform(-limit, limit);
  return t;
}

}  // namespace

// Tape-bound parameter ids, addressable by name.
struct Model::ParamIds {
  const std::vector<std::pair<std::string, Tensor>>* params;
  std::vector<int> ids;

  ParamIds(const Model& m, Tape& tape, bool needs_grad)
      : params(&m.params_) {
    ids.reserve(params->size());
    for (const auto& [name, t] : *params)
      ids.push_back(tape.leaf_ref(&t, needs_grad));
  }

  int operator()(const std::string& name) const {
    for (std::size_t i = 0; i < params->size(); ++i)
      if ((*params)[i].first == name) return ids[i];
    throw std::invalid_argument("no such parameter: " + name);
  }
};

Model::Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
  check_shape(!cfg_.conv_channels.empty(), "model: no conv layers");
  check_shape(!cfg_.fc_dims.empty(), "model: no fc layers");
  check_shape(!cfg_.use_lstm || cfg_.d_lstm % 2 == 0,
              "model: d_lstm must be even");

  std::size_t in = cfg_.feat_dim();
  for (std::size_t i = 0; i < cfg_.conv_channels.size(); ++i) {
    std::size_t out = cfg_.conv_channels[i];
    params_.emplace_back("tnet.conv" + std::to_string(i) + ".w",
                         Tensor(in, out));
    params_.emplace_back("tnet.conv" + std::to_string(i) + ".b",
                         Tensor(1, out));
    in = out;
  }
  for (std::size_t i = 0; i < cfg_.fc_dims.size(); ++i) {
    std::size_t out = cfg_.fc_dims[i];
    params_.emplace_back("tnet.fc" + std::to_string(i) + ".w", Tensor(in, out));
    params_.emplace_back("tnet.fc" + std::to_string(i) + ".b", Tensor(1, out));
    in = out;
  }

  std::size_t fused = cfg_.fc_dims.back();
  if (cfg_.use_lstm) {
    std::size_t d = cfg_.d_lstm;
    params_.emplace_back("emb.table", Tensor(cfg_.vocab(), d));
    params_.emplace_back("lstm.w_ih", Tensor(d, 4 * d));
    params_.emplace_back("lstm.w_hh", Tensor(d, 4 * d));
    params_.emplace_back("lstm.b", Tensor(1, 4 * d));
    fused += d;
  }
  params_.emplace_back("out.w", Tensor(fused, cfg_.vocab()));
  params_.emplace_back("out.b", Tensor(1, cfg_.vocab()));
}

std::size_t Model::param_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += t.size();
  return n;
}

void Model::init_params(Rng& rng) {
  for (auto& [name, t] : params_) {
    if (name.ends_with(".b")) {
      t.fill(0.0);
    } else {
      t = xavier(t.rows, t.cols, rng);
    }
  }
  if (cfg_.use_lstm) {
    // forget gate bias starts open
    Tensor& b = param("lstm.b");
    std::size_t d = cfg_.d_lstm;
    for (std::size_t j = d; j < 2 * d; ++j) b.data[j] = 1.0;
  }
}

const Tensor& Model::param(const std::string& name) const {
  for (const auto& [n, t] : params_)
    if (n == name) return t;
  throw std::invalid_argument("no such parameter: " + name);
}

Tensor& Model::param(const std::string& name) {
  for (auto& [n, t] : params_)
    if (n == name) return t;
  throw std::invalid_argument("no such parameter: " + name);
}

namespace {

// Row-shared dense stack, set pooling, then the fc stack.
int tnet_forward(Tape& tape, const Model::ParamIds& p, const ModelConfig& cfg,
                 int x, std::vector<std::size_t> starts) {
  int h = x;
  for (std::size_t i = 0; i < cfg.conv_channels.size(); ++i) {
    std::string base = "tnet.conv" + std::to_string(i);
    h = tape.relu(tape.add_row_broadcast(tape.matmul(h, p(base + ".w")),
                                         p(base + ".b")));
  }
  int pooled = tape.segment_max(h, std::move(starts));
  for (std::size_t i = 0; i < cfg.fc_dims.size(); ++i) {
    std::string base = "tnet.fc" + std::to_string(i);
    pooled = tape.relu(tape.add_row_broadcast(
        tape.matmul(pooled, p(base + ".w")), p(base + ".b")));
  }
  return pooled;
}

struct CellOut {
  int h;
  int c;
};

CellOut lstm_cell(Tape& tape, const Model::ParamIds& p, std::size_t d,
                  int token, int hprev, int cprev) {
  int x = tape.embedding(p("emb.table"), {token});
  int gates = tape.add_row_broadcast(
      tape.add(tape.matmul(x, p("lstm.w_ih")),
               tape.matmul(hprev, p("lstm.w_hh"))),
      p("lstm.b"));
  int ig = tape.sigmoid(tape.slice_cols(gates, 0, d));
  int fg = tape.sigmoid(tape.slice_cols(gates, d, 2 * d));
  int gg = tape.tanh(tape.slice_cols(gates, 2 * d, 3 * d));
  int og = tape.sigmoid(tape.slice_cols(gates, 3 * d, 4 * d));
  int c = tape.add(tape.mul(fg, cprev), tape.mul(ig, gg));
  int h = tape.mul(og, tape.tanh(c));
  return {h, c};
}

int head(Tape& tape, const Model::ParamIds& p, int fused) {
  return tape.add_row_broadcast(tape.matmul(fused, p("out.w")), p("out.b"));
}

}  // namespace

int Model::forward(Tape& tape, const BatchPlan& plan,
                   std::vector<int>* param_ids) const {
  return forward_impl(tape, plan, param_ids);
}

int Model::forward_impl(Tape& tape, const BatchPlan& plan,
                        std::vector<int>* out_ids) const {
  check_shape(plan.starts.size() >= 2, "forward: empty batch");
  std::size_t n_steps = plan.n_steps();
  if (cfg_.use_lstm) {
    check_shape(plan.summary.size() == plan.prev.size(),
                "forward: summary/prev size mismatch");
    std::size_t prev_total = 0;
    for (const auto& pv : plan.prev) prev_total += pv.size();
    check_shape(prev_total == n_steps,
                "forward: prev tokens do not cover all steps");
  }

  ParamIds p(*this, tape, true);
  int x = tape.leaf(plan.x, false);
  int pooled = tnet_forward(tape, p, cfg_, x, plan.starts);

  int fused = pooled;
  if (cfg_.use_lstm) {
    std::size_t d = cfg_.d_lstm;
    std::vector<int> hs;
    hs.reserve(n_steps);
    for (std::size_t b = 0; b < plan.prev.size(); ++b) {
      const Tensor& s = plan.summary[b];
      check_shape(s.rows == 1 && s.cols == d, "forward: bad summary shape");
      int hprev = tape.leaf(s, false);
      int cprev = tape.leaf(s, false);
      for (int tok : plan.prev[b]) {
        CellOut out = lstm_cell(tape, p, d, tok, hprev, cprev);
        hs.push_back(out.h);
        hprev = out.h;
        cprev = out.c;
      }
    }
    fused = tape.concat_cols(pooled, tape.concat_rows(hs));
  }

  int logits = head(tape, p, fused);
  if (out_ids) *out_ids = p.ids;
  return logits;
}

DecodeState Model::initial_state(const Tensor& summary) const {
  check_shape(!cfg_.use_lstm ||
                  (summary.rows == 1 && summary.cols == cfg_.d_lstm),
              "initial_state: bad summary shape");
  return DecodeState{summary, summary};
}

Tensor Model::step(const Tensor& feature_matrix, int prev_token,
                   DecodeState& state) const {
  Tape tape;
  ParamIds p(*this, tape, false);
  int x = tape.leaf(feature_matrix, false);
  int pooled = tnet_forward(tape, p, cfg_, x, {0, feature_matrix.rows});

  int fused = pooled;
  if (cfg_.use_lstm) {
    int hprev = tape.leaf(state.h, false);
    int cprev = tape.leaf(state.c, false);
    CellOut out = lstm_cell(tape, p, cfg_.d_lstm, prev_token, hprev, cprev);
    state.h = tape.val(out.h);
    state.c = tape.val(out.c);
    fused = tape.concat_cols(pooled, out.h);
  }
  return tape.val(head(tape, p, fused));
}

}  // namespace setnovo::nn
