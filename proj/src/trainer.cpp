#include "setnovo/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "setnovo/features.hpp"
#include "setnovo/rng.hpp"

namespace setnovo {
namespace {

struct Prepared {
  const Spectrum* sp = nullptr;
  double total_residue = 0.0;
  std::vector<double> prefix_before;  // size L+1, last entry is the full sum
  std::vector<int> prev;              // start token then residues[0..L-1]
  std::vector<int> targets;           // residues then end token
  nn::Tensor summary;

  std::size_t n_steps() const { return targets.size(); }
};

Prepared prepare(const Spectrum& sp, const nn::ModelConfig& mc) {
  Prepared pr;
  pr.sp = &sp;
  pr.total_residue = sp.total_residue_mass();
  std::size_t len = sp.seq.size();
  pr.prefix_before.resize(len + 1, 0.0);
  for (std::size_t i = 0; i < len; ++i)
    pr.prefix_before[i + 1] =
        pr.prefix_before[i] + chem::residue_mass(sp.seq[i]);
  pr.prev.reserve(len + 1);
  pr.targets.reserve(len + 1);
  pr.prev.push_back(chem::tok::Start);
  for (std::size_t i = 0; i < len; ++i) {
    pr.targets.push_back(sp.seq[i]);
    pr.prev.push_back(sp.seq[i]);
  }
  pr.targets.push_back(chem::tok::End);
  if (mc.use_lstm)
    pr.summary = features::spectrum_summary(sp.peaks, mc.d_lstm);
  return pr;
}

nn::BatchPlan make_plan(const std::vector<Prepared>& prepared,
                        const std::vector<std::size_t>& idxs,
                        const nn::ModelConfig& mc) {
  std::size_t rows = 0;
  std::size_t steps = 0;
  for (std::size_t i : idxs) {
    rows += prepared[i].sp->peaks.size() * prepared[i].n_steps();
    steps += prepared[i].n_steps();
  }

  nn::BatchPlan plan;
  plan.x = nn::Tensor(rows, mc.feat_dim());
  plan.starts.clear();
  plan.starts.reserve(steps + 1);
  plan.starts.push_back(0);
  plan.targets.reserve(steps);

  std::size_t row = 0;
  for (std::size_t i : idxs) {
    const Prepared& pr = prepared[i];
    const auto& peaks = pr.sp->peaks;
    for (std::size_t t = 0; t < pr.n_steps(); ++t) {
      features::feature_matrix_into(peaks, pr.prefix_before[t],
                                    pr.total_residue, plan.x.row(row));
      row += peaks.size();
      plan.starts.push_back(row);
      plan.targets.push_back(pr.targets[t]);
    }
    plan.prev.push_back(pr.prev);
    plan.summary.push_back(pr.summary);
  }
  return plan;
}

std::vector<Prepared> prepare_all(const std::vector<Spectrum>& set,
                                  const nn::ModelConfig& mc) {
  std::vector<Prepared> out;
  out.reserve(set.size());
  for (const Spectrum& sp : set) {
    if (!sp.has_seq || sp.seq.empty() || sp.peaks.empty() || sp.charge <= 0)
      continue;
    out.push_back(prepare(sp, mc));
  }
  return out;
}

double eval_prepared(const nn::Model& model,
                     const std::vector<Prepared>& prepared,
                     std::size_t batch_size) {
  if (prepared.empty()) return std::numeric_limits<double>::quiet_NaN();
  double loss_sum = 0.0;
  std::size_t step_sum = 0;
  for (std::size_t at = 0; at < prepared.size(); at += batch_size) {
    std::vector<std::size_t> idxs;
    for (std::size_t i = at; i < std::min(at + batch_size, prepared.size());
         ++i)
      idxs.push_back(i);
    nn::BatchPlan plan = make_plan(prepared, idxs, model.config());
    nn::Tape tape;
    int logits = model.forward(tape, plan);
    int loss =
        tape.focal_loss(logits, plan.targets, model.config().focal_gamma);
    std::size_t steps = plan.n_steps();
    loss_sum += tape.val(loss).data[0] * static_cast<double>(steps);
    step_sum += steps;
  }
  return loss_sum / static_cast<double>(step_sum);
}

}  // namespace

std::vector<Spectrum> preprocess_all(std::vector<Spectrum> spectra,
                                     const TrainOptions& opts) {
  for (Spectrum& sp : spectra)
    preprocess_spectrum(sp, opts.max_peaks, opts.normalize_intensity);
  return spectra;
}

double evaluate_loss(const nn::Model& model, const std::vector<Spectrum>& set,
                     const TrainOptions& opts) {
  std::vector<Spectrum> pp = preprocess_all(set, opts);
  return eval_prepared(model, prepare_all(pp, model.config()),
                       opts.batch_size);
}

Checkpoint make_checkpoint(const nn::Model& model, const nn::Adam& adam,
                           double lr_scale, std::uint64_t config_hash) {
  Checkpoint ck;
  ck.config_hash = config_hash;
  for (const auto& [name, t] : model.params()) ck.add(name, t);
  const auto& params = model.params();
  if (!adam.m().empty()) {
    if (adam.m().size() != params.size())
      throw std::logic_error("checkpoint: optimizer state misaligned");
    for (std::size_t i = 0; i < params.size(); ++i) {
      ck.add("adam.m." + params[i].first, adam.m()[i]);
      ck.add("adam.v." + params[i].first, adam.v()[i]);
    }
  }
  nn::Tensor t(1, 1);
  t.data[0] = static_cast<double>(adam.step_count());
  ck.add("adam.t", t);
  nn::Tensor s(1, 1);
  s.data[0] = lr_scale;
  ck.add("trainer.lr_scale", s);
  return ck;
}

void restore_checkpoint(const Checkpoint& ck, nn::Model& model, nn::Adam& adam,
                        double& lr_scale, std::uint64_t expected_hash) {
  if (expected_hash != 0 && ck.config_hash != expected_hash)
    throw std::runtime_error(
        "checkpoint was written under a different model config (hash "
        "mismatch)");
  for (auto& [name, t] : model.params()) {
    const nn::Tensor* saved = ck.find(name);
    if (!saved)
      throw std::runtime_error("checkpoint is missing tensor '" + name + "'");
    if (saved->rows != t.rows || saved->cols != t.cols)
      throw std::runtime_error(
          "checkpoint tensor '" + name + "' has shape (" +
          std::to_string(saved->rows) + ", " + std::to_string(saved->cols) +
          "), model expects (" + std::to_string(t.rows) + ", " +
          std::to_string(t.cols) + ")");
    t = *saved;
  }

  const nn::Tensor* t_count = ck.find("adam.t");
  std::uint64_t steps =
      t_count ? static_cast<std::uint64_t>(t_count->data[0]) : 0;
  adam.m().clear();
  adam.v().clear();
  if (steps > 0) {
    const auto& params = model.params();
    for (const auto& [name, t] : params) {
      const nn::Tensor* m = ck.find("adam.m." + name);
      const nn::Tensor* v = ck.find("adam.v." + name);
      if (!m || !v)
        throw std::runtime_error("checkpoint is missing optimizer state for '" +
                                 name + "'");
      if (m->rows != t.rows || m->cols != t.cols || v->rows != t.rows ||
          v->cols != t.cols)
        throw std::runtime_error("checkpoint optimizer state for '" + name +
                                 "' has the wrong shape");
      adam.m().push_back(*m);
      adam.v().push_back(*v);
    }
  }
  adam.set_step_count(steps);

  const nn::Tensor* s = ck.find("trainer.lr_scale");
  lr_scale = s ? s->data[0] : 1.0;
}

TrainResult train_model(nn::Model& model, nn::Adam& adam,
                        const std::vector<Spectrum>& train_set,
                        const std::vector<Spectrum>& val_set,
                        const TrainOptions& opts, const std::string& out_dir,
                        std::ostream* progress, const TrainHooks& hooks) {
  if (opts.batch_size == 0)
    throw std::invalid_argument("train: batch_size must be positive");

  const nn::ModelConfig& mc = model.config();
  std::vector<Spectrum> tr = preprocess_all(train_set, opts);
  std::vector<Spectrum> va = preprocess_all(val_set, opts);
  std::vector<Prepared> ptrain = prepare_all(tr, mc);
  std::vector<Prepared> pval = prepare_all(va, mc);
  if (ptrain.empty())
    throw std::invalid_argument("train: no usable training spectra");

  std::ofstream log;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    log.open(out_dir + "/train_log.tsv");
    log << "step\tepoch\ttrain_loss\tval_loss\tlr_scale\n";
  }

  TrainResult res;
  std::size_t step = 0;

  auto run_eval = [&](double train_loss, std::size_t epoch) {
    double vl = eval_prepared(model, pval, opts.batch_size);
    res.val_history.push_back(vl);
    double mult = nn::lr_multiplier(res.val_history);
    if (mult < 1.0) {
      res.lr_scale *= mult;
      ++res.halvings;
    }
    if (vl < res.best_val) {
      res.best_val = vl;
      res.best_step = step;
      if (!out_dir.empty())
        make_checkpoint(model, adam, res.lr_scale, opts.config_hash)
            .save(out_dir + "/best.ckpt");
    }
    if (log.is_open())
      log << step << '\t' << epoch << '\t' << train_loss << '\t' << vl << '\t'
          << res.lr_scale << '\n'
          << std::flush;
    if (progress)
      *progress << "step " << step << " epoch " << epoch << " train "
                << train_loss << " val " << vl << " lr_scale " << res.lr_scale
                << "\n";
  };

  run_eval(std::numeric_limits<double>::quiet_NaN(), 0);

  Rng rng(opts.seed);
  std::vector<std::size_t> order(ptrain.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double last_train_loss = std::numeric_limits<double>::quiet_NaN();
  bool evaluated_at_step = true;
  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t at = 0; at < order.size(); at += opts.batch_size) {
      std::vector<std::size_t> idxs(
          order.begin() + static_cast<std::ptrdiff_t>(at),
          order.begin() + static_cast<std::ptrdiff_t>(
                              std::min(at + opts.batch_size, order.size())));
      nn::BatchPlan plan = make_plan(ptrain, idxs, mc);
      nn::Tape tape;
      std::vector<int> pids;
      int logits = model.forward(tape, plan, &pids);
      int loss = tape.focal_loss(logits, plan.targets, mc.focal_gamma);
      tape.backward(loss);
      last_train_loss = tape.val(loss).data[0];

      std::vector<nn::Tensor*> params;
      std::vector<const nn::Tensor*> grads;
      params.reserve(pids.size());
      grads.reserve(pids.size());
      for (std::size_t i = 0; i < pids.size(); ++i) {
        params.push_back(&model.params()[i].second);
        grads.push_back(&tape.grad(pids[i]));
      }
      adam.step(params, grads, res.lr_scale);
      ++step;
      ++res.steps_run;
      evaluated_at_step = false;
      if (step % opts.eval_every == 0) {
        run_eval(last_train_loss, epoch);
        evaluated_at_step = true;
      }
    }
    if (hooks.after_epoch && !hooks.after_epoch(epoch, res)) break;
  }

  if (!evaluated_at_step) run_eval(last_train_loss, opts.epochs);
  return res;
}

}  // namespace setnovo
