#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "setnovo/checkpoint.hpp"
#include "setnovo/network.hpp"
#include "setnovo/optimizer.hpp"
#include "setnovo/spectrum.hpp"

namespace setnovo {

struct TrainOptions {
  std::size_t batch_size = 16;
  std::size_t epochs = 20;
  std::size_t eval_every = 300;  // steps between validation passes
  double lr = 1e-3;              // base Adam learning rate
  std::uint64_t seed = 1;
  std::size_t max_peaks = 500;
  bool normalize_intensity = true;
  std::uint64_t config_hash = 0;  // stamped into checkpoints
};

struct TrainResult {
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t best_step = 0;
  std::size_t steps_run = 0;
  std::size_t halvings = 0;
  double lr_scale = 1.0;
  std::vector<double> val_history;
};

struct TrainHooks {
  // Called after each epoch; return false to stop training early.
  std::function<bool(std::size_t epoch, const TrainResult&)> after_epoch;
};

// Teacher-forced training with Adam and a halve-on-plateau schedule. The
// validation set is scored before the first update, every eval_every steps,
// and after the last step; the best-validation checkpoint and a TSV log land
// in out_dir (pass "" to keep everything in memory). Model and optimizer are
// taken by reference, so successive calls continue the same run.
TrainResult train_model(nn::Model& model, nn::Adam& adam,
                        const std::vector<Spectrum>& train_set,
                        const std::vector<Spectrum>& val_set,
                        const TrainOptions& opts, const std::string& out_dir,
                        std::ostream* progress = nullptr,
                        const TrainHooks& hooks = {});

// Mean focal loss per step over a spectrum set (teacher forcing, no updates).
double evaluate_loss(const nn::Model& model, const std::vector<Spectrum>& set,
                     const TrainOptions& opts);

// Checkpoint glue: model parameters plus Adam state and the schedule scale.
Checkpoint make_checkpoint(const nn::Model& model, const nn::Adam& adam,
                           double lr_scale, std::uint64_t config_hash);
// Restores in place; throws on any missing tensor, shape mismatch, or
// config-hash mismatch (pass expected_hash = 0 to skip the hash check).
void restore_checkpoint(const Checkpoint& ck, nn::Model& model, nn::Adam& adam,
                        double& lr_scale, std::uint64_t expected_hash);

// Spectra ready for the network: peak cap and intensity normalization.
std::vector<Spectrum> preprocess_all(std::vector<Spectrum> spectra,
                                     const TrainOptions& opts);

}  // namespace setnovo
