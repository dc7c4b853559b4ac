#pragma once

#include <cstdint>
#include <string>

#include "setnovo/beam.hpp"
#include "setnovo/network.hpp"
#include "setnovo/synth.hpp"
#include "setnovo/trainer.hpp"

namespace setnovo {

struct DecodeOptions {
  BeamConfig beam;
  double knapsack_bin_width = KnapsackFilter::kDefaultBinWidth;
  // Knapsack table ceiling; raised automatically if the data needs more.
  double max_mass = 4000.0;
};

struct Config {
  nn::ModelConfig model;
  TrainOptions train;
  DecodeOptions decode;
  synth::SynthConfig synth;
};

// JSON round-trip. Unknown keys are ignored; missing keys keep defaults.
// Parsing throws std::runtime_error with a readable message on bad input.
std::string config_to_json(const Config& cfg);
Config config_from_json(const std::string& text);

void save_config(const std::string& path, const Config& cfg);
Config load_config(const std::string& path);

// FNV-1a over the canonical serialization of the model section only, so a
// checkpoint stays valid across training/decoding option changes.
std::uint64_t model_config_hash(const nn::ModelConfig& mc);

}  // namespace setnovo
