#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "setnovo/tensor.hpp"

namespace setnovo {

// Binary container of named tensors plus the config hash of the run that
// produced it. Loading validates the magic, version, and framing; shape
// checks against a live model happen at restore time.
struct Checkpoint {
  static constexpr char kMagic[4] = {'S', 'N', 'C', 'K'};
  static constexpr std::uint32_t kVersion = 1;

  std::uint64_t config_hash = 0;
  std::vector<std::pair<std::string, nn::Tensor>> tensors;

  const nn::Tensor* find(const std::string& name) const;
  void add(const std::string& name, nn::Tensor t);

  void save(const std::string& path) const;       // throws on I/O failure
  static Checkpoint load(const std::string& path);  // throws on bad file
};

}  // namespace setnovo
