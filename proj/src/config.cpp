#include "setnovo/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace setnovo {
namespace {

using nlohmann::json;

json model_to_json(const nn::ModelConfig& mc) {
  return json{{"conv_channels", mc.conv_channels},
              {"fc_dims", mc.fc_dims},
              {"d_lstm", mc.d_lstm},
              {"use_lstm", mc.use_lstm},
              {"focal_gamma", mc.focal_gamma}};
}

nn::ModelConfig model_from_json(const json& j) {
  nn::ModelConfig mc;
  mc.conv_channels =
      j.value("conv_channels", mc.conv_channels);
  mc.fc_dims = j.value("fc_dims", mc.fc_dims);
  mc.d_lstm = j.value("d_lstm", mc.d_lstm);
  mc.use_lstm = j.value("use_lstm", mc.use_lstm);
  mc.focal_gamma = j.value("focal_gamma", mc.focal_gamma);
  return mc;
}

json train_to_json(const TrainOptions& t) {
  return json{{"batch_size", t.batch_size},
              {"epochs", t.epochs},
              {"eval_every", t.eval_every},
              {"lr", t.lr},
              {"seed", t.seed},
              {"max_peaks", t.max_peaks},
              {"normalize_intensity", t.normalize_intensity}};
}

TrainOptions train_from_json(const json& j) {
  TrainOptions t;
  t.batch_size = j.value("batch_size", t.batch_size);
  t.epochs = j.value("epochs", t.epochs);
  t.eval_every = j.value("eval_every", t.eval_every);
  t.lr = j.value("lr", t.lr);
  t.seed = j.value("seed", t.seed);
  t.max_peaks = j.value("max_peaks", t.max_peaks);
  t.normalize_intensity = j.value("normalize_intensity", t.normalize_intensity);
  return t;
}

json decode_to_json(const DecodeOptions& d) {
  return json{{"beam_width", d.beam.width},
              {"max_len", d.beam.max_len},
              {"precursor_tol", d.beam.precursor_tol},
              {"mass_window", d.beam.mass_window},
              {"knapsack_bin_width", d.knapsack_bin_width},
              {"max_mass", d.max_mass}};
}

DecodeOptions decode_from_json(const json& j) {
  DecodeOptions d;
  d.beam.width = j.value("beam_width", d.beam.width);
  d.beam.max_len = j.value("max_len", d.beam.max_len);
  d.beam.precursor_tol = j.value("precursor_tol", d.beam.precursor_tol);
  d.beam.mass_window = j.value("mass_window", d.beam.mass_window);
  d.knapsack_bin_width = j.value("knapsack_bin_width", d.knapsack_bin_width);
  d.max_mass = j.value("max_mass", d.max_mass);
  return d;
}

std::vector<std::string> alphabet_to_strings(
    const std::vector<chem::TokenId>& alphabet) {
  std::vector<std::string> out;
  out.reserve(alphabet.size());
  for (chem::TokenId t : alphabet)
    out.push_back(std::string(chem::token_info(t).text));
  return out;
}

std::vector<chem::TokenId> alphabet_from_strings(
    const std::vector<std::string>& texts) {
  std::vector<chem::TokenId> out;
  out.reserve(texts.size());
  for (const std::string& s : texts) {
    bool found = false;
    for (std::size_t v = 0; v < chem::kVocabSize; ++v) {
      auto t = static_cast<chem::TokenId>(v);
      if (chem::is_residue(t) && chem::token_info(t).text == s) {
        out.push_back(t);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("config: unknown residue token '" + s + "'");
  }
  return out;
}

json synth_to_json(const synth::SynthConfig& s) {
  return json{{"count", s.count},
              {"alphabet", alphabet_to_strings(s.alphabet)},
              {"min_len", s.min_len},
              {"max_len", s.max_len},
              {"charge", s.charge},
              {"coverage", s.coverage},
              {"mz_sigma", s.mz_sigma},
              {"noise_peaks", s.noise_peaks},
              {"seed", s.seed}};
}

synth::SynthConfig synth_from_json(const json& j) {
  synth::SynthConfig s;
  s.count = j.value("count", s.count);
  if (j.contains("alphabet"))
    s.alphabet =
        alphabet_from_strings(j["alphabet"].get<std::vector<std::string>>());
  s.min_len = j.value("min_len", s.min_len);
  s.max_len = j.value("max_len", s.max_len);
  s.charge = j.value("charge", s.charge);
  s.coverage = j.value("coverage", s.coverage);
  s.mz_sigma = j.value("mz_sigma", s.mz_sigma);
  s.noise_peaks = j.value("noise_peaks", s.noise_peaks);
  s.seed = j.value("seed", s.seed);
  return s;
}

}  // namespace

std::string config_to_json(const Config& cfg) {
  json j{{"model", model_to_json(cfg.model)},
         {"train", train_to_json(cfg.train)},
         {"decode", decode_to_json(cfg.decode)},
         {"synth", synth_to_json(cfg.synth)}};
  return j.dump(2) + "\n";
}

Config config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }
  Config cfg;
  try {
    if (j.contains("model")) cfg.model = model_from_json(j["model"]);
    if (j.contains("train")) cfg.train = train_from_json(j["train"]);
    if (j.contains("decode")) cfg.decode = decode_from_json(j["decode"]);
    if (j.contains("synth")) cfg.synth = synth_from_json(j["synth"]);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config: bad field type: ") +
                             e.what());
  }
  return cfg;
}

void save_config(const std::string& path, const Config& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out << config_to_json(cfg);
  if (!out) throw std::runtime_error("config: write failed for " + path);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::uint64_t model_config_hash(const nn::ModelConfig& mc) {
  std::string canon = model_to_json(mc).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h == 0 ? 1 : h;  // 0 is reserved for "skip the check"
}

}  // namespace setnovo
