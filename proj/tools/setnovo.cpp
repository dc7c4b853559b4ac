#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "setnovo/beam.hpp"
#include "setnovo/config.hpp"
#include "setnovo/metrics.hpp"
#include "setnovo/mgf.hpp"
#include "setnovo/split.hpp"
#include "setnovo/synth.hpp"
#include "setnovo/trainer.hpp"

namespace {

using namespace setnovo;

void report_parse_errors(const mgf::ParseResult& res, const std::string& path) {
  for (const auto& e : res.errors)
    std::cerr << path << ":" << e.line << ": " << e.message << "\n";
}

std::vector<Spectrum> load_mgf_or_die(const std::string& path) {
  mgf::ParseResult res = mgf::parse_file(path);
  report_parse_errors(res, path);
  if (res.spectra.empty())
    throw std::runtime_error("no usable spectra in " + path);
  return std::move(res.spectra);
}

Config load_config_opt(const std::string& path) {
  if (path.empty()) return Config{};
  return load_config(path);
}

std::vector<double> residue_mass_list() {
  std::vector<double> masses;
  for (std::size_t v = 0; v < chem::kVocabSize; ++v) {
    auto t = static_cast<chem::TokenId>(v);
    if (chem::is_residue(t)) masses.push_back(chem::residue_mass(t));
  }
  return masses;
}

int cmd_config_init(const std::string& out_path, bool small) {
  Config cfg;
  if (small) {
    cfg.model.conv_channels = {32, 32, 64};
    cfg.model.fc_dims = {64, 32, 32};
    cfg.model.d_lstm = 64;
  }
  save_config(out_path, cfg);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_synth(const std::string& config_path, const std::string& out_path,
              long count, long seed) {
  Config cfg = load_config_opt(config_path);
  if (count > 0) cfg.synth.count = static_cast<std::size_t>(count);
  if (seed >= 0) cfg.synth.seed = static_cast<std::uint64_t>(seed);
  std::vector<Spectrum> spectra = synth::generate(cfg.synth);
  mgf::write_file(out_path, spectra);
  std::cout << "wrote " << spectra.size() << " spectra to " << out_path << "\n";
  return 0;
}

int cmd_split(const std::string& in_path, const std::string& out_dir,
              double f_train, double f_val, double f_test, long seed) {
  std::vector<Spectrum> spectra = load_mgf_or_die(in_path);
  SplitFractions fr{f_train, f_val, f_test};
  auto seed_u = static_cast<std::uint64_t>(seed);
  SplitResult split = split_by_peptide(spectra, fr, seed_u);

  std::filesystem::create_directories(out_dir);
  mgf::write_file(out_dir + "/train.mgf", split.train);
  mgf::write_file(out_dir + "/valid.mgf", split.val);
  mgf::write_file(out_dir + "/test.mgf", split.test);

  auto peptide_count = [](const std::vector<Spectrum>& set) {
    std::set<std::string> peps;
    for (const Spectrum& sp : set)
      peps.insert(chem::peptide_to_string(sp.seq));
    return peps.size();
  };
  nlohmann::json manifest{
      {"seed", seed_u},
      {"fractions",
       {{"train", fr.train}, {"val", fr.val}, {"test", fr.test}}},
      {"counts",
       {{"train",
         {{"spectra", split.train.size()},
          {"peptides", peptide_count(split.train)}}},
        {"val",
         {{"spectra", split.val.size()},
          {"peptides", peptide_count(split.val)}}},
        {"test",
         {{"spectra", split.test.size()},
          {"peptides", peptide_count(split.test)}}}}}};
  std::ofstream mf(out_dir + "/manifest.json");
  if (!mf) throw std::runtime_error("cannot write manifest in " + out_dir);
  mf << manifest.dump(2) << "\n";

  std::cout << "train " << split.train.size() << " / val " << split.val.size()
            << " / test " << split.test.size() << " spectra -> " << out_dir
            << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& train_path,
              const std::string& val_path, const std::string& out_dir,
              const std::string& resume_path) {
  Config cfg = load_config_opt(config_path);
  std::vector<Spectrum> train_set = load_mgf_or_die(train_path);
  std::vector<Spectrum> val_set = load_mgf_or_die(val_path);

  nn::Model model(cfg.model);
  Rng rng(cfg.train.seed);
  model.init_params(rng);
  nn::Adam adam(nn::AdamConfig{.lr = cfg.train.lr});

  TrainOptions opts = cfg.train;
  opts.config_hash = model_config_hash(cfg.model);

  double lr_scale = 1.0;
  if (!resume_path.empty()) {
    Checkpoint ck = Checkpoint::load(resume_path);
    restore_checkpoint(ck, model, adam, lr_scale, opts.config_hash);
    std::cout << "resumed from " << resume_path << " (adam step "
              << adam.step_count() << ")\n";
  }

  TrainResult res = train_model(model, adam, train_set, val_set, opts, out_dir,
                                &std::cout);
  std::cout << "done: " << res.steps_run << " steps, best val " << res.best_val
            << " at step " << res.best_step << ", checkpoint " << out_dir
            << "/best.ckpt\n";
  return 0;
}

int cmd_denovo(const std::string& config_path, const std::string& model_path,
               const std::string& in_path, const std::string& out_path,
               unsigned threads) {
  Config cfg = load_config_opt(config_path);
  std::vector<Spectrum> spectra = load_mgf_or_die(in_path);

  nn::Model model(cfg.model);
  nn::Adam adam;
  double lr_scale = 1.0;
  Checkpoint ck = Checkpoint::load(model_path);
  restore_checkpoint(ck, model, adam, lr_scale,
                     model_config_hash(cfg.model));

  TrainOptions pp;
  pp.max_peaks = cfg.train.max_peaks;
  pp.normalize_intensity = cfg.train.normalize_intensity;
  spectra = preprocess_all(std::move(spectra), pp);

  double max_mass = cfg.decode.max_mass;
  for (const Spectrum& sp : spectra)
    max_mass = std::max(max_mass, sp.total_residue_mass() + 1.0);
  KnapsackFilter knapsack(residue_mass_list(), max_mass,
                          cfg.decode.knapsack_bin_width);

  std::vector<Prediction> preds =
      decode_all(model, spectra, knapsack, cfg.decode.beam,
                 threads == 0 ? 1 : threads);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "title\tscan\tpeptide\tscore\tstep_logprobs\n";
  std::size_t found = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const Prediction& p = preds[i];
    out << spectra[i].title << '\t' << spectra[i].scan << '\t';
    if (p.found) {
      ++found;
      out << chem::peptide_to_string(p.peptide) << '\t' << p.score << '\t';
      for (std::size_t k = 0; k < p.step_logprobs.size(); ++k) {
        if (k) out << ' ';
        out << p.step_logprobs[k];
      }
    } else {
      out << "\tnan\t";
    }
    out << '\n';
  }
  std::cout << "decoded " << found << "/" << spectra.size() << " spectra -> "
            << out_path << "\n";
  return 0;
}

struct PredRow {
  std::string title;
  chem::Peptide peptide;
  bool found = false;
};

std::vector<PredRow> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<PredRow> rows;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (first) {
      first = false;
      if (line.rfind("title\t", 0) == 0) continue;  // header
    }
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t at = 0;
    while (true) {
      std::size_t tab = line.find('\t', at);
      cols.push_back(line.substr(at, tab - at));
      if (tab == std::string::npos) break;
      at = tab + 1;
    }
    if (cols.size() < 3)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected at least 3 tab-separated columns");
    PredRow row;
    row.title = cols[0];
    if (!cols[2].empty()) {
      try {
        row.peptide = chem::parse_peptide(cols[2]);
        row.found = true;
      } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad peptide: " + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_eval(const std::string& truth_path, const std::string& pred_path,
             const std::string& report_path) {
  mgf::ParseResult truth = mgf::parse_file(truth_path);
  report_parse_errors(truth, truth_path);
  if (truth.spectra.empty())
    throw std::runtime_error("no usable spectra in " + truth_path);
  std::vector<PredRow> preds = read_predictions(pred_path);

  // Prefer title matching; fall back to row order when titles don't line up.
  std::map<std::string, const PredRow*> by_title;
  bool titles_ok = true;
  for (const PredRow& r : preds)
    if (r.title.empty() || !by_title.emplace(r.title, &r).second) {
      titles_ok = false;
      break;
    }
  if (titles_ok)
    for (const Spectrum& sp : truth.spectra)
      if (!by_title.count(sp.title)) {
        titles_ok = false;
        break;
      }
  if (!titles_ok && preds.size() != truth.spectra.size())
    throw std::runtime_error(
        "predictions do not match truth spectra by title, and row counts "
        "differ");

  std::vector<metrics::MatchCounts> counts;
  counts.reserve(truth.spectra.size());
  for (std::size_t i = 0; i < truth.spectra.size(); ++i) {
    const Spectrum& sp = truth.spectra[i];
    if (!sp.has_seq)
      throw std::runtime_error("truth spectrum '" + sp.title +
                               "' has no SEQ");
    const PredRow* row =
        titles_ok ? by_title.at(sp.title) : &preds[i];
    counts.push_back(metrics::match_peptides(
        sp.seq, row->found ? row->peptide : chem::Peptide{}));
  }
  metrics::Aggregate agg = metrics::aggregate(counts);

  std::cout << "spectra        " << agg.n_spectra << "\n"
            << "aa real/pred   " << agg.total_real << " / " << agg.total_pred
            << "\n"
            << "aa matched     " << agg.total_match << "\n"
            << "aa recall      " << agg.aa_recall << "\n";
  if (agg.no_predictions)
    std::cout << "aa precision   n/a (no predicted residues)\n";
  else
    std::cout << "aa precision   " << agg.aa_precision << "\n";
  std::cout << "peptide recall " << agg.peptide_recall << "\n";

  if (!report_path.empty()) {
    nlohmann::json rep{{"n_spectra", agg.n_spectra},
                       {"total_real", agg.total_real},
                       {"total_pred", agg.total_pred},
                       {"total_match", agg.total_match},
                       {"full_matches", agg.full_matches},
                       {"aa_recall", agg.aa_recall},
                       {"aa_precision", agg.aa_precision},
                       {"no_predictions", agg.no_predictions},
                       {"peptide_recall", agg.peptide_recall}};
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write " + report_path);
    out << rep.dump(2) << "\n";
    std::cout << "report -> " << report_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"de novo peptide sequencing on set-based spectrum input"};
  app.require_subcommand(1);
  int rc = 0;
  auto guard = [&rc](auto fn) {
    return [&rc, fn]() {
      try {
        rc = fn();
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 1;
      }
    };
  };

  // config init
  auto* config_cmd = app.add_subcommand("config", "configuration files");
  config_cmd->require_subcommand(1);
  auto* init_cmd = config_cmd->add_subcommand("init", "write a default config");
  std::string init_out = "config.json";
  bool init_small = false;
  init_cmd->add_option("--out", init_out, "output path");
  init_cmd->add_flag("--small", init_small, "reduced architecture preset");
  init_cmd->callback(
      guard([&]() { return cmd_config_init(init_out, init_small); }));

  // synth
  auto* synth_cmd =
      app.add_subcommand("synth", "generate a labeled synthetic MGF");
  std::string synth_config, synth_out;
  long synth_count = -1, synth_seed = -1;
  synth_cmd->add_option("--config", synth_config, "config file");
  synth_cmd->add_option("--out", synth_out, "output MGF")->required();
  synth_cmd->add_option("--count", synth_count, "override spectrum count");
  synth_cmd->add_option("--seed", synth_seed, "override generator seed");
  synth_cmd->callback(guard([&]() {
    return cmd_synth(synth_config, synth_out, synth_count, synth_seed);
  }));

  // split
  auto* split_cmd =
      app.add_subcommand("split", "peptide-disjoint train/val/test split");
  std::string split_in, split_dir;
  double split_train = 0.8, split_val = 0.1, split_test = 0.1;
  long split_seed = 1;
  split_cmd->add_option("--in", split_in, "input MGF")->required();
  split_cmd->add_option("--out-dir", split_dir, "output directory")->required();
  split_cmd->add_option("--train", split_train, "train fraction");
  split_cmd->add_option("--val", split_val, "val fraction");
  split_cmd->add_option("--test", split_test, "test fraction");
  split_cmd->add_option("--seed", split_seed, "shuffle seed");
  split_cmd->callback(guard([&]() {
    return cmd_split(split_in, split_dir, split_train, split_val, split_test,
                     split_seed);
  }));

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model");
  std::string train_config, train_in, train_val, train_dir, train_resume;
  train_cmd->add_option("--config", train_config, "config file");
  train_cmd->add_option("--train", train_in, "training MGF")->required();
  train_cmd->add_option("--val", train_val, "validation MGF")->required();
  train_cmd->add_option("--out-dir", train_dir, "run directory")->required();
  train_cmd->add_option("--resume", train_resume, "checkpoint to resume from");
  train_cmd->callback(guard([&]() {
    return cmd_train(train_config, train_in, train_val, train_dir,
                     train_resume);
  }));

  // denovo
  auto* denovo_cmd = app.add_subcommand("denovo", "sequence spectra");
  std::string dn_config, dn_model, dn_in, dn_out;
  unsigned dn_threads = 1;
  denovo_cmd->add_option("--config", dn_config, "config file");
  denovo_cmd->add_option("--model", dn_model, "checkpoint")->required();
  denovo_cmd->add_option("--in", dn_in, "input MGF")->required();
  denovo_cmd->add_option("--out", dn_out, "output TSV")->required();
  denovo_cmd->add_option("--threads", dn_threads, "decode thread count");
  denovo_cmd->callback(guard([&]() {
    return cmd_denovo(dn_config, dn_model, dn_in, dn_out, dn_threads);
  }));

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "score predictions against labeled spectra");
  std::string ev_truth, ev_pred, ev_report;
  eval_cmd->add_option("--truth", ev_truth, "labeled MGF")->required();
  eval_cmd->add_option("--pred", ev_pred, "prediction TSV")->required();
  eval_cmd->add_option("--report", ev_report, "JSON report path");
  eval_cmd->callback(
      guard([&]() { return cmd_eval(ev_truth, ev_pred, ev_report); }));

  CLI11_PARSE(app, argc, argv);
  return rc;
}
