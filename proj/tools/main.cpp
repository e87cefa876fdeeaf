#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmcrf/corpus.hpp"
#include "mmcrf/crf.hpp"
#include "mmcrf/errors.hpp"
#include "mmcrf/eval.hpp"
#include "mmcrf/io.hpp"
#include "mmcrf/lexicon.hpp"
#include "mmcrf/mmseg.hpp"
#include "mmcrf/pipeline.hpp"
#include "mmcrf/templates.hpp"
#include "mmcrf/utf8.hpp"

namespace {

using namespace mmcrf;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// Percentages are reported to two decimals, rounding halves up.
double round_half_up_2(double percent) {
  return std::floor(percent * 100.0 + 0.5) / 100.0;
}

std::string format_percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", round_half_up_2(ratio * 100.0));
  return buf;
}

// Whole file as lines; empty lines are kept so output stays aligned.
std::vector<std::string> read_lines(const std::string& path) {
  const std::string text = io::read_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line;
    if (eol == std::string::npos) {
      line = text.substr(pos);
      pos = text.size();
    } else {
      line = text.substr(pos, eol - pos);
      pos = eol + 1;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

struct CommonOptions {
  std::vector<std::string> lexicons;
  std::string freedom_path;
};

Lexicon load_lexicons(const std::vector<std::string>& paths) {
  return Lexicon::load(paths);
}

std::optional<FreedomTable> load_freedom(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return FreedomTable::load(path);
}

struct TemplateChoice {
  std::string preset;
  std::string file;

  TemplateSet resolve() const {
    if (!preset.empty()) return TemplateSet::preset(preset);
    const std::string text = io::read_file(file);
    TemplateSet set = TemplateSet::parse(text, file);
    if (set.unigram_count() == 0) {
      throw ConfigError("template file defines no unigram templates: " + file);
    }
    return set;
  }
};

void add_template_options(CLI::App* cmd, TemplateChoice& choice) {
  auto* preset = cmd->add_option("--preset", choice.preset,
                                 "Bundled template set (exp1..exp5)");
  auto* file = cmd->add_option("--template", choice.file,
                               "Template file (CRF++-style U/B lines)");
  preset->excludes(file);
  file->excludes(preset);
}

TrainConfig make_train_config(double sigma, std::size_t max_iter, double tol,
                              std::size_t cutoff, int threads) {
  TrainConfig config;
  config.l2_sigma = sigma;
  config.max_iterations = max_iter;
  config.gradient_tolerance = tol;
  config.feature_cutoff = cutoff;
  config.threads = threads;
  return config;
}

int cmd_make_training(const std::string& corpus_path, const CommonOptions& common,
                      const std::string& output) {
  const auto corpus = read_segmented_corpus(corpus_path);
  if (corpus.empty()) {
    throw InvalidInputError("empty corpus: " + corpus_path);
  }
  const Lexicon lex = load_lexicons(common.lexicons);
  const auto freedom = load_freedom(common.freedom_path);
  const auto grids =
      make_training_grids(corpus, lex, freedom ? &*freedom : nullptr);
  write_training_file(grids, output);
  std::size_t chars = 0;
  for (const auto& grid : grids) chars += grid.length();
  std::cout << "sentences: " << grids.size() << "\n"
            << "characters: " << chars << "\n"
            << "written: " << output << "\n";
  return kExitOk;
}

int cmd_train(const std::string& training_file, const std::string& corpus_path,
              const CommonOptions& common, const TemplateChoice& templates,
              const TrainConfig& config, const std::string& model_out,
              bool quiet) {
  std::vector<TokenGrid> grids;
  if (!training_file.empty()) {
    grids = read_training_file(training_file);
  } else {
    const auto corpus = read_segmented_corpus(corpus_path);
    if (corpus.empty()) {
      throw InvalidInputError("empty corpus: " + corpus_path);
    }
    const Lexicon lex = load_lexicons(common.lexicons);
    const auto freedom = load_freedom(common.freedom_path);
    grids = make_training_grids(corpus, lex, freedom ? &*freedom : nullptr);
  }
  const TemplateSet set = templates.resolve();

  TrainProgress progress;
  if (!quiet) {
    progress = [](std::size_t iter, double obj, double gnorm) {
      std::fprintf(stderr, "iter %zu obj %.6f |grad| %.6f\n", iter, obj, gnorm);
    };
  }
  const CrfModel model = train(grids, set, config, progress);
  model.save(model_out);
  std::cout << "features: " << model.index().unigram_feature_count() << "\n"
            << "weights: " << model.weights().size() << "\n"
            << "iterations: " << model.meta().iterations << "\n"
            << "stop: " << model.meta().stop_reason << "\n"
            << "model: " << model_out << "\n";
  return kExitOk;
}

int cmd_segment(const std::string& model_path, const CommonOptions& common,
                const std::string& input, const std::string& output) {
  const CrfModel model = CrfModel::load(model_path);
  const Lexicon lex = load_lexicons(common.lexicons);
  const auto freedom = load_freedom(common.freedom_path);
  const auto lines = read_lines(input);
  const auto segs = segment_text(model, lex, lines, freedom ? &*freedom : nullptr);
  std::string out;
  for (const auto& seg : segs) {
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (i > 0) out += ' ';
      out += utf8::encode(seg[i]);
    }
    out += '\n';
  }
  io::write_file_atomic(output, out);
  return kExitOk;
}

int cmd_mmseg(const CommonOptions& common, const std::string& input,
              const std::string& output) {
  // A missing --lexicon means segment with an empty lexicon (all
  // single-character words); explicitly given files must contain words.
  const Lexicon lex =
      common.lexicons.empty() ? Lexicon() : load_lexicons(common.lexicons);
  const auto freedom = load_freedom(common.freedom_path);
  const auto lines = read_lines(input);
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Sentence sent;
    try {
      sent = utf8::decode(lines[i]);
    } catch (const DecodeError& e) {
      throw DecodeError(e.what(), i + 1);
    }
    if (!sent.empty()) {
      const Segmentation seg =
          mmseg_segment(lex, sent, freedom ? &*freedom : nullptr);
      for (std::size_t w = 0; w < seg.size(); ++w) {
        if (w > 0) out += ' ';
        out += utf8::encode(seg[w]);
      }
    }
    out += '\n';
  }
  io::write_file_atomic(output, out);
  return kExitOk;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& json_path) {
  const auto gold = read_segmented_corpus(gold_path);
  const auto pred = read_segmented_corpus(pred_path);
  const EvalReport report = score(gold, pred);
  std::cout << "P: " << format_percent(report.precision)
            << " R: " << format_percent(report.recall)
            << " F: " << format_percent(report.f_score) << "\n";
  std::cout << "gold words: " << report.gold_words
            << " predicted words: " << report.pred_words
            << " correct: " << report.correct_words << "\n";
  if (!json_path.empty()) {
    nlohmann::json j{{"precision", report.precision},
                     {"recall", report.recall},
                     {"f_score", report.f_score},
                     {"gold_words", report.gold_words},
                     {"pred_words", report.pred_words},
                     {"correct_words", report.correct_words},
                     {"mismatch_lines", report.per_line_mismatch}};
    io::write_file_atomic(json_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chinese word segmentation toolkit: rough lexicon segmentation "
               "feeding a character-tagging CRF"};
  app.require_subcommand(1);

  // make-training
  auto* mk = app.add_subcommand(
      "make-training", "Build a CRF training file (char, rough tag, gold tag)");
  std::string mk_corpus, mk_output;
  CommonOptions mk_common;
  mk->add_option("--corpus", mk_corpus, "Segmented training corpus")->required();
  mk->add_option("--lexicon", mk_common.lexicons, "Lexicon file (repeatable)")
      ->required();
  mk->add_option("--freedom", mk_common.freedom_path,
                 "Single-character freedom score table");
  mk->add_option("--output", mk_output, "Training file to write")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train a segmentation model");
  std::string tr_training_file, tr_corpus, tr_model;
  CommonOptions tr_common;
  TemplateChoice tr_templates;
  double tr_sigma = 1.0, tr_tol = 1e-4;
  std::size_t tr_max_iter = 200, tr_cutoff = 1;
  int tr_threads = 1;
  bool tr_quiet = false;
  auto* tr_tf = tr->add_option("--training-file", tr_training_file,
                               "Prebuilt training file");
  auto* tr_cp = tr->add_option("--corpus", tr_corpus,
                               "Segmented corpus (with --lexicon)");
  tr_tf->excludes(tr_cp);
  tr_cp->excludes(tr_tf);
  tr->add_option("--lexicon", tr_common.lexicons, "Lexicon file (repeatable)");
  tr->add_option("--freedom", tr_common.freedom_path,
                 "Single-character freedom score table");
  add_template_options(tr, tr_templates);
  tr->add_option("--model", tr_model, "Model file to write")->required();
  tr->add_option("--l2-sigma", tr_sigma, "Gaussian prior scale");
  tr->add_option("--max-iter", tr_max_iter, "Optimizer iteration cap");
  tr->add_option("--tolerance", tr_tol, "Gradient norm stopping threshold");
  tr->add_option("--cutoff", tr_cutoff, "Minimum feature occurrence count");
  tr->add_option("--threads", tr_threads, "Worker threads");
  tr->add_flag("--quiet", tr_quiet, "Suppress per-iteration log");

  // segment
  auto* sg = app.add_subcommand("segment", "Segment raw text with a model");
  std::string sg_model, sg_input, sg_output;
  CommonOptions sg_common;
  sg->add_option("--model", sg_model, "Trained model file")->required();
  sg->add_option("--lexicon", sg_common.lexicons, "Lexicon file (repeatable)")
      ->required();
  sg->add_option("--freedom", sg_common.freedom_path,
                 "Single-character freedom score table");
  sg->add_option("--input", sg_input, "Raw text, one sequence per line")
      ->required();
  sg->add_option("--output", sg_output, "Segmented output file")->required();

  // mmseg
  auto* mm_cmd = app.add_subcommand("mmseg", "Rough lexicon-only segmentation");
  std::string mm_input, mm_output;
  CommonOptions mm_common;
  mm_cmd->add_option("--lexicon", mm_common.lexicons, "Lexicon file (repeatable)");
  mm_cmd->add_option("--freedom", mm_common.freedom_path,
                 "Single-character freedom score table");
  mm_cmd->add_option("--input", mm_input, "Raw text, one sequence per line")
      ->required();
  mm_cmd->add_option("--output", mm_output, "Segmented output file")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "Score a segmentation against gold");
  std::string ev_gold, ev_pred, ev_json;
  ev->add_option("gold", ev_gold, "Gold segmented file")->required();
  ev->add_option("pred", ev_pred, "Predicted segmented file")->required();
  ev->add_option("--json", ev_json, "Also write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (mk->parsed()) return cmd_make_training(mk_corpus, mk_common, mk_output);
    if (tr->parsed()) {
      if (tr_training_file.empty() && tr_corpus.empty()) {
        throw ConfigError("train needs --training-file or --corpus");
      }
      if (!tr_corpus.empty() && tr_common.lexicons.empty()) {
        throw ConfigError("--corpus requires at least one --lexicon");
      }
      if (tr_templates.preset.empty() && tr_templates.file.empty()) {
        throw ConfigError("train needs --preset or --template");
      }
      const TrainConfig config = make_train_config(tr_sigma, tr_max_iter, tr_tol,
                                                   tr_cutoff, tr_threads);
      return cmd_train(tr_training_file, tr_corpus, tr_common, tr_templates,
                       config, tr_model, tr_quiet);
    }
    if (sg->parsed()) return cmd_segment(sg_model, sg_common, sg_input, sg_output);
    if (mm_cmd->parsed()) return cmd_mmseg(mm_common, mm_input, mm_output);
    if (ev->parsed()) return cmd_eval(ev_gold, ev_pred, ev_json);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
