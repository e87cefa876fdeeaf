#include "mmcrf/crf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "lbfgs.hpp"
#include "mmcrf/errors.hpp"
#include "mmcrf/io.hpp"

namespace mmcrf {

namespace {

constexpr std::size_t kL = LabelAlphabet::size();

double log_sum_exp(const double* x, std::size_t n) {
  double max = x[0];
  for (std::size_t i = 1; i < n; ++i) max = std::max(max, x[i]);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(x[i] - max);
  return max + std::log(acc);
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_double(std::string_view text, const char* what) {
  const std::string copy(text);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || copy.empty()) {
    throw FormatError(std::string("bad number for ") + what + ": " + copy);
  }
  return v;
}

std::uint64_t fnv1a_mix(std::uint64_t h, std::string_view s) {
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fingerprint_grids(const std::vector<TokenGrid>& grids) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& grid : grids) {
    for (std::size_t t = 0; t < grid.length(); ++t) {
      for (const auto& cell : grid.row(t)) {
        h = fnv1a_mix(h, cell);
        h = fnv1a_mix(h, "\x1f");
      }
      if (grid.has_gold()) {
        const char g = tag_letter(grid.gold()[t]);
        h = fnv1a_mix(h, std::string_view(&g, 1));
      }
      h = fnv1a_mix(h, "\n");
    }
    h = fnv1a_mix(h, "\x1e");
  }
  return h;
}

// Per-sentence feature ids, flattened: position t owns
// feats[offsets[t] .. offsets[t+1]).
struct CompiledSentence {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> feats;
  std::vector<std::uint8_t> gold;

  std::size_t length() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

CompiledSentence compile_sentence(const TokenGrid& grid, const FeatureIndex& index,
                                  const TemplateSet& templates) {
  CompiledSentence out;
  const std::size_t len = grid.length();
  out.offsets.reserve(len + 1);
  out.offsets.push_back(0);
  for (std::size_t t = 0; t < len; ++t) {
    for (const Template& tpl : templates.templates()) {
      if (tpl.kind() != TemplateKind::Unigram) continue;
      if (const auto id = index.find(expand(tpl, grid, t))) {
        out.feats.push_back(*id);
      }
    }
    out.offsets.push_back(static_cast<std::uint32_t>(out.feats.size()));
  }
  if (grid.has_gold()) {
    out.gold.reserve(len);
    for (const Tag tag : grid.gold()) {
      out.gold.push_back(static_cast<std::uint8_t>(tag));
    }
  }
  return out;
}

// Transition scores are position-independent; evaluate them once per
// weight vector.
struct EdgeScores {
  double score[kL * kL] = {0.0};
  std::size_t blocks = 0;

  static EdgeScores make(const FeatureIndex& index, const std::vector<double>& w) {
    EdgeScores e;
    e.blocks = index.transition_block_count();
    for (std::size_t k = 0; k < e.blocks; ++k) {
      for (std::size_t a = 0; a < kL; ++a) {
        for (std::size_t b = 0; b < kL; ++b) {
          e.score[a * kL + b] += w[index.transition_slot(k, a, b)];
        }
      }
    }
    return e;
  }
};

// Scratch buffers reused across the sentences of one worker.
struct Lattice {
  std::vector<double> node;   // T x L unigram scores
  std::vector<double> alpha;  // T x L, log space
  std::vector<double> beta;   // T x L, log space

  void fill_node_scores(const CompiledSentence& s, const FeatureIndex& index,
                        const std::vector<double>& w) {
    const std::size_t len = s.length();
    node.assign(len * kL, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
      for (std::uint32_t i = s.offsets[t]; i < s.offsets[t + 1]; ++i) {
        const std::uint32_t f = s.feats[i];
        for (std::size_t y = 0; y < kL; ++y) {
          node[t * kL + y] += w[index.unigram_slot(f, y)];
        }
      }
    }
  }

  // Returns log Z.
  double forward(const EdgeScores& edges, std::size_t len) {
    alpha.assign(len * kL, 0.0);
    for (std::size_t y = 0; y < kL; ++y) alpha[y] = node[y];
    double scratch[kL];
    for (std::size_t t = 1; t < len; ++t) {
      for (std::size_t b = 0; b < kL; ++b) {
        for (std::size_t a = 0; a < kL; ++a) {
          scratch[a] = alpha[(t - 1) * kL + a] + edges.score[a * kL + b];
        }
        alpha[t * kL + b] = node[t * kL + b] + log_sum_exp(scratch, kL);
      }
    }
    return log_sum_exp(&alpha[(len - 1) * kL], kL);
  }

  void backward(const EdgeScores& edges, std::size_t len) {
    beta.assign(len * kL, 0.0);
    double scratch[kL];
    for (std::size_t t = len - 1; t-- > 0;) {
      for (std::size_t a = 0; a < kL; ++a) {
        for (std::size_t b = 0; b < kL; ++b) {
          scratch[b] = edges.score[a * kL + b] + node[(t + 1) * kL + b] +
                       beta[(t + 1) * kL + b];
        }
        beta[t * kL + a] = log_sum_exp(scratch, kL);
      }
    }
  }
};

// NLL contribution of one sentence plus model-expectation gradient terms.
double sentence_nll_and_gradient(const CompiledSentence& s,
                                 const FeatureIndex& index,
                                 const std::vector<double>& w,
                                 const EdgeScores& edges, Lattice& lat,
                                 std::size_t sentence_idx,
                                 std::vector<double>& grad) {
  const std::size_t len = s.length();
  if (len == 0) return 0.0;
  lat.fill_node_scores(s, index, w);
  const double log_z = lat.forward(edges, len);
  if (!std::isfinite(log_z)) {
    throw NumericalError("non-finite partition function at sentence " +
                         std::to_string(sentence_idx));
  }
  lat.backward(edges, len);

  // Gold path score and empirical counts.
  double gold_score = 0.0;
  for (std::size_t t = 0; t < len; ++t) {
    const std::size_t y = s.gold[t];
    gold_score += lat.node[t * kL + y];
    for (std::uint32_t i = s.offsets[t]; i < s.offsets[t + 1]; ++i) {
      grad[index.unigram_slot(s.feats[i], y)] -= 1.0;
    }
    if (t > 0) {
      const std::size_t a = s.gold[t - 1];
      gold_score += edges.score[a * kL + y];
      for (std::size_t k = 0; k < edges.blocks; ++k) {
        grad[index.transition_slot(k, a, y)] -= 1.0;
      }
    }
  }

  // Model expectations.
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t y = 0; y < kL; ++y) {
      const double p =
          std::exp(lat.alpha[t * kL + y] + lat.beta[t * kL + y] - log_z);
      if (p == 0.0) continue;
      for (std::uint32_t i = s.offsets[t]; i < s.offsets[t + 1]; ++i) {
        grad[index.unigram_slot(s.feats[i], y)] += p;
      }
    }
  }
  if (edges.blocks > 0) {
    for (std::size_t t = 1; t < len; ++t) {
      for (std::size_t a = 0; a < kL; ++a) {
        for (std::size_t b = 0; b < kL; ++b) {
          const double p = std::exp(lat.alpha[(t - 1) * kL + a] +
                                    edges.score[a * kL + b] +
                                    lat.node[t * kL + b] +
                                    lat.beta[t * kL + b] - log_z);
          if (p == 0.0) continue;
          for (std::size_t k = 0; k < edges.blocks; ++k) {
            grad[index.transition_slot(k, a, b)] += p;
          }
        }
      }
    }
  }

  return log_z - gold_score;
}

// Penalized negative log-likelihood over all sentences. Work is split
// into contiguous blocks per worker and partial results are reduced in
// worker order, keeping the summation order fixed.
class CrfObjective {
 public:
  CrfObjective(const FeatureIndex& index,
               const std::vector<CompiledSentence>& sentences, double sigma,
               int threads)
      : index_(index),
        sentences_(sentences),
        sigma_(sigma),
        threads_(std::max(1, threads)) {}

  double operator()(const std::vector<double>& w, std::vector<double>& grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const EdgeScores edges = EdgeScores::make(index_, w);
    const std::size_t n = sentences_.size();
    const auto workers =
        static_cast<std::size_t>(std::min<std::size_t>(threads_, std::max<std::size_t>(n, 1)));

    double nll = 0.0;
    if (workers <= 1) {
      Lattice lat;
      for (std::size_t i = 0; i < n; ++i) {
        nll += sentence_nll_and_gradient(sentences_[i], index_, w, edges, lat,
                                         i, grad);
      }
    } else {
      std::vector<std::vector<double>> partial_grad(
          workers, std::vector<double>(grad.size(), 0.0));
      std::vector<double> partial_nll(workers, 0.0);
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (std::size_t wk = 0; wk < workers; ++wk) {
        pool.emplace_back([&, wk] {
          const std::size_t begin = wk * n / workers;
          const std::size_t end = (wk + 1) * n / workers;
          try {
            Lattice lat;
            for (std::size_t i = begin; i < end; ++i) {
              partial_nll[wk] += sentence_nll_and_gradient(
                  sentences_[i], index_, w, edges, lat, i, partial_grad[wk]);
            }
          } catch (...) {
            errors[wk] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
      }
      for (std::size_t wk = 0; wk < workers; ++wk) {
        nll += partial_nll[wk];
        const auto& pg = partial_grad[wk];
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += pg[i];
      }
    }

    if (std::isfinite(sigma_)) {
      const double inv_sq = 1.0 / (sigma_ * sigma_);
      double penalty = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        penalty += w[i] * w[i];
        grad[i] += w[i] * inv_sq;
      }
      nll += 0.5 * penalty * inv_sq;
    }
    return nll;
  }

 private:
  const FeatureIndex& index_;
  const std::vector<CompiledSentence>& sentences_;
  double sigma_;
  int threads_;
};

std::vector<CompiledSentence> compile_training_grids(
    const std::vector<TokenGrid>& grids, const CrfModel& model) {
  std::vector<CompiledSentence> out;
  out.reserve(grids.size());
  for (const auto& grid : grids) {
    if (!grid.has_gold()) {
      throw InvalidInputError("training grid is missing the gold label column");
    }
    if (grid.column_count() != model.obs_columns()) {
      throw InvalidInputError(
          "grid has " + std::to_string(grid.column_count()) +
          " observation column(s) but the model expects " +
          std::to_string(model.obs_columns()));
    }
    out.push_back(compile_sentence(grid, model.index(), model.templates()));
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(l2_sigma > 0.0)) throw InvalidInputError("l2_sigma must be positive");
  if (max_iterations == 0) {
    throw InvalidInputError("max_iterations must be positive");
  }
  if (!(gradient_tolerance > 0.0)) {
    throw InvalidInputError("gradient_tolerance must be positive");
  }
  if (threads < 1) throw InvalidInputError("threads must be at least 1");
}

FeatureIndex FeatureIndex::build(const std::vector<TokenGrid>& grids,
                                 const TemplateSet& templates,
                                 std::size_t cutoff) {
  FeatureIndex index;
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& grid : grids) {
    for (std::size_t t = 0; t < grid.length(); ++t) {
      for (const Template& tpl : templates.templates()) {
        if (tpl.kind() != TemplateKind::Unigram) continue;
        ++counts[expand(tpl, grid, t)];
      }
    }
  }
  // Second pass assigns slots in first-occurrence order, independent of
  // the hash map's iteration order.
  for (const auto& grid : grids) {
    for (std::size_t t = 0; t < grid.length(); ++t) {
      for (const Template& tpl : templates.templates()) {
        if (tpl.kind() != TemplateKind::Unigram) continue;
        std::string feat = expand(tpl, grid, t);
        const auto it = counts.find(feat);
        if (it == counts.end() || it->second < std::max<std::size_t>(cutoff, 1)) {
          continue;
        }
        counts.erase(it);
        const auto id = static_cast<std::uint32_t>(index.strings_.size());
        index.lookup_.emplace(feat, id);
        index.strings_.push_back(std::move(feat));
      }
    }
  }
  index.transition_blocks_ = templates.transition_count();
  if (index.strings_.empty()) {
    throw ConfigError("no features survive the cutoff of " +
                      std::to_string(cutoff));
  }
  return index;
}

FeatureIndex FeatureIndex::from_parts(std::vector<std::string> feature_strings,
                                      std::size_t transition_blocks) {
  FeatureIndex index;
  index.strings_ = std::move(feature_strings);
  index.lookup_.reserve(index.strings_.size());
  for (std::size_t i = 0; i < index.strings_.size(); ++i) {
    if (!index.lookup_.emplace(index.strings_[i], static_cast<std::uint32_t>(i))
             .second) {
      throw FormatError("duplicate feature string: " + index.strings_[i]);
    }
  }
  index.transition_blocks_ = transition_blocks;
  return index;
}

std::optional<std::uint32_t> FeatureIndex::find(const std::string& feature) const {
  const auto it = lookup_.find(feature);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

CrfModel::CrfModel(TemplateSet templates, FeatureIndex index,
                   std::vector<double> weights, TrainMeta meta)
    : templates_(std::move(templates)),
      index_(std::move(index)),
      weights_(std::move(weights)),
      meta_(std::move(meta)) {
  if (weights_.size() != index_.slot_count()) {
    throw InvalidInputError("weight vector size does not match feature index");
  }
}

void CrfModel::set_weights(std::vector<double> weights) {
  if (weights.size() != index_.slot_count()) {
    throw InvalidInputError("weight vector size does not match feature index");
  }
  for (const double w : weights) {
    if (!std::isfinite(w)) throw InvalidInputError("weights must be finite");
  }
  weights_ = std::move(weights);
}

CrfModel build_model(const std::vector<TokenGrid>& grids,
                     const TemplateSet& templates, const TrainConfig& config) {
  config.validate();
  if (grids.empty()) throw InvalidInputError("training corpus is empty");
  for (const auto& grid : grids) {
    if (!grid.has_gold()) {
      throw InvalidInputError("training grid is missing the gold label column");
    }
    if (grid.column_count() != grids[0].column_count()) {
      throw InvalidInputError("training grids have unequal column counts");
    }
  }
  templates.validate_columns(grids[0].column_count());

  FeatureIndex index = FeatureIndex::build(grids, templates, config.feature_cutoff);
  TrainMeta meta;
  meta.config = config;
  meta.obs_columns = grids[0].column_count();
  meta.corpus_fingerprint = fingerprint_grids(grids);
  std::vector<double> weights(index.slot_count(), 0.0);
  return CrfModel(templates, std::move(index), std::move(weights), meta);
}

std::pair<double, std::vector<double>> log_likelihood_and_gradient(
    const CrfModel& model, const std::vector<TokenGrid>& grids) {
  const std::vector<CompiledSentence> sentences =
      compile_training_grids(grids, model);
  CrfObjective objective(model.index(), sentences, model.meta().config.l2_sigma,
                         model.meta().config.threads);
  std::vector<double> grad(model.weights().size(), 0.0);
  const double value = objective(model.weights(), grad);
  return {value, std::move(grad)};
}

std::vector<std::array<double, 4>> marginals(const CrfModel& model,
                                             const TokenGrid& grid) {
  if (grid.column_count() != model.obs_columns() && grid.length() > 0) {
    throw InvalidInputError(
        "grid has " + std::to_string(grid.column_count()) +
        " observation column(s) but the model expects " +
        std::to_string(model.obs_columns()));
  }
  std::vector<std::array<double, 4>> out;
  const std::size_t len = grid.length();
  if (len == 0) return out;
  const CompiledSentence s =
      compile_sentence(grid, model.index(), model.templates());
  const EdgeScores edges = EdgeScores::make(model.index(), model.weights());
  Lattice lat;
  lat.fill_node_scores(s, model.index(), model.weights());
  const double log_z = lat.forward(edges, len);
  if (!std::isfinite(log_z)) {
    throw NumericalError("non-finite partition function at sentence 0");
  }
  lat.backward(edges, len);
  out.resize(len);
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t y = 0; y < kL; ++y) {
      out[t][y] = std::exp(lat.alpha[t * kL + y] + lat.beta[t * kL + y] - log_z);
    }
  }
  return out;
}

TagSeq viterbi(const CrfModel& model, const TokenGrid& grid) {
  const std::size_t len = grid.length();
  if (len == 0) return {};
  if (grid.column_count() != model.obs_columns()) {
    throw InvalidInputError(
        "grid has " + std::to_string(grid.column_count()) +
        " observation column(s) but the model expects " +
        std::to_string(model.obs_columns()));
  }
  const CompiledSentence s =
      compile_sentence(grid, model.index(), model.templates());
  const EdgeScores edges = EdgeScores::make(model.index(), model.weights());
  Lattice lat;
  lat.fill_node_scores(s, model.index(), model.weights());

  std::vector<double> best(len * kL, 0.0);
  std::vector<std::uint8_t> back(len * kL, 0);
  for (std::size_t y = 0; y < kL; ++y) best[y] = lat.node[y];
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t b = 0; b < kL; ++b) {
      double top = -std::numeric_limits<double>::infinity();
      std::uint8_t arg = 0;
      for (std::size_t a = 0; a < kL; ++a) {
        const double cand = best[(t - 1) * kL + a] + edges.score[a * kL + b];
        if (cand > top) {
          top = cand;
          arg = static_cast<std::uint8_t>(a);
        }
      }
      best[t * kL + b] = top + lat.node[t * kL + b];
      back[t * kL + b] = arg;
    }
  }

  std::size_t cur = 0;
  double top = best[(len - 1) * kL];
  for (std::size_t y = 1; y < kL; ++y) {
    if (best[(len - 1) * kL + y] > top) {
      top = best[(len - 1) * kL + y];
      cur = y;
    }
  }
  TagSeq tags(len, Tag::B);
  for (std::size_t t = len; t-- > 0;) {
    tags[t] = static_cast<Tag>(cur);
    if (t > 0) cur = back[t * kL + cur];
  }
  return tags;
}

CrfModel train(const std::vector<TokenGrid>& grids, const TemplateSet& templates,
               const TrainConfig& config, const TrainProgress& progress) {
  CrfModel model = build_model(grids, templates, config);
  std::vector<CompiledSentence> sentences;
  sentences.reserve(grids.size());
  for (const auto& grid : grids) {
    sentences.push_back(compile_sentence(grid, model.index(), model.templates()));
  }

  CrfObjective objective(model.index(), sentences, config.l2_sigma,
                         config.threads);
  std::vector<double> weights(model.index().slot_count(), 0.0);
  detail::LbfgsOptions options;
  options.max_iterations = config.max_iterations;
  options.gradient_tolerance = config.gradient_tolerance;
  const detail::LbfgsResult result = detail::lbfgs_minimize(
      [&objective](const std::vector<double>& w, std::vector<double>& g) {
        return objective(w, g);
      },
      weights, options,
      progress ? detail::LbfgsProgress(progress) : detail::LbfgsProgress());

  model.set_weights(std::move(weights));
  model.meta().iterations = result.iterations;
  model.meta().objective = result.objective;
  model.meta().stop_reason = result.stop_reason;
  return model;
}

namespace {

// Strict line-oriented reader for the model format.
struct LineReader {
  std::string_view text;
  std::size_t pos = 0;

  std::string_view require_line() {
    if (pos >= text.size()) throw FormatError("truncated model file");
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }

  std::string_view require_value(std::string_view key) {
    const std::string_view line = require_line();
    if (line.size() <= key.size() || line.substr(0, key.size()) != key ||
        line[key.size()] != ' ') {
      throw FormatError("expected '" + std::string(key) + "' record, got '" +
                        std::string(line) + "'");
    }
    return line.substr(key.size() + 1);
  }
};

std::size_t parse_size(std::string_view text, const char* what) {
  std::size_t value = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw FormatError(std::string("bad integer for ") + what + ": " +
                      std::string(text));
  }
  return value;
}

std::vector<double> parse_weight_row(std::string_view text, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < count; ++i) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    if (end == pos) throw FormatError("truncated weight row");
    const double v = parse_double(text.substr(pos, end - pos), "weight");
    if (!std::isfinite(v)) throw FormatError("non-finite weight in model file");
    out.push_back(v);
    pos = end;
  }
  if (pos != text.size() && text.find_first_not_of(' ', pos) != std::string_view::npos) {
    throw FormatError("trailing data in weight row");
  }
  return out;
}

}  // namespace

std::string CrfModel::serialize() const {
  std::string out;
  out += "MMCRF-MODEL v1\n";
  out += "obs_columns " + std::to_string(meta_.obs_columns) + "\n";
  out += "l2_sigma " + hex_double(meta_.config.l2_sigma) + "\n";
  out += "max_iterations " + std::to_string(meta_.config.max_iterations) + "\n";
  out += "gradient_tolerance " + hex_double(meta_.config.gradient_tolerance) + "\n";
  out += "feature_cutoff " + std::to_string(meta_.config.feature_cutoff) + "\n";
  out += "threads " + std::to_string(meta_.config.threads) + "\n";
  out += "iterations " + std::to_string(meta_.iterations) + "\n";
  out += "objective " + hex_double(meta_.objective) + "\n";
  out += "stop_reason " + (meta_.stop_reason.empty() ? "-" : meta_.stop_reason) + "\n";
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(meta_.corpus_fingerprint));
    out += "corpus_fingerprint " + std::string(buf) + "\n";
  }
  out += "labels B M E S\n";
  out += "template_set " + (templates_.name().empty() ? "-" : templates_.name()) + "\n";
  out += "templates " + std::to_string(templates_.templates().size()) + "\n";
  out += templates_.render();
  out += "features " + std::to_string(index_.unigram_feature_count()) + "\n";
  for (std::size_t f = 0; f < index_.unigram_feature_count(); ++f) {
    out += index_.feature_strings()[f];
    out += '\t';
    for (std::size_t y = 0; y < kL; ++y) {
      if (y > 0) out += ' ';
      out += hex_double(weights_[index_.unigram_slot(static_cast<std::uint32_t>(f), y)]);
    }
    out += '\n';
  }
  out += "transitions " + std::to_string(index_.transition_block_count()) + "\n";
  for (std::size_t k = 0; k < index_.transition_block_count(); ++k) {
    for (std::size_t a = 0; a < kL; ++a) {
      for (std::size_t b = 0; b < kL; ++b) {
        if (a + b > 0) out += ' ';
        out += hex_double(weights_[index_.transition_slot(k, a, b)]);
      }
    }
    out += '\n';
  }
  out += "end\n";
  return out;
}

CrfModel CrfModel::deserialize(std::string_view text) {
  LineReader reader{text};
  if (reader.require_line() != "MMCRF-MODEL v1") {
    throw FormatError("not a model file (bad magic or unsupported version)");
  }
  TrainMeta meta;
  meta.obs_columns = parse_size(reader.require_value("obs_columns"), "obs_columns");
  meta.config.l2_sigma = parse_double(reader.require_value("l2_sigma"), "l2_sigma");
  meta.config.max_iterations =
      parse_size(reader.require_value("max_iterations"), "max_iterations");
  meta.config.gradient_tolerance = parse_double(
      reader.require_value("gradient_tolerance"), "gradient_tolerance");
  meta.config.feature_cutoff =
      parse_size(reader.require_value("feature_cutoff"), "feature_cutoff");
  meta.config.threads = static_cast<int>(
      parse_size(reader.require_value("threads"), "threads"));
  meta.iterations = parse_size(reader.require_value("iterations"), "iterations");
  meta.objective = parse_double(reader.require_value("objective"), "objective");
  meta.stop_reason = std::string(reader.require_value("stop_reason"));
  if (meta.stop_reason == "-") meta.stop_reason.clear();
  {
    const std::string fp(reader.require_value("corpus_fingerprint"));
    char* end = nullptr;
    meta.corpus_fingerprint = std::strtoull(fp.c_str(), &end, 16);
    if (end != fp.c_str() + fp.size()) {
      throw FormatError("bad corpus fingerprint: " + fp);
    }
  }
  if (reader.require_line() != "labels B M E S") {
    throw FormatError("unsupported label alphabet");
  }
  std::string set_name(reader.require_value("template_set"));
  if (set_name == "-") set_name.clear();
  const std::size_t template_count =
      parse_size(reader.require_value("templates"), "templates");
  std::string template_text;
  for (std::size_t i = 0; i < template_count; ++i) {
    template_text += std::string(reader.require_line());
    template_text += '\n';
  }
  TemplateSet templates = TemplateSet::parse(template_text, set_name);
  if (templates.templates().size() != template_count) {
    throw FormatError("template count mismatch in model file");
  }

  const std::size_t feature_count =
      parse_size(reader.require_value("features"), "features");
  std::vector<std::string> strings;
  strings.reserve(feature_count);
  std::vector<std::vector<double>> unigram_rows;
  unigram_rows.reserve(feature_count);
  for (std::size_t f = 0; f < feature_count; ++f) {
    const std::string_view line = reader.require_line();
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string_view::npos) {
      throw FormatError("malformed feature record in model file");
    }
    strings.emplace_back(line.substr(0, tab));
    unigram_rows.push_back(parse_weight_row(line.substr(tab + 1), kL));
  }
  const std::size_t block_count =
      parse_size(reader.require_value("transitions"), "transitions");
  std::vector<std::vector<double>> transition_rows;
  transition_rows.reserve(block_count);
  for (std::size_t k = 0; k < block_count; ++k) {
    transition_rows.push_back(parse_weight_row(reader.require_line(), kL * kL));
  }
  if (reader.require_line() != "end") {
    throw FormatError("truncated model file (missing end marker)");
  }

  FeatureIndex index = FeatureIndex::from_parts(std::move(strings), block_count);
  if (index.transition_block_count() != templates.transition_count()) {
    throw FormatError("transition block count does not match templates");
  }
  std::vector<double> weights(index.slot_count(), 0.0);
  for (std::size_t f = 0; f < feature_count; ++f) {
    for (std::size_t y = 0; y < kL; ++y) {
      weights[index.unigram_slot(static_cast<std::uint32_t>(f), y)] =
          unigram_rows[f][y];
    }
  }
  for (std::size_t k = 0; k < block_count; ++k) {
    for (std::size_t a = 0; a < kL; ++a) {
      for (std::size_t b = 0; b < kL; ++b) {
        weights[index.transition_slot(k, a, b)] = transition_rows[k][a * kL + b];
      }
    }
  }
  return CrfModel(std::move(templates), std::move(index), std::move(weights),
                  std::move(meta));
}

void CrfModel::save(const std::string& path) const {
  io::write_file_atomic(path, serialize());
}

CrfModel CrfModel::load(const std::string& path) {
  return deserialize(io::read_file(path));
}

}  // namespace mmcrf
