#ifndef MMCRF_CRF_HPP
#define MMCRF_CRF_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmcrf/corpus.hpp"
#include "mmcrf/templates.hpp"

namespace mmcrf {

// Fixed label set B, M, E, S with stable indices.
class LabelAlphabet {
 public:
  static constexpr std::size_t size() { return 4; }
  static char letter(std::size_t index) {
    return tag_letter(static_cast<Tag>(index));
  }
  static std::optional<std::size_t> index(char letter) {
    const auto tag = tag_from_letter(letter);
    if (!tag) return std::nullopt;
    return static_cast<std::size_t>(*tag);
  }
};

struct TrainConfig {
  // Scale of the Gaussian prior; +infinity disables the penalty.
  double l2_sigma = 1.0;
  std::size_t max_iterations = 200;
  // Stop when the L2 norm of the penalized gradient falls below this.
  double gradient_tolerance = 1e-4;
  // Keep feature strings occurring at least this many times.
  std::size_t feature_cutoff = 1;
  // Worker threads for the per-sentence likelihood terms. The reduction
  // order is fixed per thread count, so results are reproducible for a
  // given configuration.
  int threads = 1;

  void validate() const;
};

// Maps expanded feature strings to weight slots. A unigram feature owns
// one slot per label; each transition template owns one slot per label
// pair, laid out after all unigram slots.
class FeatureIndex {
 public:
  FeatureIndex() = default;

  // Indexes every feature string occurring at least `cutoff` times in
  // the training grids, in first-occurrence order.
  static FeatureIndex build(const std::vector<TokenGrid>& grids,
                            const TemplateSet& templates, std::size_t cutoff);

  // Rebuild from serialized parts (model loading).
  static FeatureIndex from_parts(std::vector<std::string> feature_strings,
                                 std::size_t transition_blocks);

  std::optional<std::uint32_t> find(const std::string& feature) const;

  std::size_t unigram_feature_count() const { return strings_.size(); }
  std::size_t transition_block_count() const { return transition_blocks_; }
  std::size_t slot_count() const {
    return strings_.size() * LabelAlphabet::size() +
           transition_blocks_ * LabelAlphabet::size() * LabelAlphabet::size();
  }
  std::size_t unigram_slot(std::uint32_t feature_id, std::size_t label) const {
    return feature_id * LabelAlphabet::size() + label;
  }
  std::size_t transition_slot(std::size_t block, std::size_t prev,
                              std::size_t cur) const {
    return strings_.size() * LabelAlphabet::size() +
           block * LabelAlphabet::size() * LabelAlphabet::size() +
           prev * LabelAlphabet::size() + cur;
  }

  const std::vector<std::string>& feature_strings() const { return strings_; }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, std::uint32_t> lookup_;
  std::size_t transition_blocks_ = 0;
};

struct TrainMeta {
  TrainConfig config;
  std::size_t obs_columns = 0;
  std::size_t iterations = 0;
  double objective = 0.0;
  std::string stop_reason;
  std::uint64_t corpus_fingerprint = 0;
};

// Label alphabet + templates + feature index + weights.
class CrfModel {
 public:
  CrfModel() = default;
  CrfModel(TemplateSet templates, FeatureIndex index, std::vector<double> weights,
           TrainMeta meta);

  const TemplateSet& templates() const { return templates_; }
  const FeatureIndex& index() const { return index_; }
  const std::vector<double>& weights() const { return weights_; }
  const TrainMeta& meta() const { return meta_; }
  TrainMeta& meta() { return meta_; }
  std::size_t obs_columns() const { return meta_.obs_columns; }

  // Replaces the weight vector (size-checked). Weights must be finite.
  void set_weights(std::vector<double> weights);

  // Versioned text format; load(save(m)) preserves templates, index and
  // weights exactly. Throws FormatError on bad magic, version or
  // truncation.
  void save(const std::string& path) const;
  static CrfModel load(const std::string& path);

  std::string serialize() const;
  static CrfModel deserialize(std::string_view text);

 private:
  TemplateSet templates_;
  FeatureIndex index_;
  std::vector<double> weights_;
  TrainMeta meta_;
};

// Builds the feature index over the training grids and returns a model
// with zero weights (no optimization). Grids must carry gold labels.
CrfModel build_model(const std::vector<TokenGrid>& grids,
                     const TemplateSet& templates, const TrainConfig& config = {});

// L2-penalized negative log-likelihood of the gold labels and its exact
// gradient at the model's current weights, computed per sentence by
// forward-backward in log space.
std::pair<double, std::vector<double>> log_likelihood_and_gradient(
    const CrfModel& model, const std::vector<TokenGrid>& grids);

// Per-position label distributions; each row sums to 1.
std::vector<std::array<double, 4>> marginals(const CrfModel& model,
                                             const TokenGrid& grid);

// Highest-scoring label sequence; score ties are broken toward the
// lowest label index at each backtrack step.
TagSeq viterbi(const CrfModel& model, const TokenGrid& grid);

using TrainProgress =
    std::function<void(std::size_t iteration, double objective, double grad_norm)>;

// Batch quasi-Newton training of the penalized likelihood. Deterministic
// for fixed inputs and configuration; the objective never increases
// across accepted iterations.
CrfModel train(const std::vector<TokenGrid>& grids, const TemplateSet& templates,
               const TrainConfig& config = {}, const TrainProgress& progress = {});

}  // namespace mmcrf

#endif  // MMCRF_CRF_HPP
