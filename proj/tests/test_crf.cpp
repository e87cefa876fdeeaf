#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mmcrf/crf.hpp"
#include "mmcrf/errors.hpp"
#include "mmcrf/eval.hpp"
#include "mmcrf/io.hpp"
#include "mmcrf/pipeline.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"
#include "support/toy_corpus.hpp"

using namespace mmcrf;
using namespace mmcrf::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TokenGrid grid_from(const std::string& chars, const std::string& rough,
                    const std::string& gold) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    rows.push_back({std::string(1, chars[i]), std::string(1, rough[i])});
  }
  TagSeq gold_tags;
  for (const char c : gold) gold_tags.push_back(*tag_from_letter(c));
  return TokenGrid(std::move(rows), std::move(gold_tags));
}

// Random grids over a small alphabet; rough column is an arbitrary
// letter, gold is random.
TokenGrid random_grid(std::mt19937& rng, std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
  std::uniform_int_distribution<int> char_dist(0, 2);
  std::uniform_int_distribution<int> tag_dist(0, 3);
  const std::size_t len = len_dist(rng);
  std::string chars, rough, gold;
  for (std::size_t i = 0; i < len; ++i) {
    chars.push_back(static_cast<char>('a' + char_dist(rng)));
    rough.push_back(tag_letter(static_cast<Tag>(tag_dist(rng))));
    gold.push_back(tag_letter(static_cast<Tag>(tag_dist(rng))));
  }
  return grid_from(chars, rough, gold);
}

std::vector<double> random_weights(std::mt19937& rng, std::size_t n,
                                   double scale = 0.5) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> w(n);
  for (double& v : w) v = dist(rng);
  return w;
}

TrainConfig config_with(double sigma, std::size_t max_iter = 200,
                        double tol = 1e-6, int threads = 1) {
  TrainConfig config;
  config.l2_sigma = sigma;
  config.max_iterations = max_iter;
  config.gradient_tolerance = tol;
  config.threads = threads;
  return config;
}

}  // namespace

TEST_CASE("feature index slot arithmetic") {
  const TemplateSet single = TemplateSet::parse("U00:%x[0,0]\n");
  const std::vector<TokenGrid> grids = {grid_from("a", "S", "S")};
  const FeatureIndex index = FeatureIndex::build(grids, single, 1);
  CHECK(index.unigram_feature_count() == 1);
  CHECK(index.transition_block_count() == 0);
  CHECK(index.slot_count() == 4);

  CHECK_THROWS_AS(FeatureIndex::build(grids, single, 2), ConfigError);

  const TemplateSet two = TemplateSet::parse("U00:%x[0,0]\nU01:%x[-1,0]\nB\n");
  const FeatureIndex index2 = FeatureIndex::build(grids, two, 1);
  CHECK(index2.slot_count() == index2.unigram_feature_count() * 4 + 16);
}

TEST_CASE("feature index respects the cutoff and keeps first-occurrence order") {
  const TemplateSet set = TemplateSet::parse("U00:%x[0,0]\n");
  const std::vector<TokenGrid> grids = {grid_from("aba", "SSS", "SSS"),
                                        grid_from("ac", "SS", "SS")};
  const FeatureIndex index = FeatureIndex::build(grids, set, 2);
  // "U00:a" occurs 3 times, "U00:b"/"U00:c" once each.
  CHECK(index.unigram_feature_count() == 1);
  CHECK(index.find("U00:a").has_value());
  CHECK(!index.find("U00:b").has_value());

  const FeatureIndex all = FeatureIndex::build(grids, set, 1);
  CHECK(all.feature_strings() ==
        std::vector<std::string>{"U00:a", "U00:b", "U00:c"});
}

TEST_CASE("zero-weight negative log-likelihood is T ln 4") {
  const TemplateSet set = TemplateSet::parse("U00:%x[0,0]\nU01:%x[0,1]\nB\n");
  for (const std::size_t len : {1u, 3u, 7u}) {
    const std::string chars(len, 'a');
    const std::string tags(len, 'S');
    const std::vector<TokenGrid> grids = {grid_from(chars, tags, tags)};
    const CrfModel model = build_model(grids, set, config_with(1.0));
    const auto [nll, grad] = log_likelihood_and_gradient(model, grids);
    CHECK(std::abs(nll - static_cast<double>(len) * std::log(4.0)) < 1e-10);
    CHECK(grad.size() == model.weights().size());
  }
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937 rng(555);
  const TemplateSet set =
      TemplateSet::parse("U00:%x[0,0]\nU01:%x[-1,0]/%x[0,1]\nB\n");
  const std::vector<TokenGrid> grids = {random_grid(rng, 3, 5),
                                        random_grid(rng, 2, 4)};
  CrfModel model = build_model(grids, set, config_with(2.0));

  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> at =
        random_weights(rng, model.weights().size(), 0.7);
    model.set_weights(at);
    const auto [value, analytic] = log_likelihood_and_gradient(model, grids);
    CHECK(std::isfinite(value));
    const std::vector<double> numeric =
        finite_difference_gradient(model, grids, at);
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      const double rel = std::abs(analytic[i] - numeric[i]) /
                         std::max({1.0, std::abs(analytic[i]), std::abs(numeric[i])});
      worst = std::max(worst, rel);
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("gradient vanishes at a known unregularized optimum") {
  // One character with all four gold labels equally often: the uniform
  // model (all-zero weights) is the exact maximum-likelihood solution.
  const TemplateSet set = TemplateSet::parse("U00:%x[0,0]\nB\n");
  const std::vector<TokenGrid> grids = {
      grid_from("a", "S", "B"), grid_from("a", "S", "M"),
      grid_from("a", "S", "E"), grid_from("a", "S", "S")};
  const CrfModel model = build_model(grids, set, config_with(kInf));
  const auto [value, grad] = log_likelihood_and_gradient(model, grids);
  CHECK(value == doctest::Approx(4.0 * std::log(4.0)));
  for (const double g : grad) CHECK(std::abs(g) < 1e-12);
}

TEST_CASE("marginals are uniform at zero weights") {
  const TemplateSet set = TemplateSet::parse("U00:%x[0,0]\nB\n");
  const std::vector<TokenGrid> grids = {grid_from("abc", "SSS", "SSS")};
  const CrfModel model = build_model(grids, set, config_with(1.0));
  const auto m = marginals(model, grids[0]);
  REQUIRE(m.size() == 3);
  for (const auto& row : m) {
    for (const double p : row) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("length-1 marginals equal the softmax of the label scores") {
  const TemplateSet set = TemplateSet::parse("U00:%x[0,0]\n");
  const std::vector<TokenGrid> grids = {grid_from("a", "S", "S")};
  CrfModel model = build_model(grids, set, config_with(1.0));
  model.set_weights({1.25, -0.5, 0.0, 2.0});
  const auto m = marginals(model, grids[0]);
  REQUIRE(m.size() == 1);
  double z = 0.0;
  for (const double w : model.weights()) z += std::exp(w);
  for (std::size_t y = 0; y < 4; ++y) {
    CHECK(m[0][y] == doctest::Approx(std::exp(model.weights()[y]) / z)
                         .epsilon(1e-12));
  }
}

TEST_CASE("marginal rows sum to one and the partition function matches "
          "exhaustive enumeration") {
  std::mt19937 rng(9999);
  const TemplateSet set =
      TemplateSet::parse("U00:%x[0,0]\nU01:%x[0,1]\nU02:%x[-1,0]/%x[0,0]\nB\n");
  for (int trial = 0; trial < 60; ++trial) {
    const TokenGrid grid = random_grid(rng, 1, 6);
    const std::vector<TokenGrid> grids = {grid};
    CrfModel model = build_model(grids, set, config_with(kInf));
    model.set_weights(random_weights(rng, model.weights().size(), 1.0));

    const auto m = marginals(model, grid);
    for (const auto& row : m) {
      const double sum = row[0] + row[1] + row[2] + row[3];
      CHECK(std::abs(sum - 1.0) < 1e-8);
    }

    // log Z recovered from the public likelihood API (no penalty).
    const auto node = oracle_node_scores(model, grid);
    const auto edge = oracle_edge_scores(model);
    std::vector<int> gold_path;
    for (const Tag t : grid.gold()) gold_path.push_back(static_cast<int>(t));
    const double gold_score = oracle_path_score(node, edge, gold_path);
    const double nll = log_likelihood_and_gradient(model, grids).first;
    const double log_z = nll + gold_score;
    CHECK(std::abs(log_z - oracle_log_partition(node, edge)) < 1e-8);
  }
}

TEST_CASE("viterbi ties break toward the lowest label index") {
  const TemplateSet set = TemplateSet::parse("U00:%x[0,0]\nB\n");
  const std::vector<TokenGrid> grids = {grid_from("abc", "SSS", "SSS")};
  const CrfModel model = build_model(grids, set, config_with(1.0));
  CHECK(viterbi(model, grids[0]) == TagSeq{Tag::B, Tag::B, Tag::B});
}

TEST_CASE("viterbi equals the exhaustive argmax") {
  std::mt19937 rng(31415);
  const TemplateSet set =
      TemplateSet::parse("U00:%x[0,0]\nU01:%x[0,1]\nU02:%x[1,0]\nB\n");
  for (int trial = 0; trial < 100; ++trial) {
    const TokenGrid train_grid = random_grid(rng, 2, 6);
    const std::vector<TokenGrid> grids = {train_grid};
    CrfModel model = build_model(grids, set, config_with(1.0));
    model.set_weights(random_weights(rng, model.weights().size(), 1.0));

    const TokenGrid decode_grid = random_grid(rng, 1, 6);
    const TagSeq got = viterbi(model, decode_grid);
    const auto node = oracle_node_scores(model, decode_grid);
    const auto edge = oracle_edge_scores(model);
    const std::vector<int> want = oracle_best_path(node, edge);
    REQUIRE(got.size() == want.size());
    for (std::size_t t = 0; t < got.size(); ++t) {
      CHECK(static_cast<int>(got[t]) == want[t]);
    }
  }
}

TEST_CASE("training overfits a separable toy corpus") {
  const auto corpus = toy_corpus();
  const auto grids = make_training_grids(corpus, toy_lexicon());
  const CrfModel model =
      train(grids, TemplateSet::preset("exp1"), config_with(10.0, 200, 1e-4));

  std::vector<Segmentation> decoded;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const TagSeq tags = viterbi(model, grids[i]);
    decoded.push_back(tags_to_words(join_words(corpus[i]), tags));
  }
  const EvalReport report = score(corpus, decoded);
  CHECK(report.f_score == doctest::Approx(1.0));
  CHECK(report.precision == doctest::Approx(1.0));
}

TEST_CASE("objective is non-increasing across accepted iterations") {
  const auto corpus = toy_corpus();
  const auto grids = make_training_grids(corpus, toy_lexicon());
  std::vector<double> objectives;
  train(grids, TemplateSet::preset("exp1"), config_with(1.0, 40, 1e-8),
        [&objectives](std::size_t, double obj, double) {
          objectives.push_back(obj);
        });
  REQUIRE(objectives.size() > 3);
  for (std::size_t i = 1; i < objectives.size(); ++i) {
    CHECK(objectives[i] <= objectives[i - 1] + 1e-12);
  }
}

TEST_CASE("a strong prior pushes weights to zero and marginals to uniform") {
  const auto corpus = toy_corpus(6);
  const auto grids = make_training_grids(corpus, toy_lexicon());
  const CrfModel model =
      train(grids, TemplateSet::preset("exp1"), config_with(1e-4, 100, 1e-10));
  double max_abs = 0.0;
  for (const double w : model.weights()) max_abs = std::max(max_abs, std::abs(w));
  CHECK(max_abs < 1e-4);
  const auto m = marginals(model, grids[0]);
  for (const auto& row : m) {
    for (const double p : row) CHECK(p == doctest::Approx(0.25).epsilon(1e-2));
  }
}

TEST_CASE("training is deterministic") {
  const auto corpus = toy_corpus(8);
  const auto grids = make_training_grids(corpus, toy_lexicon());
  const TrainConfig config = config_with(1.0, 30, 1e-8);
  const CrfModel a = train(grids, TemplateSet::preset("exp2"), config);
  const CrfModel b = train(grids, TemplateSet::preset("exp2"), config);
  CHECK(a.weights() == b.weights());
  CHECK(a.serialize() == b.serialize());
}

TEST_CASE("threaded training is deterministic for a fixed thread count") {
  const auto corpus = toy_corpus(8);
  const auto grids = make_training_grids(corpus, toy_lexicon());
  const TrainConfig config = config_with(1.0, 20, 1e-8, 3);
  const CrfModel a = train(grids, TemplateSet::preset("exp1"), config);
  const CrfModel b = train(grids, TemplateSet::preset("exp1"), config);
  CHECK(a.weights() == b.weights());
}

TEST_CASE("model save/load round trip") {
  const auto corpus = toy_corpus(6);
  const auto grids = make_training_grids(corpus, toy_lexicon());
  const CrfModel model =
      train(grids, TemplateSet::preset("exp4"), config_with(2.0, 40, 1e-6));

  TempDir dir;
  const std::string path = dir.file("model.crf");
  model.save(path);
  const CrfModel loaded = CrfModel::load(path);

  CHECK(loaded.weights() == model.weights());
  CHECK(loaded.index().feature_strings() == model.index().feature_strings());
  CHECK(loaded.index().transition_block_count() ==
        model.index().transition_block_count());
  CHECK(loaded.templates().render() == model.templates().render());
  CHECK(loaded.meta().iterations == model.meta().iterations);
  CHECK(loaded.meta().corpus_fingerprint == model.meta().corpus_fingerprint);
  CHECK(loaded.serialize() == model.serialize());

  for (const auto& grid : grids) {
    CHECK(viterbi(loaded, grid) == viterbi(model, grid));
  }
}

TEST_CASE("model load rejects corrupt files") {
  TempDir dir;
  const std::string bad_magic = dir.write("bad.crf", "NOT-A-MODEL v9\n");
  CHECK_THROWS_AS(CrfModel::load(bad_magic), FormatError);

  const auto corpus = toy_corpus(4);
  const auto grids = make_training_grids(corpus, toy_lexicon());
  const CrfModel model =
      train(grids, TemplateSet::preset("exp1"), config_with(1.0, 10, 1e-6));
  const std::string full = model.serialize();
  for (const double frac : {0.25, 0.6, 0.95}) {
    const std::string truncated =
        full.substr(0, static_cast<std::size_t>(full.size() * frac));
    CHECK_THROWS_AS(CrfModel::deserialize(truncated), FormatError);
  }
}

TEST_CASE("likelihood fails loudly on non-finite lattices") {
  const TemplateSet set = TemplateSet::parse("U00:%x[0,0]\nU01:%x[0,1]\n");
  const std::vector<TokenGrid> grids = {grid_from("aa", "SS", "SS")};
  CrfModel model = build_model(grids, set, config_with(kInf));
  std::vector<double> huge(model.weights().size(), 1e308);
  model.set_weights(huge);
  CHECK_THROWS_WITH_AS(log_likelihood_and_gradient(model, grids),
                       doctest::Contains("sentence 0"), NumericalError);
}

TEST_CASE("input validation") {
  const TemplateSet set = TemplateSet::parse("U00:%x[0,0]\n");
  CHECK_THROWS_AS(build_model({}, set, config_with(1.0)), InvalidInputError);

  const std::vector<std::vector<std::string>> no_gold_rows = {{"a", "S"}};
  const TokenGrid no_gold(no_gold_rows);
  CHECK_THROWS_AS(build_model({no_gold}, set, config_with(1.0)),
                  InvalidInputError);

  TrainConfig bad = config_with(1.0);
  bad.l2_sigma = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
  bad = config_with(1.0);
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
  bad = config_with(1.0);
  bad.threads = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);

  // decode-time column mismatch
  const std::vector<TokenGrid> grids = {grid_from("a", "S", "S")};
  const CrfModel model = build_model(grids, set, config_with(1.0));
  const std::vector<std::vector<std::string>> one_col = {{"a"}};
  const TokenGrid wrong(one_col);
  CHECK_THROWS_AS(viterbi(model, wrong), InvalidInputError);
}
