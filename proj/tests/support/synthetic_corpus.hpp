#ifndef MMCRF_TESTS_SUPPORT_SYNTHETIC_CORPUS_HPP
#define MMCRF_TESTS_SUPPORT_SYNTHETIC_CORPUS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "mmcrf/corpus.hpp"
#include "mmcrf/lexicon.hpp"

namespace mmcrf::testing {

// Word-based generative corpus over a deliberately small character
// inventory: characters are reused across many words with conflicting
// boundary roles, so character context alone underdetermines the
// segmentation while a word list resolves most of it.
struct SyntheticCorpus {
  std::vector<Segmentation> train;
  std::vector<Segmentation> heldout;
};

inline SyntheticCorpus make_synthetic_corpus(std::size_t train_sentences,
                                             std::size_t heldout_sentences,
                                             std::uint32_t seed = 20250701) {
  std::mt19937 rng(seed);

  const std::size_t alphabet_size = 48;
  std::vector<char32_t> alphabet;
  alphabet.reserve(alphabet_size);
  for (std::size_t i = 0; i < alphabet_size; ++i) {
    alphabet.push_back(static_cast<char32_t>(0x4E00 + i));
  }

  // ~700 distinct words, mostly bigrams.
  std::set<std::u32string> vocab_set;
  std::uniform_int_distribution<std::size_t> char_dist(0, alphabet_size - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (vocab_set.size() < 700) {
    const double u = unit(rng);
    std::size_t len = 2;
    if (u < 0.10) {
      len = 1;
    } else if (u < 0.65) {
      len = 2;
    } else if (u < 0.90) {
      len = 3;
    } else {
      len = 4;
    }
    std::u32string word;
    for (std::size_t i = 0; i < len; ++i) word.push_back(alphabet[char_dist(rng)]);
    vocab_set.insert(word);
  }
  const std::vector<std::u32string> vocab(vocab_set.begin(), vocab_set.end());

  std::uniform_int_distribution<std::size_t> sent_len(5, 14);
  auto sample_sentence = [&]() {
    Segmentation seg;
    const std::size_t len = sent_len(rng);
    for (std::size_t i = 0; i < len; ++i) {
      // Quadratic skew toward low ranks, a rough power-law frequency.
      const double u = unit(rng);
      const auto idx = static_cast<std::size_t>(u * u * static_cast<double>(vocab.size()));
      seg.push_back(vocab[std::min(idx, vocab.size() - 1)]);
    }
    return seg;
  };

  SyntheticCorpus corpus;
  corpus.train.reserve(train_sentences);
  corpus.heldout.reserve(heldout_sentences);
  for (std::size_t i = 0; i < train_sentences; ++i) {
    corpus.train.push_back(sample_sentence());
  }
  for (std::size_t i = 0; i < heldout_sentences; ++i) {
    corpus.heldout.push_back(sample_sentence());
  }
  return corpus;
}

// The training-set vocabulary, the lexicon MMSEG gets to use.
inline Lexicon lexicon_from_corpus(const std::vector<Segmentation>& corpus) {
  std::set<std::u32string> words;
  for (const auto& seg : corpus) words.insert(seg.begin(), seg.end());
  Lexicon lex;
  for (const auto& w : words) lex.add(w);
  return lex;
}

}  // namespace mmcrf::testing

#endif  // MMCRF_TESTS_SUPPORT_SYNTHETIC_CORPUS_HPP
