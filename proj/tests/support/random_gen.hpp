#ifndef MMCRF_TESTS_SUPPORT_RANDOM_GEN_HPP
#define MMCRF_TESTS_SUPPORT_RANDOM_GEN_HPP

#include <random>
#include <string>
#include <vector>

#include "mmcrf/corpus.hpp"

namespace mmcrf::testing {

// Mixed ASCII/CJK alphabet so multi-byte encoding paths stay exercised.
inline char32_t random_char(std::mt19937& rng, int alphabet_size = 6) {
  static const std::u32string pool = U"ab一二三四五六";
  std::uniform_int_distribution<std::size_t> dist(
      0, std::min<std::size_t>(alphabet_size, pool.size()) - 1);
  return pool[dist(rng)];
}

inline std::u32string random_text(std::mt19937& rng, std::size_t min_len,
                                  std::size_t max_len, int alphabet_size = 6) {
  std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
  const std::size_t len = len_dist(rng);
  std::u32string text;
  text.reserve(len);
  for (std::size_t i = 0; i < len; ++i) text.push_back(random_char(rng, alphabet_size));
  return text;
}

// Random split of a random text into non-empty words.
inline Segmentation random_segmentation(std::mt19937& rng, std::size_t min_chars = 1,
                                        std::size_t max_chars = 12) {
  const std::u32string text = random_text(rng, min_chars, max_chars);
  Segmentation seg;
  std::size_t pos = 0;
  std::uniform_int_distribution<std::size_t> word_len(1, 4);
  while (pos < text.size()) {
    const std::size_t len = std::min(word_len(rng), text.size() - pos);
    seg.push_back(text.substr(pos, len));
    pos += len;
  }
  return seg;
}

inline std::vector<std::u32string> random_lexicon_words(std::mt19937& rng,
                                                        std::size_t max_words,
                                                        int alphabet_size = 5) {
  std::uniform_int_distribution<std::size_t> count_dist(0, max_words);
  const std::size_t count = count_dist(rng);
  std::vector<std::u32string> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    words.push_back(random_text(rng, 1, 4, alphabet_size));
  }
  return words;
}

}  // namespace mmcrf::testing

#endif  // MMCRF_TESTS_SUPPORT_RANDOM_GEN_HPP
