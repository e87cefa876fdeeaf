#ifndef MMCRF_MMSEG_HPP
#define MMCRF_MMSEG_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mmcrf/corpus.hpp"
#include "mmcrf/lexicon.hpp"

namespace mmcrf {

// Morphemic-freedom scores for single characters (log-frequency scale).
// Missing characters score 0.
class FreedomTable {
 public:
  FreedomTable() = default;

  // File format: UTF-8 lines "char<TAB>score".
  static FreedomTable load(const std::string& path);
  static FreedomTable parse(std::string_view text);

  void set(char32_t cp, double score);
  double score(char32_t cp) const;
  std::size_t size() const { return scores_.size(); }

 private:
  std::unordered_map<char32_t, double> scores_;
};

// One segmentation candidate: up to three consecutive words starting at
// a position.
struct Chunk {
  std::array<std::uint32_t, 3> word_lengths{};
  int word_count = 0;
  std::uint32_t total_len = 0;
  std::uint64_t len_sum_sq = 0;
  double freedom = 0.0;

  void push(std::uint32_t len) {
    word_lengths[static_cast<std::size_t>(word_count)] = len;
    ++word_count;
    total_len += len;
    len_sum_sq += static_cast<std::uint64_t>(len) * len;
  }

  std::uint32_t first_len() const { return word_lengths[0]; }
  double avg_len() const {
    return static_cast<double>(total_len) / word_count;
  }
  // Population variance of the word lengths.
  double variance() const {
    const double mean = avg_len();
    double acc = 0.0;
    for (int i = 0; i < word_count; ++i) {
      const double d = static_cast<double>(word_lengths[static_cast<std::size_t>(i)]) - mean;
      acc += d * d;
    }
    return acc / word_count;
  }
};

// All chunks of up to three consecutive words starting at pos, where
// each word is a lexicon match or the single-character fallback. Every
// prefix of a longer chunk is itself listed. Non-empty for any valid
// position.
std::vector<Chunk> gen_chunks(const Lexicon& lex, const Sentence& sent,
                              std::size_t pos,
                              const FreedomTable* freedom = nullptr);

// Rule cascade: (1) max total length, (2) max average word length,
// (3) min length variance, (4) max single-character freedom; remaining
// ties prefer the longest first word, then the earliest chunk in
// enumeration order. Length statistics are compared with exact integer
// arithmetic so the cascade is immune to rounding.
const Chunk& pick_chunk(const std::vector<Chunk>& chunks);

// Left-to-right scan committing only the first word of the winning
// chunk at each position. Output words concatenate back to the input.
Segmentation mmseg_segment(const Lexicon& lex, const Sentence& sent,
                           const FreedomTable* freedom = nullptr);

// words_to_tags(mmseg_segment(...)): the per-character feature column.
TagSeq mmseg_tags(const Lexicon& lex, const Sentence& sent,
                  const FreedomTable* freedom = nullptr);

}  // namespace mmcrf

#endif  // MMCRF_MMSEG_HPP
