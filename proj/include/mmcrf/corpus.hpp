#ifndef MMCRF_CORPUS_HPP
#define MMCRF_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmcrf {

// One sentence as a sequence of Unicode codepoints.
using Sentence = std::u32string;

// A sentence split into non-empty words; joining the words restores the
// raw sentence.
using Segmentation = std::vector<std::u32string>;

// Per-character word-boundary tags: Begin / Middle / End of a
// multi-character word, or a Single-character word.
enum class Tag : std::uint8_t { B = 0, M = 1, E = 2, S = 3 };

using TagSeq = std::vector<Tag>;

inline constexpr int kNumTags = 4;

char tag_letter(Tag tag);
std::optional<Tag> tag_from_letter(char letter);

// B(M*)E for words of two or more characters, S for single characters.
TagSeq words_to_tags(const Segmentation& seg);

// Inverse of words_to_tags on well-formed tag sequences. Ill-formed
// sequences are repaired left to right: a tag that cannot legally extend
// the open word closes it before the current position. Never drops or
// duplicates characters.
Segmentation tags_to_words(const Sentence& sent, const TagSeq& tags);

Sentence join_words(const Segmentation& seg);

// S|B at the start, B/M followed by M/E, never ending in B or M.
bool is_well_formed(const TagSeq& tags);

// Bakeoff-style corpus: UTF-8, one sentence per line, words separated by
// whitespace; blank lines separate sentences and are skipped.
std::vector<Segmentation> parse_segmented_lines(std::string_view text);
std::string render_segmented(const std::vector<Segmentation>& segs);

std::vector<Segmentation> read_segmented_corpus(const std::string& path);
void write_segmented_corpus(const std::vector<Segmentation>& segs,
                            const std::string& path);

}  // namespace mmcrf

#endif  // MMCRF_CORPUS_HPP
