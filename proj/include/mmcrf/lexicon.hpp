#ifndef MMCRF_LEXICON_HPP
#define MMCRF_LEXICON_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mmcrf/corpus.hpp"

namespace mmcrf {

// Prefix-searchable word set merged from one or more dictionary files.
// Immutable once loaded; concurrent readers are safe.
class Lexicon {
 public:
  Lexicon() = default;

  // Union of all files. Per line the first whitespace-delimited field is
  // the word (trailing frequency columns are ignored); blank lines and
  // '#' comments are skipped. Throws IoError for unreadable files and
  // InvalidInputError when no words were loaded at all.
  static Lexicon load(const std::vector<std::string>& paths);

  static Lexicon from_words(const std::vector<std::u32string>& words);

  // Parses one file's text into this lexicon. DecodeError carries the
  // line number; `source` is recorded for diagnostics.
  void add_from_text(std::string_view text, const std::string& source);

  void add(std::u32string_view word);

  bool contains(std::u32string_view word) const;

  // Ascending lengths L with sent[pos, pos+L) in the lexicon. The
  // single-character fallback is not included unless that character is
  // itself a lexicon entry. Throws InvalidInputError for pos out of
  // range.
  std::vector<std::size_t> prefixes_of(const Sentence& sent,
                                       std::size_t pos) const;

  std::size_t size() const { return size_; }
  std::size_t max_word_len() const { return max_word_len_; }
  const std::vector<std::string>& source_names() const { return sources_; }

 private:
  struct Node {
    std::unordered_map<char32_t, std::uint32_t> next;
    bool terminal = false;
  };

  std::vector<Node> nodes_{1};
  std::size_t size_ = 0;
  std::size_t max_word_len_ = 0;
  std::vector<std::string> sources_;
};

}  // namespace mmcrf

#endif  // MMCRF_LEXICON_HPP
