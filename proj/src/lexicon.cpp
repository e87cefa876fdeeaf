#include "mmcrf/lexicon.hpp"

#include "mmcrf/errors.hpp"
#include "mmcrf/io.hpp"
#include "mmcrf/utf8.hpp"

namespace mmcrf {

Lexicon Lexicon::load(const std::vector<std::string>& paths) {
  Lexicon lex;
  for (const auto& path : paths) {
    std::string text;
    try {
      text = io::read_file(path);
    } catch (const IoError&) {
      throw IoError("lexicon not found: " + path);
    }
    lex.add_from_text(text, path);
  }
  if (lex.size() == 0) {
    throw InvalidInputError("empty lexicon: no words loaded from " +
                            std::to_string(paths.size()) + " file(s)");
  }
  return lex;
}

Lexicon Lexicon::from_words(const std::vector<std::u32string>& words) {
  Lexicon lex;
  for (const auto& w : words) lex.add(w);
  return lex;
}

void Lexicon::add_from_text(std::string_view text, const std::string& source) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line;
    if (eol == std::string_view::npos) {
      line = text.substr(pos);
      pos = text.size();
    } else {
      line = text.substr(pos, eol - pos);
      pos = eol + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    Sentence cps;
    try {
      cps = utf8::decode(line);
    } catch (const DecodeError& e) {
      throw DecodeError(std::string(e.what()) + " in " + source, line_no);
    }
    std::size_t i = 0;
    while (i < cps.size() && utf8::is_space(cps[i])) ++i;
    std::size_t begin = i;
    while (i < cps.size() && !utf8::is_space(cps[i])) ++i;
    if (i > begin) add(std::u32string_view(cps).substr(begin, i - begin));
  }
  sources_.push_back(source);
}

void Lexicon::add(std::u32string_view word) {
  if (word.empty()) throw InvalidInputError("empty word cannot be added to lexicon");
  std::uint32_t node = 0;
  for (char32_t cp : word) {
    auto it = nodes_[node].next.find(cp);
    if (it == nodes_[node].next.end()) {
      const auto fresh = static_cast<std::uint32_t>(nodes_.size());
      nodes_[node].next.emplace(cp, fresh);
      nodes_.emplace_back();
      node = fresh;
    } else {
      node = it->second;
    }
  }
  if (!nodes_[node].terminal) {
    nodes_[node].terminal = true;
    ++size_;
    if (word.size() > max_word_len_) max_word_len_ = word.size();
  }
}

bool Lexicon::contains(std::u32string_view word) const {
  if (word.empty()) return false;
  std::uint32_t node = 0;
  for (char32_t cp : word) {
    auto it = nodes_[node].next.find(cp);
    if (it == nodes_[node].next.end()) return false;
    node = it->second;
  }
  return nodes_[node].terminal;
}

std::vector<std::size_t> Lexicon::prefixes_of(const Sentence& sent,
                                              std::size_t pos) const {
  if (pos >= sent.size()) {
    throw InvalidInputError("position " + std::to_string(pos) +
                            " out of range for sentence of length " +
                            std::to_string(sent.size()));
  }
  std::vector<std::size_t> lengths;
  std::uint32_t node = 0;
  const std::size_t stop = std::min(sent.size(), pos + max_word_len_);
  for (std::size_t i = pos; i < stop; ++i) {
    auto it = nodes_[node].next.find(sent[i]);
    if (it == nodes_[node].next.end()) break;
    node = it->second;
    if (nodes_[node].terminal) lengths.push_back(i - pos + 1);
  }
  return lengths;
}

}  // namespace mmcrf
