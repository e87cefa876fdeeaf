#include "mmcrf/corpus.hpp"

#include "mmcrf/errors.hpp"
#include "mmcrf/io.hpp"
#include "mmcrf/utf8.hpp"

namespace mmcrf {

char tag_letter(Tag tag) {
  switch (tag) {
    case Tag::B: return 'B';
    case Tag::M: return 'M';
    case Tag::E: return 'E';
    case Tag::S: return 'S';
  }
  return '?';
}

std::optional<Tag> tag_from_letter(char letter) {
  switch (letter) {
    case 'B': return Tag::B;
    case 'M': return Tag::M;
    case 'E': return Tag::E;
    case 'S': return Tag::S;
    default: return std::nullopt;
  }
}

TagSeq words_to_tags(const Segmentation& seg) {
  TagSeq tags;
  for (const auto& word : seg) {
    if (word.empty()) throw InvalidInputError("empty word in segmentation");
    if (word.size() == 1) {
      tags.push_back(Tag::S);
    } else {
      tags.push_back(Tag::B);
      for (std::size_t i = 1; i + 1 < word.size(); ++i) tags.push_back(Tag::M);
      tags.push_back(Tag::E);
    }
  }
  return tags;
}

Segmentation tags_to_words(const Sentence& sent, const TagSeq& tags) {
  if (sent.size() != tags.size()) {
    throw InvalidInputError(
        "tag sequence length " + std::to_string(tags.size()) +
        " does not match sentence length " + std::to_string(sent.size()));
  }
  Segmentation words;
  std::size_t start = 0;
  bool open = false;
  for (std::size_t t = 0; t < tags.size(); ++t) {
    switch (tags[t]) {
      case Tag::B:
        if (open) words.push_back(sent.substr(start, t - start));
        start = t;
        open = true;
        break;
      case Tag::M:
        if (!open) {
          start = t;
          open = true;
        }
        break;
      case Tag::E:
        if (open) {
          words.push_back(sent.substr(start, t + 1 - start));
        } else {
          words.push_back(sent.substr(t, 1));
        }
        open = false;
        break;
      case Tag::S:
        if (open) words.push_back(sent.substr(start, t - start));
        words.push_back(sent.substr(t, 1));
        open = false;
        break;
    }
  }
  if (open) words.push_back(sent.substr(start));
  return words;
}

Sentence join_words(const Segmentation& seg) {
  Sentence out;
  for (const auto& word : seg) out += word;
  return out;
}

bool is_well_formed(const TagSeq& tags) {
  bool open = false;
  for (Tag tag : tags) {
    switch (tag) {
      case Tag::B:
        if (open) return false;
        open = true;
        break;
      case Tag::M:
      case Tag::E:
        if (!open) return false;
        open = tag == Tag::M;
        break;
      case Tag::S:
        if (open) return false;
        break;
    }
  }
  return !open;
}

std::vector<Segmentation> parse_segmented_lines(std::string_view text) {
  std::vector<Segmentation> segs;
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
    if (line.empty()) continue;
    Sentence cps;
    try {
      cps = utf8::decode(line);
    } catch (const DecodeError& e) {
      throw DecodeError(e.what(), line_no);
    }
    Segmentation words;
    std::size_t i = 0;
    while (i < cps.size()) {
      while (i < cps.size() && utf8::is_space(cps[i])) ++i;
      std::size_t begin = i;
      while (i < cps.size() && !utf8::is_space(cps[i])) ++i;
      if (i > begin) words.push_back(cps.substr(begin, i - begin));
    }
    if (!words.empty()) segs.push_back(std::move(words));
  }
  return segs;
}

std::string render_segmented(const std::vector<Segmentation>& segs) {
  std::string out;
  for (const auto& seg : segs) {
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (i > 0) out += ' ';
      out += utf8::encode(seg[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<Segmentation> read_segmented_corpus(const std::string& path) {
  return parse_segmented_lines(io::read_file(path));
}

void write_segmented_corpus(const std::vector<Segmentation>& segs,
                            const std::string& path) {
  io::write_file_atomic(path, render_segmented(segs));
}

}  // namespace mmcrf
