#include "mmcrf/pipeline.hpp"

#include "mmcrf/errors.hpp"
#include "mmcrf/io.hpp"
#include "mmcrf/utf8.hpp"

namespace mmcrf {

namespace {

TokenGrid grid_for_sentence(const Sentence& sent, const Lexicon& lex,
                            const FreedomTable* freedom, const TagSeq* gold) {
  const TagSeq rough = mmseg_tags(lex, sent, freedom);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(sent.size());
  for (std::size_t i = 0; i < sent.size(); ++i) {
    rows.push_back({utf8::encode(sent[i]), std::string(1, tag_letter(rough[i]))});
  }
  return TokenGrid(std::move(rows), gold ? *gold : TagSeq{});
}

}  // namespace

std::vector<TokenGrid> make_training_grids(const std::vector<Segmentation>& corpus,
                                           const Lexicon& lex,
                                           const FreedomTable* freedom) {
  if (corpus.empty()) throw InvalidInputError("training corpus is empty");
  std::vector<TokenGrid> grids;
  grids.reserve(corpus.size());
  for (const Segmentation& seg : corpus) {
    const Sentence sent = join_words(seg);
    const TagSeq gold = words_to_tags(seg);
    grids.push_back(grid_for_sentence(sent, lex, freedom, &gold));
  }
  return grids;
}

std::vector<Segmentation> segment_text(const CrfModel& model, const Lexicon& lex,
                                       const std::vector<std::string>& raw_lines,
                                       const FreedomTable* freedom) {
  if (model.obs_columns() != 2) {
    throw InvalidInputError(
        "model expects " + std::to_string(model.obs_columns()) +
        " observation column(s); segment_text builds 2 (character + rough tag)");
  }
  std::vector<Segmentation> out;
  out.reserve(raw_lines.size());
  for (std::size_t i = 0; i < raw_lines.size(); ++i) {
    Sentence sent;
    try {
      sent = utf8::decode(raw_lines[i]);
    } catch (const DecodeError& e) {
      throw DecodeError(e.what(), i + 1);
    }
    if (sent.empty()) {
      out.emplace_back();
      continue;
    }
    const TokenGrid grid = grid_for_sentence(sent, lex, freedom, nullptr);
    const TagSeq tags = viterbi(model, grid);
    out.push_back(tags_to_words(sent, tags));
  }
  return out;
}

std::string render_training_grids(const std::vector<TokenGrid>& grids) {
  std::string out;
  for (const TokenGrid& grid : grids) {
    if (!grid.has_gold()) {
      throw InvalidInputError("cannot write a training grid without gold labels");
    }
    for (std::size_t t = 0; t < grid.length(); ++t) {
      for (const auto& cell : grid.row(t)) {
        out += cell;
        out += ' ';
      }
      out += tag_letter(grid.gold()[t]);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::vector<TokenGrid> parse_training_text(std::string_view text) {
  std::vector<TokenGrid> grids;
  std::vector<std::vector<std::string>> rows;
  TagSeq gold;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  auto flush = [&] {
    if (rows.empty()) return;
    grids.emplace_back(std::move(rows), std::move(gold));
    rows.clear();
    gold.clear();
  };

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
    if (line.empty()) {
      flush();
      continue;
    }
    std::vector<std::string> cols;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      const std::size_t begin = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > begin) cols.emplace_back(line.substr(begin, i - begin));
    }
    if (cols.empty()) {
      flush();
      continue;
    }
    if (cols.size() < 2) {
      throw FormatError("training row needs at least one observation column "
                        "and a label",
                        line_no);
    }
    if (!rows.empty() && cols.size() != rows[0].size() + 1) {
      throw FormatError("ragged row: expected " +
                            std::to_string(rows[0].size() + 1) + " columns, got " +
                            std::to_string(cols.size()),
                        line_no);
    }
    const std::string& label = cols.back();
    if (label.size() != 1 || !tag_from_letter(label[0])) {
      throw FormatError("gold label must be one of B, M, E, S; got '" + label + "'",
                        line_no);
    }
    gold.push_back(*tag_from_letter(label[0]));
    cols.pop_back();
    rows.push_back(std::move(cols));
  }
  flush();
  return grids;
}

void write_training_file(const std::vector<TokenGrid>& grids,
                         const std::string& path) {
  io::write_file_atomic(path, render_training_grids(grids));
}

std::vector<TokenGrid> read_training_file(const std::string& path) {
  return parse_training_text(io::read_file(path));
}

}  // namespace mmcrf
