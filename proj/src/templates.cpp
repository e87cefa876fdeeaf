#include "mmcrf/templates.hpp"

#include <charconv>
#include <unordered_set>

#include "mmcrf/errors.hpp"

namespace mmcrf {

Template::Template(std::string id, TemplateKind kind,
                   std::vector<std::string> literals,
                   std::vector<TemplateAtom> atoms)
    : id_(std::move(id)),
      kind_(kind),
      literals_(std::move(literals)),
      atoms_(std::move(atoms)) {
  if (literals_.size() != atoms_.size() + 1) {
    throw InvalidInputError("template literals/atoms are inconsistent");
  }
}

std::string Template::render() const {
  std::string out = literals_[0];
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    out += "%x[" + std::to_string(atoms_[i].row_offset) + "," +
           std::to_string(atoms_[i].col) + "]";
    out += literals_[i + 1];
  }
  return out;
}

TokenGrid::TokenGrid(std::vector<std::vector<std::string>> rows, TagSeq gold)
    : rows_(std::move(rows)), gold_(std::move(gold)) {
  for (const auto& row : rows_) {
    if (row.empty()) throw InvalidInputError("token grid row has no columns");
    if (row.size() != rows_[0].size()) {
      throw InvalidInputError("token grid rows have unequal column counts");
    }
  }
  if (!gold_.empty() && gold_.size() != rows_.size()) {
    throw InvalidInputError("gold label column length does not match grid");
  }
}

std::string expand(const Template& tpl, const TokenGrid& grid,
                   std::size_t pos) {
  const auto len = static_cast<long>(grid.length());
  std::string out = tpl.literals()[0];
  for (std::size_t i = 0; i < tpl.atoms().size(); ++i) {
    const TemplateAtom& atom = tpl.atoms()[i];
    const long idx = static_cast<long>(pos) + atom.row_offset;
    if (idx < 0) {
      out += "_B" + std::to_string(idx);
    } else if (idx >= len) {
      out += "_B+" + std::to_string(idx - len + 1);
    } else {
      out += grid.row(static_cast<std::size_t>(idx))[atom.col];
    }
    out += tpl.literals()[i + 1];
  }
  return out;
}

namespace {

// Parses the %x[row,col] macros out of `pattern` (the part after the
// template id). Offsets into `line` keep error positions accurate.
void parse_pattern(std::string_view pattern, std::size_t line_no,
                   std::vector<std::string>& literals,
                   std::vector<TemplateAtom>& atoms) {
  std::string literal;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] != '%') {
      literal += pattern[i];
      ++i;
      continue;
    }
    if (i + 2 >= pattern.size() || pattern[i + 1] != 'x' ||
        pattern[i + 2] != '[') {
      throw ParseError("malformed macro: expected %x[row,col]", line_no);
    }
    const std::size_t close = pattern.find(']', i + 3);
    if (close == std::string_view::npos) {
      throw ParseError("malformed macro: missing ']'", line_no);
    }
    const std::string_view body = pattern.substr(i + 3, close - (i + 3));
    const std::size_t comma = body.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("malformed macro: missing ','", line_no);
    }
    const std::string_view row_text = body.substr(0, comma);
    const std::string_view col_text = body.substr(comma + 1);
    TemplateAtom atom;
    {
      const auto [end, ec] = std::from_chars(
          row_text.data(), row_text.data() + row_text.size(), atom.row_offset);
      if (ec != std::errc() || end != row_text.data() + row_text.size()) {
        throw ParseError("malformed macro: row offset is not an integer",
                         line_no);
      }
    }
    {
      unsigned long col = 0;
      const auto [end, ec] =
          std::from_chars(col_text.data(), col_text.data() + col_text.size(), col);
      if (ec != std::errc() || end != col_text.data() + col_text.size()) {
        throw ParseError("malformed macro: column is not a non-negative integer",
                         line_no);
      }
      atom.col = col;
    }
    literals.push_back(literal);
    literal.clear();
    atoms.push_back(atom);
    i = close + 1;
  }
  literals.push_back(literal);
}

const char* kPresetExp1 =
    "# character level\n"
    "U00:%x[-1,0]\n"
    "U01:%x[0,0]\n"
    "U02:%x[1,0]\n"
    "U03:%x[-1,0]/%x[0,0]\n"
    "U04:%x[0,0]/%x[1,0]\n"
    "U05:%x[-1,0]/%x[1,0]\n"
    "B\n";

const char* kPresetExp2 =
    "# character + tag levels\n"
    "U00:%x[-1,0]\n"
    "U01:%x[0,0]\n"
    "U02:%x[1,0]\n"
    "U03:%x[-1,0]/%x[0,0]\n"
    "U04:%x[0,0]/%x[1,0]\n"
    "U05:%x[-1,0]/%x[1,0]\n"
    "U06:%x[-1,1]\n"
    "U07:%x[0,1]\n"
    "U08:%x[1,1]\n"
    "U09:%x[-1,1]/%x[0,1]\n"
    "U10:%x[0,1]/%x[1,1]\n"
    "U11:%x[-1,1]/%x[1,1]\n"
    "B\n";

// exp3 adds character-pair/tag trigrams; the roster pairs each adjacent
// character bigram with the tag of either member.
const char* kPresetExp3 =
    "# character + tag levels, plus character-pair/tag trigrams\n"
    "U00:%x[-1,0]\n"
    "U01:%x[0,0]\n"
    "U02:%x[1,0]\n"
    "U03:%x[-1,0]/%x[0,0]\n"
    "U04:%x[0,0]/%x[1,0]\n"
    "U05:%x[-1,0]/%x[1,0]\n"
    "U06:%x[-1,1]\n"
    "U07:%x[0,1]\n"
    "U08:%x[1,1]\n"
    "U09:%x[-1,1]/%x[0,1]\n"
    "U10:%x[0,1]/%x[1,1]\n"
    "U11:%x[-1,1]/%x[1,1]\n"
    "U12:%x[-1,0]/%x[0,0]/%x[0,1]\n"
    "U13:%x[0,0]/%x[1,0]/%x[0,1]\n"
    "U14:%x[-1,0]/%x[0,0]/%x[-1,1]\n"
    "U15:%x[0,0]/%x[1,0]/%x[1,1]\n"
    "B\n";

const char* kPresetExp4 =
    "# character + tag levels, plus character/tag bigrams (default)\n"
    "U00:%x[-1,0]\n"
    "U01:%x[0,0]\n"
    "U02:%x[1,0]\n"
    "U03:%x[-1,0]/%x[0,0]\n"
    "U04:%x[0,0]/%x[1,0]\n"
    "U05:%x[-1,0]/%x[1,0]\n"
    "U06:%x[-1,1]\n"
    "U07:%x[0,1]\n"
    "U08:%x[1,1]\n"
    "U09:%x[-1,1]/%x[0,1]\n"
    "U10:%x[0,1]/%x[1,1]\n"
    "U11:%x[-1,1]/%x[1,1]\n"
    "U12:%x[-1,0]/%x[0,1]\n"
    "U13:%x[0,0]/%x[0,1]\n"
    "U14:%x[1,0]/%x[0,1]\n"
    "B\n";

// exp5 widens the character window around the current tag to 2 and 3.
const char* kPresetExp5 =
    "# exp4 plus wide-window character/tag features\n"
    "U00:%x[-1,0]\n"
    "U01:%x[0,0]\n"
    "U02:%x[1,0]\n"
    "U03:%x[-1,0]/%x[0,0]\n"
    "U04:%x[0,0]/%x[1,0]\n"
    "U05:%x[-1,0]/%x[1,0]\n"
    "U06:%x[-1,1]\n"
    "U07:%x[0,1]\n"
    "U08:%x[1,1]\n"
    "U09:%x[-1,1]/%x[0,1]\n"
    "U10:%x[0,1]/%x[1,1]\n"
    "U11:%x[-1,1]/%x[1,1]\n"
    "U12:%x[-1,0]/%x[0,1]\n"
    "U13:%x[0,0]/%x[0,1]\n"
    "U14:%x[1,0]/%x[0,1]\n"
    "U15:%x[-2,0]/%x[0,1]\n"
    "U16:%x[2,0]/%x[0,1]\n"
    "U17:%x[-2,0]/%x[-1,0]/%x[0,1]\n"
    "U18:%x[1,0]/%x[2,0]/%x[0,1]\n"
    "U19:%x[-3,0]/%x[-2,0]/%x[-1,0]/%x[0,1]\n"
    "U20:%x[1,0]/%x[2,0]/%x[3,0]/%x[0,1]\n"
    "B\n";

}  // namespace

TemplateSet TemplateSet::parse(std::string_view text, std::string name) {
  TemplateSet set;
  set.name_ = std::move(name);
  std::unordered_set<std::string> seen_ids;
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

    const char head = line.front();
    if (head != 'U' && head != 'B') {
      throw ParseError("template must start with 'U' or 'B'", line_no);
    }
    const std::size_t colon = line.find(':');
    std::string id(colon == std::string_view::npos ? line
                                                   : line.substr(0, colon));
    if (!seen_ids.insert(id).second) {
      throw ParseError("duplicate template id '" + id + "'", line_no);
    }

    std::vector<std::string> literals;
    std::vector<TemplateAtom> atoms;
    parse_pattern(line, line_no, literals, atoms);

    if (head == 'U') {
      if (atoms.empty()) {
        throw ParseError("unigram template has no %x[row,col] reference",
                         line_no);
      }
      set.templates_.emplace_back(std::move(id), TemplateKind::Unigram,
                                  std::move(literals), std::move(atoms));
    } else {
      if (!atoms.empty()) {
        throw ParseError(
            "transition templates with %x references are not supported",
            line_no);
      }
      set.templates_.emplace_back(std::move(id), TemplateKind::Transition,
                                  std::move(literals), std::move(atoms));
    }
  }
  return set;
}

TemplateSet TemplateSet::preset(std::string_view name) {
  if (name == "exp1") return parse(kPresetExp1, "exp1");
  if (name == "exp2") return parse(kPresetExp2, "exp2");
  if (name == "exp3") return parse(kPresetExp3, "exp3");
  if (name == "exp4") return parse(kPresetExp4, "exp4");
  if (name == "exp5") return parse(kPresetExp5, "exp5");
  std::string valid;
  for (const auto& n : preset_names()) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw ConfigError("unknown template preset '" + std::string(name) +
                    "' (valid presets: " + valid + ")");
}

const std::vector<std::string>& TemplateSet::preset_names() {
  static const std::vector<std::string> names = {"exp1", "exp2", "exp3",
                                                 "exp4", "exp5"};
  return names;
}

std::size_t TemplateSet::unigram_count() const {
  std::size_t n = 0;
  for (const auto& t : templates_) n += t.kind() == TemplateKind::Unigram;
  return n;
}

std::size_t TemplateSet::transition_count() const {
  std::size_t n = 0;
  for (const auto& t : templates_) n += t.kind() == TemplateKind::Transition;
  return n;
}

void TemplateSet::validate_columns(std::size_t column_count) const {
  for (const auto& tpl : templates_) {
    for (const auto& atom : tpl.atoms()) {
      if (atom.col >= column_count) {
        throw ConfigError("template " + tpl.id() + " references column " +
                          std::to_string(atom.col) + " but data has only " +
                          std::to_string(column_count) + " column(s)");
      }
    }
  }
}

std::string TemplateSet::render() const {
  std::string out;
  for (const auto& tpl : templates_) {
    out += tpl.render();
    out += '\n';
  }
  return out;
}

}  // namespace mmcrf
