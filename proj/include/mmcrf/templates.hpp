#ifndef MMCRF_TEMPLATES_HPP
#define MMCRF_TEMPLATES_HPP

#include <string>
#include <string_view>
#include <vector>

#include "mmcrf/corpus.hpp"

namespace mmcrf {

enum class TemplateKind { Unigram, Transition };

// One %x[row,col] reference: row is relative to the current position,
// col is an absolute observation column.
struct TemplateAtom {
  int row_offset = 0;
  std::size_t col = 0;
};

// A single feature template line. Literal text (including the "U07:"
// prefix and any separators) is kept verbatim so expansion reproduces
// the CRF++ feature-string layout exactly.
class Template {
 public:
  Template(std::string id, TemplateKind kind, std::vector<std::string> literals,
           std::vector<TemplateAtom> atoms);

  const std::string& id() const { return id_; }
  TemplateKind kind() const { return kind_; }
  const std::vector<TemplateAtom>& atoms() const { return atoms_; }
  const std::vector<std::string>& literals() const { return literals_; }

  // The original template line.
  std::string render() const;

 private:
  std::string id_;
  TemplateKind kind_;
  std::vector<std::string> literals_;  // atoms.size() + 1, interleaved
  std::vector<TemplateAtom> atoms_;
};

// Per-character observation rows (col 0: character, col 1: MMSEG tag)
// with an optional gold label column.
class TokenGrid {
 public:
  TokenGrid() = default;
  TokenGrid(std::vector<std::vector<std::string>> rows, TagSeq gold = {});

  std::size_t length() const { return rows_.size(); }
  std::size_t column_count() const { return rows_.empty() ? 0 : rows_[0].size(); }
  const std::vector<std::string>& row(std::size_t t) const { return rows_[t]; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  bool has_gold() const { return !gold_.empty(); }
  const TagSeq& gold() const { return gold_; }

 private:
  std::vector<std::vector<std::string>> rows_;
  TagSeq gold_;
};

// Substitutes each atom with the referenced cell; positions outside the
// sentence produce the CRF++ boundary sentinels _B-1, _B-2, _B+1, _B+2, ...
std::string expand(const Template& tpl, const TokenGrid& grid, std::size_t pos);

class TemplateSet {
 public:
  // Lines starting with 'U' are unigram feature templates, 'B' is the
  // label-transition template; '#' comments and blank lines are skipped.
  // Throws ParseError with a line number for malformed macros and
  // duplicate ids.
  static TemplateSet parse(std::string_view text, std::string name = "");

  // Bundled template sets exp1..exp5 of increasing feature scope; exp4
  // is the default set.
  static TemplateSet preset(std::string_view name);
  static const std::vector<std::string>& preset_names();

  const std::vector<Template>& templates() const { return templates_; }
  const std::string& name() const { return name_; }

  std::size_t unigram_count() const;
  std::size_t transition_count() const;

  // Highest observation column any template references, or nullopt for
  // transition-only sets.
  void validate_columns(std::size_t column_count) const;

  std::string render() const;

 private:
  std::vector<Template> templates_;
  std::string name_;
};

}  // namespace mmcrf

#endif  // MMCRF_TEMPLATES_HPP
