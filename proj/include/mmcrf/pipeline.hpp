#ifndef MMCRF_PIPELINE_HPP
#define MMCRF_PIPELINE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "mmcrf/corpus.hpp"
#include "mmcrf/crf.hpp"
#include "mmcrf/lexicon.hpp"
#include "mmcrf/mmseg.hpp"
#include "mmcrf/templates.hpp"

namespace mmcrf {

// One grid per gold sentence: column 0 the characters, column 1 the
// MMSEG tags of the raw (re-joined) sentence, gold column from the
// reference words. MMSEG never sees the gold boundaries, matching what
// is available at inference time.
std::vector<TokenGrid> make_training_grids(const std::vector<Segmentation>& corpus,
                                           const Lexicon& lex,
                                           const FreedomTable* freedom = nullptr);

// Builds the same two observation columns per line, decodes with the
// model and converts tags back to words. Empty lines stay empty.
std::vector<Segmentation> segment_text(const CrfModel& model, const Lexicon& lex,
                                       const std::vector<std::string>& raw_lines,
                                       const FreedomTable* freedom = nullptr);

// CRF++-style training file: one row per character, columns separated
// by single spaces, blank line after each sentence. The last column is
// the gold label.
std::string render_training_grids(const std::vector<TokenGrid>& grids);
std::vector<TokenGrid> parse_training_text(std::string_view text);

void write_training_file(const std::vector<TokenGrid>& grids,
                         const std::string& path);
std::vector<TokenGrid> read_training_file(const std::string& path);

}  // namespace mmcrf

#endif  // MMCRF_PIPELINE_HPP
