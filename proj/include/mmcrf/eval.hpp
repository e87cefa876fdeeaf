#ifndef MMCRF_EVAL_HPP
#define MMCRF_EVAL_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "mmcrf/corpus.hpp"

namespace mmcrf {

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  std::size_t gold_words = 0;
  std::size_t pred_words = 0;
  std::size_t correct_words = 0;
  std::vector<std::size_t> per_line_mismatch;  // 1-based line numbers
};

// Half-open codepoint intervals tiling [0, sentence length).
std::vector<std::pair<std::size_t, std::size_t>> spans(const Segmentation& seg);

// Harmonic mean 2pr/(p+r), 0 when p + r == 0. Inputs are ratios in
// [0, 1]; out-of-range values raise InvalidInputError.
double f_score(double p, double r);

// Word-level precision/recall/F over span intersections, the bakeoff
// convention: a predicted word counts as correct only when the same
// codepoint interval is a gold word. Gold and prediction must have the
// same line count and identical underlying text per line.
EvalReport score(const std::vector<Segmentation>& gold,
                 const std::vector<Segmentation>& pred);

}  // namespace mmcrf

#endif  // MMCRF_EVAL_HPP
