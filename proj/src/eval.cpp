#include "mmcrf/eval.hpp"

#include "mmcrf/errors.hpp"

namespace mmcrf {

std::vector<std::pair<std::size_t, std::size_t>> spans(const Segmentation& seg) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(seg.size());
  std::size_t start = 0;
  for (const auto& word : seg) {
    out.emplace_back(start, start + word.size());
    start += word.size();
  }
  return out;
}

double f_score(double p, double r) {
  if (!(p >= 0.0 && p <= 1.0) || !(r >= 0.0 && r <= 1.0)) {
    throw InvalidInputError("precision and recall must lie in [0, 1]");
  }
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

EvalReport score(const std::vector<Segmentation>& gold,
                 const std::vector<Segmentation>& pred) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("line count mismatch: gold has " +
                         std::to_string(gold.size()) + " sentence(s), prediction has " +
                         std::to_string(pred.size()));
  }
  EvalReport report;
  for (std::size_t line = 0; line < gold.size(); ++line) {
    if (join_words(gold[line]) != join_words(pred[line])) {
      throw AlignmentError("text mismatch at line " + std::to_string(line + 1));
    }
    const auto gold_spans = spans(gold[line]);
    const auto pred_spans = spans(pred[line]);
    // Both tilings are sorted by construction; count common intervals.
    std::size_t correct = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < gold_spans.size() && j < pred_spans.size()) {
      if (gold_spans[i] == pred_spans[j]) {
        ++correct;
        ++i;
        ++j;
      } else if (gold_spans[i].second <= pred_spans[j].second) {
        ++i;
      } else {
        ++j;
      }
    }
    report.gold_words += gold_spans.size();
    report.pred_words += pred_spans.size();
    report.correct_words += correct;
    if (gold_spans != pred_spans) {
      report.per_line_mismatch.push_back(line + 1);
    }
  }
  if (report.gold_words == 0 && report.pred_words == 0) {
    report.precision = report.recall = 1.0;
  } else {
    report.precision = report.pred_words == 0
                           ? 0.0
                           : static_cast<double>(report.correct_words) /
                                 static_cast<double>(report.pred_words);
    report.recall = report.gold_words == 0
                        ? 0.0
                        : static_cast<double>(report.correct_words) /
                              static_cast<double>(report.gold_words);
  }
  report.f_score = f_score(report.precision, report.recall);
  return report;
}

}  // namespace mmcrf
