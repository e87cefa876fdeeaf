#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "mmcrf/corpus.hpp"
#include "mmcrf/crf.hpp"
#include "mmcrf/errors.hpp"
#include "mmcrf/eval.hpp"
#include "mmcrf/lexicon.hpp"
#include "mmcrf/mmseg.hpp"
#include "mmcrf/pipeline.hpp"
#include "mmcrf/templates.hpp"
#include "mmcrf/utf8.hpp"

namespace py = pybind11;
using namespace mmcrf;

namespace {

Sentence to_sentence(const std::string& text) { return utf8::decode(text); }

Segmentation to_segmentation(const std::vector<std::string>& words) {
  Segmentation seg;
  seg.reserve(words.size());
  for (const auto& w : words) seg.push_back(utf8::decode(w));
  return seg;
}

std::vector<Segmentation> to_corpus(
    const std::vector<std::vector<std::string>>& sentences) {
  std::vector<Segmentation> corpus;
  corpus.reserve(sentences.size());
  for (const auto& s : sentences) corpus.push_back(to_segmentation(s));
  return corpus;
}

std::vector<std::string> from_segmentation(const Segmentation& seg) {
  std::vector<std::string> words;
  words.reserve(seg.size());
  for (const auto& w : seg) words.push_back(utf8::encode(w));
  return words;
}

std::vector<std::vector<std::string>> from_corpus(
    const std::vector<Segmentation>& corpus) {
  std::vector<std::vector<std::string>> out;
  out.reserve(corpus.size());
  for (const auto& seg : corpus) out.push_back(from_segmentation(seg));
  return out;
}

std::string tags_to_string(const TagSeq& tags) {
  std::string out;
  out.reserve(tags.size());
  for (const Tag t : tags) out.push_back(tag_letter(t));
  return out;
}

TagSeq tags_from_string(const std::string& text) {
  TagSeq tags;
  tags.reserve(text.size());
  for (const char c : text) {
    const auto tag = tag_from_letter(c);
    if (!tag) throw InvalidInputError(std::string("invalid tag letter '") + c + "'");
    tags.push_back(*tag);
  }
  return tags;
}

const FreedomTable* opt_freedom(const std::optional<FreedomTable>& table) {
  return table ? &*table : nullptr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chinese word segmentation toolkit: MMSEG rough segmentation "
            "feeding a character-tagging CRF";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<Error>(m, "ToolkitError", PyExc_ValueError);

  m.def("words_to_tags",
        [](const std::vector<std::string>& words) {
          return tags_to_string(words_to_tags(to_segmentation(words)));
        },
        py::arg("words"),
        "BMES tag string for a list of words");
  m.def("tags_to_words",
        [](const std::string& sentence, const std::string& tags) {
          return from_segmentation(
              tags_to_words(to_sentence(sentence), tags_from_string(tags)));
        },
        py::arg("sentence"), py::arg("tags"),
        "Words recovered from a sentence and its BMES tag string");

  py::class_<Lexicon>(m, "Lexicon")
      .def(py::init<>())
      .def_static("load", &Lexicon::load, py::arg("paths"))
      .def_static("from_words",
                  [](const std::vector<std::string>& words) {
                    Lexicon lex;
                    for (const auto& w : words) lex.add(utf8::decode(w));
                    return lex;
                  },
                  py::arg("words"))
      .def("add", [](Lexicon& lex, const std::string& word) {
        lex.add(utf8::decode(word));
      })
      .def("contains",
           [](const Lexicon& lex, const std::string& word) {
             return lex.contains(utf8::decode(word));
           })
      .def("prefixes_of",
           [](const Lexicon& lex, const std::string& sentence, std::size_t pos) {
             return lex.prefixes_of(to_sentence(sentence), pos);
           },
           py::arg("sentence"), py::arg("pos"))
      .def_property_readonly("size", &Lexicon::size)
      .def_property_readonly("max_word_len", &Lexicon::max_word_len)
      .def("__len__", &Lexicon::size)
      .def("__contains__", [](const Lexicon& lex, const std::string& word) {
        return lex.contains(utf8::decode(word));
      });

  py::class_<FreedomTable>(m, "FreedomTable")
      .def(py::init<>())
      .def_static("load", &FreedomTable::load, py::arg("path"))
      .def("set",
           [](FreedomTable& table, const std::string& ch, double score) {
             const Sentence cps = utf8::decode(ch);
             if (cps.size() != 1) {
               throw InvalidInputError("freedom entry must be one character");
             }
             table.set(cps[0], score);
           })
      .def("score", [](const FreedomTable& table, const std::string& ch) {
        const Sentence cps = utf8::decode(ch);
        if (cps.size() != 1) {
          throw InvalidInputError("freedom lookup must be one character");
        }
        return table.score(cps[0]);
      });

  m.def("mmseg_segment",
        [](const Lexicon& lex, const std::string& sentence,
           const std::optional<FreedomTable>& freedom) {
          return from_segmentation(
              mmseg_segment(lex, to_sentence(sentence), opt_freedom(freedom)));
        },
        py::arg("lexicon"), py::arg("sentence"), py::arg("freedom") = py::none());
  m.def("mmseg_tags",
        [](const Lexicon& lex, const std::string& sentence,
           const std::optional<FreedomTable>& freedom) {
          return tags_to_string(
              mmseg_tags(lex, to_sentence(sentence), opt_freedom(freedom)));
        },
        py::arg("lexicon"), py::arg("sentence"), py::arg("freedom") = py::none());

  py::class_<TemplateSet>(m, "TemplateSet")
      .def_static("parse", &TemplateSet::parse, py::arg("text"),
                  py::arg("name") = "")
      .def_static("preset",
                  [](const std::string& name) { return TemplateSet::preset(name); },
                  py::arg("name"))
      .def_static("preset_names", [] { return TemplateSet::preset_names(); })
      .def_property_readonly("name", &TemplateSet::name)
      .def_property_readonly("unigram_count", &TemplateSet::unigram_count)
      .def_property_readonly("transition_count", &TemplateSet::transition_count)
      .def("render", &TemplateSet::render)
      .def("__len__",
           [](const TemplateSet& set) { return set.templates().size(); });

  py::class_<TokenGrid>(m, "TokenGrid")
      .def(py::init([](const std::vector<std::vector<std::string>>& rows,
                       const std::string& gold) {
             return TokenGrid(rows, tags_from_string(gold));
           }),
           py::arg("rows"), py::arg("gold") = "")
      .def("__len__", &TokenGrid::length)
      .def_property_readonly("column_count", &TokenGrid::column_count)
      .def_property_readonly("rows", &TokenGrid::rows)
      .def_property_readonly("gold", [](const TokenGrid& grid) {
        return tags_to_string(grid.gold());
      });

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init([](double l2_sigma, std::size_t max_iterations,
                       double gradient_tolerance, std::size_t feature_cutoff,
                       int threads) {
             TrainConfig config;
             config.l2_sigma = l2_sigma;
             config.max_iterations = max_iterations;
             config.gradient_tolerance = gradient_tolerance;
             config.feature_cutoff = feature_cutoff;
             config.threads = threads;
             return config;
           }),
           py::arg("l2_sigma") = 1.0, py::arg("max_iterations") = 200,
           py::arg("gradient_tolerance") = 1e-4, py::arg("feature_cutoff") = 1,
           py::arg("threads") = 1)
      .def_readwrite("l2_sigma", &TrainConfig::l2_sigma)
      .def_readwrite("max_iterations", &TrainConfig::max_iterations)
      .def_readwrite("gradient_tolerance", &TrainConfig::gradient_tolerance)
      .def_readwrite("feature_cutoff", &TrainConfig::feature_cutoff)
      .def_readwrite("threads", &TrainConfig::threads);

  py::class_<CrfModel>(m, "CrfModel")
      .def_static("load", &CrfModel::load, py::arg("path"))
      .def("save", &CrfModel::save, py::arg("path"))
      .def_property_readonly("feature_count",
                             [](const CrfModel& model) {
                               return model.index().unigram_feature_count();
                             })
      .def_property_readonly("weight_count",
                             [](const CrfModel& model) {
                               return model.weights().size();
                             })
      .def_property_readonly("iterations",
                             [](const CrfModel& model) {
                               return model.meta().iterations;
                             })
      .def_property_readonly("objective", [](const CrfModel& model) {
        return model.meta().objective;
      });

  m.def("make_training_grids",
        [](const std::vector<std::vector<std::string>>& corpus, const Lexicon& lex,
           const std::optional<FreedomTable>& freedom) {
          return make_training_grids(to_corpus(corpus), lex, opt_freedom(freedom));
        },
        py::arg("corpus"), py::arg("lexicon"), py::arg("freedom") = py::none());

  m.def("train",
        [](const std::vector<TokenGrid>& grids, const TemplateSet& templates,
           const TrainConfig& config) {
          py::gil_scoped_release release;
          return train(grids, templates, config);
        },
        py::arg("grids"), py::arg("templates"),
        py::arg("config") = TrainConfig{});

  m.def("viterbi",
        [](const CrfModel& model, const TokenGrid& grid) {
          return tags_to_string(viterbi(model, grid));
        },
        py::arg("model"), py::arg("grid"));

  m.def("segment_text",
        [](const CrfModel& model, const Lexicon& lex,
           const std::vector<std::string>& lines,
           const std::optional<FreedomTable>& freedom) {
          py::gil_scoped_release release;
          return from_corpus(segment_text(model, lex, lines, opt_freedom(freedom)));
        },
        py::arg("model"), py::arg("lexicon"), py::arg("lines"),
        py::arg("freedom") = py::none());

  m.def("write_training_file",
        [](const std::vector<TokenGrid>& grids, const std::string& path) {
          write_training_file(grids, path);
        },
        py::arg("grids"), py::arg("path"));
  m.def("read_training_file", &read_training_file, py::arg("path"));

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("precision", &EvalReport::precision)
      .def_readonly("recall", &EvalReport::recall)
      .def_readonly("f_score", &EvalReport::f_score)
      .def_readonly("gold_words", &EvalReport::gold_words)
      .def_readonly("pred_words", &EvalReport::pred_words)
      .def_readonly("correct_words", &EvalReport::correct_words)
      .def_readonly("mismatch_lines", &EvalReport::per_line_mismatch)
      .def("__repr__", [](const EvalReport& r) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "EvalReport(precision=%.4f, recall=%.4f, f_score=%.4f)",
                      r.precision, r.recall, r.f_score);
        return std::string(buf);
      });

  m.def("score",
        [](const std::vector<std::vector<std::string>>& gold,
           const std::vector<std::vector<std::string>>& pred) {
          return score(to_corpus(gold), to_corpus(pred));
        },
        py::arg("gold"), py::arg("pred"));
  m.def("f_score", &f_score, py::arg("precision"), py::arg("recall"));

  m.def("read_segmented_corpus",
        [](const std::string& path) {
          return from_corpus(read_segmented_corpus(path));
        },
        py::arg("path"));
  m.def("write_segmented_corpus",
        [](const std::vector<std::vector<std::string>>& corpus,
           const std::string& path) {
          write_segmented_corpus(to_corpus(corpus), path);
        },
        py::arg("corpus"), py::arg("path"));

#ifdef MMCRF_VERSION
  m.attr("__version__") = MMCRF_VERSION;
#else
  m.attr("__version__") = "0.1.0";
#endif
}
