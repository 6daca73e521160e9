#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "disana/analytics.hpp"
#include "disana/corpus.hpp"
#include "disana/errors.hpp"
#include "disana/report.hpp"
#include "disana/seedex.hpp"
#include "disana/sentiment.hpp"
#include "disana/topics.hpp"

namespace py = pybind11;
using namespace disana;

namespace {

std::vector<topics::DocVector> wrap_vectors(const std::vector<std::vector<double>>& rows) {
    std::vector<topics::DocVector> docs;
    docs.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        docs.push_back(topics::DocVector{std::to_string(i), rows[i]});
    }
    return docs;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Discourse analytics core: tokenization, seed expansion, sentiment, "
              "topics and time series detectors";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    py::class_<corpus::Token>(m, "Token")
        .def_readonly("surface", &corpus::Token::surface)
        .def_readonly("lemma", &corpus::Token::lemma)
        .def_readonly("is_hashtag", &corpus::Token::is_hashtag)
        .def("__repr__", [](const corpus::Token& t) {
            return "Token('" + t.surface + "'" + (t.is_hashtag ? ", hashtag" : "") + ")";
        });

    m.def("tokenize", &corpus::tokenize, py::arg("text"),
          "Case-folded word tokens; '#'-prefixed runs become hashtag tokens.");

    m.def("cosine", &seedex::cosine, py::arg("a"), py::arg("b"));

    py::class_<sentiment::SentimentLexicon>(m, "Lexicon")
        .def_static("load", &sentiment::SentimentLexicon::load, py::arg("path"))
        .def("score",
             [](const sentiment::SentimentLexicon& lex, const std::string& text) {
                 const auto s = sentiment::score(corpus::tokenize(text), lex);
                 return std::make_pair(s.pos, s.neg);
             },
             py::arg("text"), "Dual-polarity score (pos 1..5, neg -5..-1).")
        .def("label", [](const sentiment::SentimentLexicon& lex, const std::string& text) {
            return sentiment::label_name(sentiment::label(sentiment::score(corpus::tokenize(text), lex)));
        }, py::arg("text"));

    py::class_<analytics::TrendResult>(m, "TrendResult")
        .def_property_readonly("direction",
                               [](const analytics::TrendResult& r) {
                                   return analytics::trend_direction_name(r.direction);
                               })
        .def_readonly("s", &analytics::TrendResult::S)
        .def_readonly("var_s", &analytics::TrendResult::var_s)
        .def_readonly("z", &analytics::TrendResult::z)
        .def_readonly("p", &analytics::TrendResult::p)
        .def_readonly("alpha", &analytics::TrendResult::alpha)
        .def("__repr__", [](const analytics::TrendResult& r) {
            return "TrendResult(" + analytics::trend_direction_name(r.direction) +
                   ", S=" + std::to_string(r.S) + ", p=" + std::to_string(r.p) + ")";
        });

    m.def("mann_kendall", &analytics::mann_kendall, py::arg("series"), py::arg("alpha") = 0.05,
          "Mann-Kendall trend test with tie-corrected variance.");

    py::class_<analytics::ChangePointResult>(m, "ChangePointResult")
        .def_readonly("indices", &analytics::ChangePointResult::indices)
        .def_readonly("penalty", &analytics::ChangePointResult::penalty)
        .def_readonly("total_cost", &analytics::ChangePointResult::total_cost)
        .def_property_readonly("change_points", &analytics::ChangePointResult::change_points);

    m.def("pelt", &analytics::pelt, py::arg("series"), py::arg("penalty"),
          "Optimal penalized segmentation under the squared-deviation cost.");
    m.def("default_penalty", &analytics::default_penalty, py::arg("series"));

    py::class_<analytics::PeakSet>(m, "PeakSet")
        .def_readonly("multiplier", &analytics::PeakSet::multiplier)
        .def_readonly("upper_threshold", &analytics::PeakSet::upper_threshold)
        .def_readonly("lower_threshold", &analytics::PeakSet::lower_threshold)
        .def_property_readonly("peaks", [](const analytics::PeakSet& set) {
            std::vector<std::tuple<std::size_t, double, std::string>> out;
            for (const auto& p : set.peaks) {
                out.emplace_back(p.index, p.value,
                                 p.side == analytics::PeakSide::high ? "high" : "low");
            }
            return out;
        });

    m.def("detect_peaks", &analytics::detect_peaks_values, py::arg("series"),
          py::arg("multiplier") = 1.5,
          "Peaks outside the (mean +- std) interval inflated by the multiplier.");

    m.def("reduce",
          [](const std::vector<std::vector<double>>& rows, int dim, unsigned seed) {
              const auto reduced = topics::reduce(wrap_vectors(rows), dim, seed);
              std::vector<std::vector<double>> out;
              out.reserve(reduced.size());
              for (const auto& d : reduced) out.push_back(d.values);
              return out;
          },
          py::arg("vectors"), py::arg("dim"), py::arg("seed") = 0,
          "Deterministic principal-component projection.");

    m.def("cluster",
          [](const std::vector<std::vector<double>>& rows, int min_cluster_size,
             int n_topics_target) {
              topics::TopicModelConfig config;
              config.min_cluster_size = min_cluster_size;
              config.n_topics_target = n_topics_target;
              return topics::cluster(wrap_vectors(rows), config).topic_by_index;
          },
          py::arg("vectors"), py::arg("min_cluster_size") = 10,
          py::arg("n_topics_target") = 150,
          "Density clustering with a noise label of -1.");

    m.def("run_pipeline",
          [](const std::string& config_path, const std::string& out_dir) {
              auto config = report::RunConfig::load(config_path);
              if (!out_dir.empty()) config.out_dir = out_dir;
              const auto bundle = report::run(config);
              py::dict summary;
              summary["out_dir"] = bundle.out_dir;
              summary["relevant"] = bundle.filter_stats.relevant;
              summary["topics"] = bundle.topic_table.size();
              summary["seed_terms"] = bundle.seeds.terms.size();
              summary["peaks"] = bundle.peaks.size();
              summary["change_points"] = bundle.change_points.size();
              return summary;
          },
          py::arg("config_path"), py::arg("out_dir") = std::string(),
          "Run every pipeline stage; returns a small summary dict.");

#ifdef DISANA_VERSION
    m.attr("__version__") = DISANA_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
