#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "cts/pipeline.hpp"

namespace cts {

namespace detail {
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}
}  // namespace detail

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json per_type = nlohmann::json::object();
  for (const auto& [type, s] : r.per_type)
    per_type[type] = {{"tp", s.tp},        {"fp", s.fp},         {"fn", s.fn},
                      {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  return nlohmann::json{{"per_type", per_type},
                        {"macro_precision", r.macro_precision},
                        {"macro_recall", r.macro_recall},
                        {"macro_f1", r.macro_f1}};
}

// Flat metric rows: variant,seed,split,type,precision,recall,f1,db
// (db only on macro rows, where it is defined).
inline std::string report_csv_header() { return "variant,seed,split,type,precision,recall,f1,db\n"; }

inline std::string eval_report_csv_rows(const std::string& variant, const std::string& seed,
                                        const std::string& split, const EvalReport& r,
                                        double db = std::numeric_limits<double>::quiet_NaN()) {
  std::string out;
  for (const auto& [type, s] : r.per_type)
    out += variant + "," + seed + "," + split + "," + type + "," + detail::fmt_double(s.precision) +
           "," + detail::fmt_double(s.recall) + "," + detail::fmt_double(s.f1) + ",\n";
  out += variant + "," + seed + "," + split + ",macro," + detail::fmt_double(r.macro_precision) + "," +
         detail::fmt_double(r.macro_recall) + "," + detail::fmt_double(r.macro_f1) + "," +
         (std::isnan(db) ? std::string() : detail::fmt_double(db)) + "\n";
  return out;
}

inline nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json variants = nlohmann::json::array();
  for (const VariantSummary& v : report.variants) {
    nlohmann::json runs = nlohmann::json::array();
    for (const RunMetrics& m : v.runs) {
      nlohmann::json run = {{"seed", m.seed},
                            {"test", to_json(m.test)},
                            {"fp_pseudo_style", m.fp_pseudo_style},
                            {"pseudo_count", m.pseudo_count}};
      if (!std::isnan(m.db)) run["db"] = m.db;
      runs.push_back(std::move(run));
    }
    nlohmann::json summary = {{"variant", v.variant},
                              {"mean_f1", v.mean_f1},
                              {"std_f1", v.std_f1},
                              {"mean_precision", v.mean_precision},
                              {"mean_recall", v.mean_recall},
                              {"mean_fp_pseudo_style", v.mean_fp},
                              {"runs", std::move(runs)}};
    if (!std::isnan(v.mean_db)) summary["mean_db"] = v.mean_db;
    variants.push_back(std::move(summary));
  }
  return nlohmann::json{{"variants", std::move(variants)}};
}

inline std::string experiment_csv(const ExperimentReport& report) {
  std::string out = report_csv_header();
  for (const VariantSummary& v : report.variants)
    for (const RunMetrics& m : v.runs)
      out += eval_report_csv_rows(v.variant, std::to_string(m.seed), "test", m.test, m.db);
  return out;
}

}  // namespace cts
