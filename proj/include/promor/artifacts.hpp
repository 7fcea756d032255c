#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "promor/banding.hpp"
#include "promor/csv.hpp"
#include "promor/diversity.hpp"
#include "promor/engagement.hpp"
#include "promor/error.hpp"
#include "promor/lexical.hpp"
#include "promor/sequence.hpp"
#include "promor/thematic.hpp"
#include "promor/util.hpp"

// CSV/JSON artifact formats shared by the CLI commands and the report
// renderer. All numbers are serialized via shortest round-trip formatting so
// reruns with identical inputs produce byte-identical files.

namespace promor {

inline std::string lexical_scores_csv(const std::vector<LexicalScore>& scores) {
  std::string out;
  write_csv_row(out, {"id", "s_original", "s_adjusted", "penalty_rep",
                      "penalty_common", "s_final"});
  for (const auto& s : scores) {
    write_csv_row(out, {s.id, format_double(s.s_original),
                        format_double(s.s_adjusted),
                        format_double(s.penalty_rep),
                        format_double(s.penalty_common),
                        format_double(s.s_final)});
  }
  return out;
}

inline std::string sequence_scores_csv(
    const std::vector<SequenceScore>& scores) {
  std::string out;
  write_csv_row(out, {"id", "n_bigrams", "raw_sum", "s_seq", "flag"});
  for (const auto& s : scores) {
    write_csv_row(out, {s.id, std::to_string(s.n_bigrams),
                        format_double(s.raw_sum), format_double(s.s_seq),
                        s.insufficient_tokens ? "insufficient_tokens" : ""});
  }
  return out;
}

inline std::string thematic_scores_csv(
    const std::vector<ThematicScore>& scores) {
  std::string out;
  write_csv_row(out, {"id", "m", "topics", "s_topic", "flag"});
  for (const auto& s : scores) {
    write_csv_row(out, {s.id, std::to_string(s.topics.size()),
                        join(s.topics, "|"),
                        s.s_topic ? format_double(*s.s_topic) : "",
                        s.s_topic ? "" : "unlabeled"});
  }
  return out;
}

inline std::string merged_scores_csv(const std::vector<LexicalScore>& lex,
                                     const std::vector<SequenceScore>& seq,
                                     const std::vector<ThematicScore>& thm) {
  if (lex.size() != seq.size() || lex.size() != thm.size())
    fail_internal("merged scores: per-metric row counts differ");
  std::string out;
  write_csv_row(out, {"id", "s_lexical", "s_sequence", "s_thematic", "flags"});
  for (std::size_t i = 0; i < lex.size(); ++i) {
    std::vector<std::string> flags;
    if (lex[i].empty_prompt) flags.push_back("empty");
    if (seq[i].insufficient_tokens) flags.push_back("insufficient_tokens");
    if (!thm[i].s_topic) flags.push_back("unlabeled");
    write_csv_row(out, {lex[i].id, format_double(lex[i].s_final),
                        format_double(seq[i].s_seq),
                        thm[i].s_topic ? format_double(*thm[i].s_topic) : "",
                        join(flags, ";")});
  }
  return out;
}

struct MergedScoreRow {
  std::string id;
  ScoreTriple scores;
  std::vector<std::string> flags;
};

inline std::vector<MergedScoreRow> read_merged_scores(const std::string& path) {
  auto rows = parse_csv(read_file(path), path);
  if (rows.empty() || rows[0].fields !=
                          std::vector<std::string>{"id", "s_lexical",
                                                   "s_sequence", "s_thematic",
                                                   "flags"})
    fail_input(path + ": not a merged score file");
  std::vector<MergedScoreRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != 5)
      fail_input(path + ": malformed row at line " +
                 std::to_string(rows[r].line));
    MergedScoreRow row;
    row.id = f[0];
    auto lex = parse_double(f[1]);
    auto seq = parse_double(f[2]);
    if (!lex || !seq)
      fail_input(path + ": bad score at line " + std::to_string(rows[r].line));
    row.scores.lexical = *lex;
    row.scores.sequence = *seq;
    if (!f[3].empty()) {
      auto thm = parse_double(f[3]);
      if (!thm)
        fail_input(path + ": bad thematic score at line " +
                   std::to_string(rows[r].line));
      row.scores.thematic = *thm;
    }
    if (!f[4].empty()) row.flags = split(f[4], ';');
    out.push_back(std::move(row));
  }
  return out;
}

// Per-metric score extraction for banding: (id, value) for unflagged rows;
// include_flagged folds flagged rows in at value 0.
inline std::vector<std::pair<std::string, double>> bandable_scores(
    const std::vector<MergedScoreRow>& rows, const std::string& metric,
    bool include_flagged) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& row : rows) {
    std::optional<double> value;
    bool flagged = false;
    if (metric == "lexical") {
      value = row.scores.lexical;
      for (const auto& f : row.flags) flagged |= (f == "empty");
    } else if (metric == "sequence") {
      value = row.scores.sequence;
      for (const auto& f : row.flags) flagged |= (f == "insufficient_tokens");
    } else if (metric == "thematic") {
      value = row.scores.thematic;
      flagged = !row.scores.thematic.has_value();
    } else {
      fail_input("unknown metric: " + metric);
    }
    if (flagged) {
      if (include_flagged) out.emplace_back(row.id, 0.0);
      continue;
    }
    if (value) out.emplace_back(row.id, *value);
  }
  return out;
}

inline std::string bands_csv(const BandingResult& banding) {
  std::string out;
  write_csv_row(out, {"id", "metric", "band", "centroid"});
  for (const auto& a : banding.assignments)
    write_csv_row(out, {a.id, a.metric, band_name(a.band),
                        format_double(a.centroid)});
  return out;
}

inline std::map<std::string, std::string> read_bands_csv(
    const std::string& path) {
  auto rows = parse_csv(read_file(path), path);
  if (rows.empty() ||
      rows[0].fields != std::vector<std::string>{"id", "metric", "band",
                                                 "centroid"})
    fail_input(path + ": not a band file");
  std::map<std::string, std::string> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].fields.size() != 4)
      fail_input(path + ": malformed row at line " +
                 std::to_string(rows[r].line));
    out[rows[r].fields[0]] = rows[r].fields[2];
  }
  return out;
}

inline std::string histogram_json(const BandingResult& banding) {
  nlohmann::json j;
  for (const auto& [band, count] : banding.histogram) j[band] = count;
  return j.dump(2) + "\n";
}

inline nlohmann::json group_metrics_json(const GroupMetrics& m) {
  return {{"variance", m.variance},
          {"mean_centroid_dist", m.mean_centroid_dist},
          {"n", m.n}};
}

inline std::string diversity_report_json(const DiversityReport& report) {
  nlohmann::json j;
  j["balanced_n"] = report.balanced_n;
  j["pca_rank0"] = report.pca_rank0;
  for (const auto& [band, m] : report.per_group_reduced)
    j["reduced"]["per_group"][band] = group_metrics_json(m);
  for (const auto& [band, m] : report.per_group_original)
    j["original"]["per_group"][band] = group_metrics_json(m);
  auto clusters = nlohmann::json::array();
  for (const auto& c : report.per_cluster) {
    clusters.push_back({{"cluster_id", c.cluster_id},
                        {"majority_band", c.majority_band},
                        {"variance", c.variance},
                        {"mean_centroid_dist", c.mean_centroid_dist},
                        {"n", c.n}});
  }
  j["per_cluster"] = clusters;
  return j.dump(2) + "\n";
}

inline std::string scatter_json(const DiversityReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : report.scatter)
    points.push_back({{"id", p.id},
                      {"x", p.x},
                      {"y", p.y},
                      {"band", p.band},
                      {"cluster_id", p.cluster_id}});
  nlohmann::json j;
  j["points"] = points;
  return j.dump(2) + "\n";
}

inline std::string coefficients_csv(const EngagementResult& result) {
  std::string out;
  write_csv_row(out, {"feature", "coefficient", "std_error", "p_value",
                      "ci_lo", "ci_hi", "selected"});
  for (std::size_t j = 0; j < result.names.size(); ++j) {
    Eigen::Index i = static_cast<Eigen::Index>(j);
    write_csv_row(out, {result.names[j], format_double(result.coefficients(i)),
                        format_double(result.std_errors(i)),
                        format_double(result.p_values(i)),
                        format_double(result.conf_intervals[j].first),
                        format_double(result.conf_intervals[j].second),
                        result.selected[j] ? "true" : "false"});
  }
  return out;
}

inline std::string engage_metrics_json(const EngagementResult& result,
                                       int folds) {
  nlohmann::json j;
  j["r2"] = result.cv.r2;
  j["mae"] = result.cv.mae;
  j["rmse"] = result.cv.rmse;
  j["lambda"] = result.lambda;
  j["folds"] = folds;
  j["seed"] = result.seed;
  return j.dump(2) + "\n";
}

inline std::string engage_model_json(const EngagementResult& result) {
  nlohmann::json features = nlohmann::json::object();
  for (std::size_t j = 0; j < result.names.size(); ++j)
    if (result.selected[j])
      features[result.names[j]] =
          result.final_coefficients(static_cast<Eigen::Index>(j));
  nlohmann::json j;
  j["intercept"] = result.final_intercept;
  j["coefficients"] = features;
  j["lambda"] = result.lambda;
  j["p_threshold"] = result.p_threshold;
  j["n_rows"] = result.n_rows;
  return j.dump(2) + "\n";
}

}  // namespace promor
