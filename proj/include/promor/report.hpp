#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "promor/artifacts.hpp"
#include "promor/csv.hpp"
#include "promor/util.hpp"
#include "promor/version.hpp"

namespace promor {

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::is_regular_file(path, ec);
}

}  // namespace detail

struct ReportResult {
  std::string markdown;
  nlohmann::json topic_proportions;  // topic -> fraction of prompts
  std::vector<std::string> missing;  // artifact names that were absent
};

// Assemble a static markdown report from whatever artifacts exist in the
// directory. Missing artifacts turn into explicit "not computed" sections so
// partial pipelines still render.
inline ReportResult render_report(const std::string& artifact_dir) {
  ReportResult result;
  std::string& md = result.markdown;
  md += "# Prompt originality report\n\n";
  md += "Generated by " + std::string(kToolName) + " " +
        std::string(kVersion) + ".\n\n";
  md += "Methods: originality banding uses seeded 1-D K-Means; specifier "
        "grouping uses PCA (2 components) plus seeded K-Means with "
        "class-based TF-IDF keywords; dispersion uses point-to-centroid "
        "distances in a shared PCA projection.\n\n";

  // Band distributions.
  md += "## Originality band distributions\n\n";
  for (const std::string metric : {"lexical", "sequence", "thematic"}) {
    std::string path = artifact_dir + "/band_histogram_" + metric + ".json";
    md += "### " + metric + "\n\n";
    if (!detail::file_exists(path)) {
      md += "Not computed.\n\n";
      result.missing.push_back("band_histogram_" + metric + ".json");
      continue;
    }
    auto j = nlohmann::json::parse(read_file(path));
    md += "| band | count |\n|---|---|\n";
    for (const std::string band : {"Low", "Moderate", "High"}) {
      if (j.contains(band))
        md += "| " + band + " | " + std::to_string(j[band].get<std::size_t>()) +
              " |\n";
    }
    md += "\n";
  }

  // Topic proportions from the thematic score file.
  md += "## Topic proportions\n\n";
  std::string thematic_path = artifact_dir + "/scores_thematic.csv";
  if (!detail::file_exists(thematic_path)) {
    md += "Not computed.\n\n";
    result.missing.push_back("scores_thematic.csv");
  } else {
    auto rows = parse_csv(read_file(thematic_path), thematic_path);
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      ++total;
      if (rows[r].fields.size() < 3 || rows[r].fields[2].empty()) continue;
      for (const auto& topic : split(rows[r].fields[2], '|')) ++counts[topic];
    }
    md += "| topic | prompts | proportion |\n|---|---|---|\n";
    for (const auto& [topic, count] : counts) {
      double prop = total ? static_cast<double>(count) /
                                static_cast<double>(total)
                          : 0.0;
      md += "| " + topic + " | " + std::to_string(count) + " | " +
            detail::fixed6(prop) + " |\n";
      result.topic_proportions[topic] = prop;
    }
    md += "\n";
  }

  // Regression table.
  md += "## Engagement regression\n\n";
  std::string coef_path = artifact_dir + "/engage_coefficients.csv";
  std::string metrics_path = artifact_dir + "/engage_metrics.json";
  if (!detail::file_exists(coef_path) || !detail::file_exists(metrics_path)) {
    md += "Not computed.\n\n";
    result.missing.push_back("engage_coefficients.csv");
  } else {
    auto j = nlohmann::json::parse(read_file(metrics_path));
    md += "| metric | value |\n|---|---|\n";
    md += "| R-squared | " + detail::fixed6(j["r2"].get<double>()) + " |\n";
    md += "| MAE | " + detail::fixed6(j["mae"].get<double>()) + " |\n";
    md += "| RMSE | " + detail::fixed6(j["rmse"].get<double>()) + " |\n\n";
    auto rows = parse_csv(read_file(coef_path), coef_path);
    md += "| feature | coefficient | std error | p-value | 95% CI | "
          "selected |\n|---|---|---|---|---|---|\n";
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& f = rows[r].fields;
      if (f.size() != 7) continue;
      auto num = [&](const std::string& s) {
        auto v = parse_double(s);
        return v ? detail::fixed6(*v) : s;
      };
      md += "| " + f[0] + " | " + num(f[1]) + " | " + num(f[2]) + " | " +
            num(f[3]) + " | [" + num(f[4]) + ", " + num(f[5]) + "] | " +
            f[6] + " |\n";
    }
    md += "\n";
  }

  // Diversity summary.
  md += "## Embedding dispersion\n\n";
  std::string div_path = artifact_dir + "/diversity_report.json";
  if (!detail::file_exists(div_path)) {
    md += "Not computed.\n\n";
    result.missing.push_back("diversity_report.json");
  } else {
    auto j = nlohmann::json::parse(read_file(div_path));
    md += "Balanced group size: " +
          std::to_string(j["balanced_n"].get<std::size_t>()) + "\n\n";
    for (const std::string space : {"reduced", "original"}) {
      if (!j.contains(space)) continue;
      md += "### " + space + " space\n\n";
      md += "| band | n | mean centroid dist | variance |\n|---|---|---|---|\n";
      for (const auto& [band, m] : j[space]["per_group"].items()) {
        md += "| " + band + " | " + std::to_string(m["n"].get<std::size_t>()) +
              " | " + detail::fixed6(m["mean_centroid_dist"].get<double>()) +
              " | " + detail::fixed6(m["variance"].get<double>()) + " |\n";
      }
      md += "\n";
    }
  }
  return result;
}

}  // namespace promor
