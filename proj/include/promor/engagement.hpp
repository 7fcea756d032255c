#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "promor/corpus.hpp"
#include "promor/error.hpp"
#include "promor/regression.hpp"
#include "promor/rng.hpp"
#include "promor/thematic.hpp"

namespace promor {

// Per-prompt originality triple as read back from the merged score file.
// thematic is absent for unlabeled prompts and becomes 0 plus a missingness
// indicator during vectorization.
struct ScoreTriple {
  double lexical = 0.0;
  double sequence = 0.0;
  std::optional<double> thematic;
};

// Balance high/low engagement classes around the mean like count: records
// with like_count >= mean form one class, the rest the other; the larger
// class is downsampled (seeded) to the smaller one's size. Output indices
// keep the input order.
inline std::vector<std::size_t> balanced_sample_indices(
    const std::vector<double>& like_counts, std::uint64_t seed) {
  if (like_counts.empty()) fail_input("balanced_sample: no records");
  double mean = 0.0;
  for (double v : like_counts) mean += v;
  mean /= static_cast<double>(like_counts.size());

  std::vector<std::size_t> above, below;
  for (std::size_t i = 0; i < like_counts.size(); ++i) {
    if (like_counts[i] >= mean) above.push_back(i);
    else below.push_back(i);
  }
  if (above.empty())
    fail_input("balanced_sample: no records at or above the mean like count");
  if (below.empty())
    fail_input("balanced_sample: no records below the mean like count");

  std::size_t m = std::min(above.size(), below.size());
  Rng rng(seed);
  auto shrink = [&](std::vector<std::size_t>& group) {
    if (group.size() == m) return;
    auto keep = sample_indices(group.size(), m, rng);
    std::vector<std::size_t> next;
    next.reserve(m);
    for (std::size_t k : keep) next.push_back(group[k]);
    group = std::move(next);
  };
  shrink(above);
  shrink(below);

  std::vector<std::size_t> out;
  out.reserve(2 * m);
  out.insert(out.end(), above.begin(), above.end());
  out.insert(out.end(), below.begin(), below.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Fixed feature layout: [lexical, sequence, thematic, thematic_missing,
// topic flags in lexicon (lexicographic) order, nsfw]. Absent nsfw counts as
// safe (0).
inline std::vector<std::string> feature_names(const TopicLexicon& lexicon) {
  std::vector<std::string> names = {"lexical", "sequence", "thematic",
                                    "thematic_missing"};
  for (const auto& [topic, keywords] : lexicon.topics)
    names.push_back("topic:" + topic);
  names.push_back("nsfw");
  return names;
}

inline std::vector<double> vectorize(const PromptRecord& rec,
                                     const ScoreTriple& scores,
                                     const TopicLexicon& lexicon,
                                     const CompiledLexicon& compiled,
                                     const StopwordSet& stopwords) {
  std::vector<double> v;
  v.reserve(5 + lexicon.topics.size());
  v.push_back(scores.lexical);
  v.push_back(scores.sequence);
  v.push_back(scores.thematic.value_or(0.0));
  v.push_back(scores.thematic ? 0.0 : 1.0);
  auto topics = assign_topics(compiled, tokenize(rec.text, stopwords));
  std::size_t t = 0;
  for (const auto& [topic, keywords] : lexicon.topics) {
    bool present = t < topics.size() && topics[t] == topic;
    if (present) ++t;
    v.push_back(present ? 1.0 : 0.0);
  }
  v.push_back(rec.nsfw.value_or(false) ? 1.0 : 0.0);
  return v;
}

struct FeatureMatrix {
  std::vector<std::string> names;
  std::vector<std::string> ids;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

struct EngagementConfig {
  double lambda = 0.1;
  int folds = 5;
  double p_threshold = 0.05;
  std::uint64_t seed = 0;
};

struct EngagementResult {
  std::vector<std::string> names;
  // Inference columns (Table-style): OLS coefficient, std error, p-value, CI.
  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd p_values;
  std::vector<std::pair<double, double>> conf_intervals;
  std::vector<bool> selected;  // p < threshold
  // Final model: ridge refit on the selected features (zeros elsewhere).
  Eigen::VectorXd final_coefficients;
  double final_intercept = 0.0;
  CvMetrics cv;
  double lambda = 0.0;
  double p_threshold = 0.05;
  std::uint64_t seed = 0;
  std::size_t n_rows = 0;
  bool singular = false;
};

// Full engagement pipeline over records that carry like counts: balanced
// sampling ("balance" seed stream), ridge cross-validation ("cv" stream),
// OLS inference, p-value selection, and a ridge refit on the survivors.
inline EngagementResult run_engagement(
    const Corpus& corpus, const std::map<std::string, ScoreTriple>& scores,
    const TopicLexicon& lexicon, const StopwordSet& stopwords,
    const EngagementConfig& config) {
  if (corpus.empty()) fail_input("run_engagement: empty corpus");

  std::vector<double> likes;
  likes.reserve(corpus.size());
  for (const auto& rec : corpus.records) {
    if (!rec.like_count)
      fail_input("run_engagement: record \"" + rec.id +
                 "\" has no like_count");
    likes.push_back(static_cast<double>(*rec.like_count));
  }
  auto rows =
      balanced_sample_indices(likes, derive_seed(config.seed, "balance"));

  auto compiled = compile_lexicon(lexicon, stopwords);
  FeatureMatrix fm;
  fm.names = feature_names(lexicon);
  fm.X.resize(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(fm.names.size()));
  fm.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& rec = corpus.records[rows[r]];
    auto it = scores.find(rec.id);
    if (it == scores.end())
      fail_input("run_engagement: no scores for record \"" + rec.id + "\"");
    auto v = vectorize(rec, it->second, lexicon, compiled, stopwords);
    for (std::size_t c = 0; c < v.size(); ++c)
      fm.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[c];
    fm.y(static_cast<Eigen::Index>(r)) = likes[rows[r]];
    fm.ids.push_back(rec.id);
  }

  EngagementResult result;
  result.names = fm.names;
  result.lambda = config.lambda;
  result.p_threshold = config.p_threshold;
  result.seed = config.seed;
  result.n_rows = rows.size();

  result.cv = cross_validate(fm.X, fm.y, config.lambda, config.folds,
                             derive_seed(config.seed, "cv"));

  auto inf = ols_inference(fm.X, fm.y);
  result.coefficients = inf.coefficients;
  result.std_errors = inf.std_errors;
  result.p_values = inf.p_values;
  result.conf_intervals = inf.conf_intervals;
  result.singular = inf.singular;
  result.selected.resize(fm.names.size());
  std::vector<int> picked;
  for (std::size_t j = 0; j < fm.names.size(); ++j) {
    result.selected[j] = inf.p_values(static_cast<Eigen::Index>(j)) <
                         config.p_threshold;
    if (result.selected[j]) picked.push_back(static_cast<int>(j));
  }

  result.final_coefficients = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(fm.names.size()));
  if (picked.empty()) {
    result.final_intercept = fm.y.mean();
  } else {
    Eigen::MatrixXd sub(fm.X.rows(), static_cast<Eigen::Index>(picked.size()));
    for (std::size_t c = 0; c < picked.size(); ++c)
      sub.col(static_cast<Eigen::Index>(c)) = fm.X.col(picked[c]);
    auto refit = fit_ridge(sub, fm.y, config.lambda);
    for (std::size_t c = 0; c < picked.size(); ++c)
      result.final_coefficients(picked[c]) =
          refit.coefficients(static_cast<Eigen::Index>(c));
    result.final_intercept = refit.intercept;
  }
  return result;
}

}  // namespace promor
