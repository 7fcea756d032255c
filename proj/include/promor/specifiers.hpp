#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "promor/corpus.hpp"
#include "promor/error.hpp"
#include "promor/pca.hpp"
#include "promor/text_prep.hpp"
#include "promor/thematic.hpp"

namespace promor {

// A comma-delimited prompt fragment ("highly detailed", "8k"), counted over
// the raw corpus text.
struct Specifier {
  std::string text;
  std::uint64_t count = 0;
  std::optional<std::vector<double>> embedding;
};

// Split raw prompts on commas, trim, lowercase, count exact duplicates.
// Retention is count >= min_count and character length strictly under
// max_len. Result sorted by count descending, text ascending.
inline std::vector<Specifier> extract_specifiers(const Corpus& corpus,
                                                 std::uint64_t min_count = 300,
                                                 std::size_t max_len = 35) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& rec : corpus.records) {
    for (const auto& segment : split(rec.text, ',')) {
      auto piece = to_lower_ascii(trim(segment));
      if (piece.empty()) continue;
      ++counts[piece];
    }
  }
  std::vector<Specifier> out;
  for (const auto& [text, count] : counts) {
    if (count >= min_count && text.size() < max_len)
      out.push_back({text, count, std::nullopt});
  }
  std::sort(out.begin(), out.end(), [](const Specifier& a, const Specifier& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.text < b.text;
  });
  return out;
}

struct SpecifierCluster {
  int cluster_id = 0;
  std::vector<std::size_t> members;  // indices into the specifier list
  std::vector<std::pair<std::string, double>> keywords;  // weight descending
};

struct SpecifierClustering {
  std::vector<SpecifierCluster> clusters;
  Eigen::MatrixXd reduced;  // n x 2 PCA coordinates
  int dropped_empty = 0;
};

// PCA to 2 components, then seeded K-Means. Every specifier is assigned;
// clusters left empty in degenerate inputs are dropped (reported via
// dropped_empty).
inline SpecifierClustering cluster_specifiers(
    const std::vector<Specifier>& specifiers, int k, std::uint64_t seed) {
  if (specifiers.empty()) fail_input("cluster_specifiers: no specifiers");
  if (k < 1) fail_input("cluster_specifiers: k must be >= 1");
  if (static_cast<std::size_t>(k) > specifiers.size())
    fail_input("cluster_specifiers: k (" + std::to_string(k) +
               ") exceeds specifier count (" +
               std::to_string(specifiers.size()) + ")");

  std::optional<std::size_t> dim;
  for (const auto& s : specifiers) {
    if (!s.embedding)
      fail_input("cluster_specifiers: specifier \"" + s.text +
                 "\" has no embedding");
    if (!dim) dim = s.embedding->size();
    else if (*dim != s.embedding->size())
      fail_input("cluster_specifiers: embedding dimension mismatch for \"" +
                 s.text + "\"");
  }

  SpecifierClustering result;
  if (specifiers.size() == 1) {
    result.reduced = Eigen::MatrixXd::Zero(1, 2);
    result.clusters.push_back({0, {0}, {}});
    return result;
  }

  Eigen::MatrixXd X(specifiers.size(), static_cast<Eigen::Index>(*dim));
  for (std::size_t i = 0; i < specifiers.size(); ++i)
    for (std::size_t j = 0; j < *dim; ++j)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (*specifiers[i].embedding)[j];

  auto pca = reduce_2d(X);
  auto km = kmeans(pca.scores, k, seed);
  result.reduced = pca.scores;
  result.dropped_empty = km.dropped_empty;
  result.clusters.resize(static_cast<std::size_t>(km.centroids.rows()));
  for (std::size_t c = 0; c < result.clusters.size(); ++c)
    result.clusters[c].cluster_id = static_cast<int>(c);
  for (std::size_t i = 0; i < specifiers.size(); ++i)
    result.clusters[static_cast<std::size_t>(km.assignment[i])]
        .members.push_back(i);
  return result;
}

// Class-based TF-IDF: W(t,c) = tf(t,c) * ln(1 + A / f(t)), where tf counts
// occurrences of t in the cluster's concatenated specifier tokens (each
// retained specifier contributes once), f(t) is the total across clusters and
// A the average token count per cluster. Top-n per cluster, weight
// descending, ties lexicographic.
inline void ctfidf_keywords(std::vector<SpecifierCluster>& clusters,
                            const std::vector<Specifier>& specifiers,
                            std::size_t top_n,
                            const StopwordSet& stopwords = {}) {
  if (clusters.empty()) fail_input("ctfidf_keywords: no clusters");
  std::vector<std::map<std::string, std::uint64_t>> tf(clusters.size());
  std::map<std::string, std::uint64_t> global;
  std::uint64_t total_tokens = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t idx : clusters[c].members) {
      for (const auto& tok : tokenize(specifiers[idx].text, stopwords)) {
        ++tf[c][tok];
        ++global[tok];
        ++total_tokens;
      }
    }
  }
  double avg_tokens =
      static_cast<double>(total_tokens) / static_cast<double>(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::vector<std::pair<std::string, double>> weighted;
    for (const auto& [term, count] : tf[c]) {
      double weight =
          static_cast<double>(count) *
          std::log(1.0 + avg_tokens / static_cast<double>(global[term]));
      weighted.emplace_back(term, weight);
    }
    std::sort(weighted.begin(), weighted.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    if (weighted.size() > top_n) weighted.resize(top_n);
    clusters[c].keywords = std::move(weighted);
  }
}

// Topic name = provided name or "topic_<id>"; keywords are the ranked c-TF-IDF
// terms. Clusters with no keywords are omitted (a lexicon keyword set must be
// nonempty).
inline TopicLexicon emit_lexicon(
    const std::vector<SpecifierCluster>& clusters,
    const std::optional<std::vector<std::string>>& names = std::nullopt) {
  if (names && names->size() != clusters.size())
    fail_input("emit_lexicon: got " + std::to_string(names->size()) +
               " names for " + std::to_string(clusters.size()) + " clusters");
  TopicLexicon lex;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].keywords.empty()) continue;
    std::string name = names ? (*names)[c]
                             : "topic_" + std::to_string(clusters[c].cluster_id);
    std::vector<std::string> keywords;
    keywords.reserve(clusters[c].keywords.size());
    for (const auto& [term, weight] : clusters[c].keywords)
      keywords.push_back(term);
    if (!lex.topics.emplace(name, std::move(keywords)).second)
      fail_input("emit_lexicon: duplicate topic name \"" + name + "\"");
  }
  return lex;
}

}  // namespace promor
