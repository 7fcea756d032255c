#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "promor/error.hpp"
#include "promor/pca.hpp"
#include "promor/rng.hpp"

namespace promor {

struct EmbeddingSet {
  std::vector<std::string> ids;
  Eigen::MatrixXd vectors;          // one row per item
  std::vector<std::string> labels;  // originality band per item
};

struct GroupMetrics {
  double variance = 0.0;            // population variance of centroid distances
  double mean_centroid_dist = 0.0;
  std::size_t n = 0;
};

// Dispersion of a subset of rows: centroid = arithmetic mean, d_i = Euclidean
// distance to it, metrics are mean(d_i) and population variance of {d_i}.
inline GroupMetrics group_metrics(const Eigen::MatrixXd& points,
                                  const std::vector<std::size_t>& group) {
  if (group.empty()) fail_input("group_metrics: empty group");
  GroupMetrics m;
  m.n = group.size();
  Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(points.cols());
  for (std::size_t i : group)
    centroid += points.row(static_cast<Eigen::Index>(i));
  centroid /= static_cast<double>(group.size());

  std::vector<double> dists;
  dists.reserve(group.size());
  for (std::size_t i : group)
    dists.push_back(
        (points.row(static_cast<Eigen::Index>(i)) - centroid).norm());
  for (double d : dists) m.mean_centroid_dist += d;
  m.mean_centroid_dist /= static_cast<double>(dists.size());
  for (double d : dists) {
    double dev = d - m.mean_centroid_dist;
    m.variance += dev * dev;
  }
  m.variance /= static_cast<double>(dists.size());
  return m;
}

struct ClusterMetrics {
  int cluster_id = 0;
  std::string majority_band;
  double variance = 0.0;
  double mean_centroid_dist = 0.0;
  std::size_t n = 0;
};

struct ScatterPoint {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  std::string band;
  int cluster_id = 0;
};

struct DiversityReport {
  // Group dispersion in the 2-D PCA view and in the original embedding
  // space; the directional comparison holds in both, the magnitudes differ.
  std::map<std::string, GroupMetrics> per_group_reduced;
  std::map<std::string, GroupMetrics> per_group_original;
  std::vector<ClusterMetrics> per_cluster;  // K-Means clusters, reduced space
  std::vector<ScatterPoint> scatter;
  std::size_t balanced_n = 0;  // per group after downsampling
  bool pca_rank0 = false;
};

// High-vs-Low dispersion comparison: the larger band is downsampled to the
// smaller band's size (seeded) so neither group dominates, all kept points
// share one PCA projection, and the reduced points are additionally K-Means
// clustered for per-cluster metrics. Majority ties take the lexicographically
// smaller band name. Derived seed streams: "balance", "kmeans".
inline DiversityReport compare_groups(const EmbeddingSet& set, int k_clusters,
                                      std::uint64_t seed) {
  if (set.ids.size() != static_cast<std::size_t>(set.vectors.rows()) ||
      set.ids.size() != set.labels.size())
    fail_input("compare_groups: ids, vectors and labels must align");
  std::vector<std::size_t> high, low;
  for (std::size_t i = 0; i < set.labels.size(); ++i) {
    if (set.labels[i] == "High") high.push_back(i);
    else if (set.labels[i] == "Low") low.push_back(i);
  }
  if (high.empty()) fail_input("compare_groups: no High-band items");
  if (low.empty()) fail_input("compare_groups: no Low-band items");

  std::size_t m = std::min(high.size(), low.size());
  Rng balance_rng(derive_seed(seed, "balance"));
  auto downsample = [&](std::vector<std::size_t>& group) {
    if (group.size() == m) return;
    auto keep = sample_indices(group.size(), m, balance_rng);
    std::vector<std::size_t> next;
    next.reserve(m);
    for (std::size_t k : keep) next.push_back(group[k]);
    group = std::move(next);
  };
  downsample(high);
  downsample(low);

  std::vector<std::size_t> kept;
  kept.reserve(2 * m);
  kept.insert(kept.end(), high.begin(), high.end());
  kept.insert(kept.end(), low.begin(), low.end());
  std::sort(kept.begin(), kept.end());

  Eigen::MatrixXd balanced(static_cast<Eigen::Index>(kept.size()),
                           set.vectors.cols());
  for (std::size_t r = 0; r < kept.size(); ++r)
    balanced.row(static_cast<Eigen::Index>(r)) =
        set.vectors.row(static_cast<Eigen::Index>(kept[r]));

  auto pca = reduce_2d(balanced);

  DiversityReport report;
  report.balanced_n = m;
  report.pca_rank0 = pca.rank0;

  std::vector<std::size_t> high_rows, low_rows;
  for (std::size_t r = 0; r < kept.size(); ++r) {
    if (set.labels[kept[r]] == "High") high_rows.push_back(r);
    else low_rows.push_back(r);
  }
  report.per_group_reduced["High"] = group_metrics(pca.scores, high_rows);
  report.per_group_reduced["Low"] = group_metrics(pca.scores, low_rows);
  report.per_group_original["High"] = group_metrics(balanced, high_rows);
  report.per_group_original["Low"] = group_metrics(balanced, low_rows);

  auto km = kmeans(pca.scores, k_clusters, derive_seed(seed, "kmeans"));
  std::vector<std::vector<std::size_t>> members(
      static_cast<std::size_t>(km.centroids.rows()));
  for (std::size_t r = 0; r < kept.size(); ++r)
    members[static_cast<std::size_t>(km.assignment[r])].push_back(r);
  for (std::size_t c = 0; c < members.size(); ++c) {
    ClusterMetrics cm;
    cm.cluster_id = static_cast<int>(c);
    auto gm = group_metrics(pca.scores, members[c]);
    cm.variance = gm.variance;
    cm.mean_centroid_dist = gm.mean_centroid_dist;
    cm.n = gm.n;
    std::map<std::string, std::size_t> votes;
    for (std::size_t r : members[c]) ++votes[set.labels[kept[r]]];
    std::size_t best = 0;
    for (const auto& [band, count] : votes) {
      if (count > best) {
        best = count;
        cm.majority_band = band;
      }
    }
    report.per_cluster.push_back(std::move(cm));
  }

  report.scatter.reserve(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    report.scatter.push_back({set.ids[kept[r]],
                              pca.scores(static_cast<Eigen::Index>(r), 0),
                              pca.scores(static_cast<Eigen::Index>(r), 1),
                              set.labels[kept[r]], km.assignment[r]});
  }
  return report;
}

}  // namespace promor
