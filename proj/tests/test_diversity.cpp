#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "promor/diversity.hpp"
#include "promor/rng.hpp"

using namespace promor;

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index n, Eigen::Index d, double sigma,
                                Rng& rng, double shift = 0.0) {
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      X(i, j) = shift + sigma * rng.gaussian();
  return X;
}

std::vector<std::size_t> all_rows(Eigen::Index n) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return rows;
}

}  // namespace

TEST_CASE("PCA of 2-D data preserves pairwise distances") {
  Rng rng(4);
  auto X = gaussian_matrix(40, 2, 1.5, rng);
  auto pca = reduce_2d(X);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::Index a = static_cast<Eigen::Index>(rng.below(40));
    Eigen::Index b = static_cast<Eigen::Index>(rng.below(40));
    double orig = (X.row(a) - X.row(b)).norm();
    double proj = (pca.scores.row(a) - pca.scores.row(b)).norm();
    CHECK(proj == Catch::Approx(orig).margin(1e-9));
  }
}

TEST_CASE("rank-1 data has an identically zero second component") {
  Eigen::MatrixXd X(5, 3);
  Eigen::RowVector3d direction(1.0, 2.0, -1.0);
  for (int i = 0; i < 5; ++i) X.row(i) = direction * static_cast<double>(i);
  auto pca = reduce_2d(X);
  CHECK_FALSE(pca.rank0);
  CHECK(pca.scores.col(1).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(pca.eigenvalues(1) <= 1e-9);
}

TEST_CASE("identical rows flag rank0 and zero scores") {
  Eigen::MatrixXd X(4, 3);
  for (int i = 0; i < 4; ++i) X.row(i) << 0.1, 2.0, -7.5;
  auto pca = reduce_2d(X);
  CHECK(pca.rank0);
  CHECK(pca.scores.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("PCA preconditions") {
  CHECK_THROWS_AS(reduce_2d(Eigen::MatrixXd(1, 5)), Error);
  CHECK_THROWS_AS(reduce_2d(Eigen::MatrixXd(5, 1)), Error);
}

TEST_CASE("sign convention makes repeated runs and mirrored data agree") {
  Rng rng(9);
  auto X = gaussian_matrix(30, 4, 1.0, rng);
  auto a = reduce_2d(X);
  auto b = reduce_2d(X);
  CHECK((a.scores - b.scores).cwiseAbs().maxCoeff() == 0.0);
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < 4; ++i) {
      if (std::abs(a.components(i, c)) > 1e-12) {
        CHECK(a.components(i, c) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("rank-2 reconstruction error matches the Jacobi oracle") {
  Rng rng(41);
  Eigen::MatrixXd X = gaussian_matrix(200, 10, 1.0, rng);
  // stretch two directions so the spectrum is informative
  X.col(0) *= 3.0;
  X.col(1) *= 2.0;
  auto pca = reduce_2d(X);

  Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
  Eigen::MatrixXd recon = pca.scores * pca.components.transpose();
  double recon_error = (centered - recon).squaredNorm();

  oracle::Matrix scatter(10, std::vector<double>(10, 0.0));
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b)
      for (int i = 0; i < 200; ++i)
        scatter[a][b] += centered(i, a) * centered(i, b);
  auto eigenvalues = oracle::jacobi_eigenvalues(scatter);
  double expected = 0.0;
  for (std::size_t k = 2; k < eigenvalues.size(); ++k)
    expected += eigenvalues[k];
  CHECK(recon_error == Catch::Approx(expected).margin(1e-8));
  CHECK(pca.eigenvalues(0) == Catch::Approx(eigenvalues[0]).margin(1e-8));
  CHECK(pca.eigenvalues(1) == Catch::Approx(eigenvalues[1]).margin(1e-8));
}

TEST_CASE("group metrics: degenerate and symmetric configurations") {
  Eigen::MatrixXd same(3, 2);
  same << 2.0, 2.0, 2.0, 2.0, 2.0, 2.0;
  auto m = group_metrics(same, all_rows(3));
  CHECK(m.variance == 0.0);
  CHECK(m.mean_centroid_dist == 0.0);

  Eigen::MatrixXd corners(4, 2);
  corners << 1, 1, 1, -1, -1, 1, -1, -1;
  auto c = group_metrics(corners, all_rows(4));
  CHECK(c.mean_centroid_dist == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
  CHECK(c.variance == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("group metrics on the 3-4-5 triangle match the hand oracle") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0, 0, 3, 0, 0, 4;
  auto m = group_metrics(pts, all_rows(3));
  // centroid (1, 4/3); distances 5/3, sqrt(52)/3, sqrt(73)/3
  double d1 = 5.0 / 3.0;
  double d2 = std::sqrt(52.0) / 3.0;
  double d3 = std::sqrt(73.0) / 3.0;
  double mean = (d1 + d2 + d3) / 3.0;
  double var = ((d1 - mean) * (d1 - mean) + (d2 - mean) * (d2 - mean) +
                (d3 - mean) * (d3 - mean)) /
               3.0;
  CHECK(m.mean_centroid_dist == Catch::Approx(mean).margin(1e-12));
  CHECK(m.variance == Catch::Approx(var).margin(1e-12));
  CHECK(m.mean_centroid_dist == Catch::Approx(2.3061).margin(1e-4));
  CHECK(m.variance == Catch::Approx(0.2373).margin(1e-4));
  CHECK(m.n == 3);
}

TEST_CASE("metrics are translation invariant and scale as expected") {
  Rng rng(77);
  auto X = gaussian_matrix(60, 3, 1.0, rng);
  auto base = group_metrics(X, all_rows(60));

  Eigen::MatrixXd shifted = X;
  shifted.rowwise() += Eigen::RowVector3d(13.0, -4.0, 0.5);
  auto t = group_metrics(shifted, all_rows(60));
  CHECK(t.mean_centroid_dist ==
        Catch::Approx(base.mean_centroid_dist).margin(1e-9));
  CHECK(t.variance == Catch::Approx(base.variance).margin(1e-9));

  auto s = group_metrics(Eigen::MatrixXd(3.0 * X), all_rows(60));
  CHECK(s.mean_centroid_dist ==
        Catch::Approx(3.0 * base.mean_centroid_dist).margin(1e-9));
  CHECK(s.variance == Catch::Approx(9.0 * base.variance).margin(1e-9));
}

namespace {

EmbeddingSet two_band_set(std::size_t n_high, std::size_t n_low,
                          double sigma_high, double sigma_low, Rng& rng,
                          Eigen::Index dim = 8) {
  EmbeddingSet set;
  set.vectors.resize(static_cast<Eigen::Index>(n_high + n_low), dim);
  for (std::size_t i = 0; i < n_high + n_low; ++i) {
    bool high = i < n_high;
    set.ids.push_back((high ? "h" : "l") + std::to_string(i));
    set.labels.push_back(high ? "High" : "Low");
    for (Eigen::Index j = 0; j < dim; ++j)
      set.vectors(static_cast<Eigen::Index>(i), j) =
          (high ? sigma_high : sigma_low) * rng.gaussian();
  }
  return set;
}

}  // namespace

TEST_CASE("unbalanced groups are downsampled to the smaller size") {
  Rng rng(2);
  auto set = two_band_set(975, 1700, 1.0, 0.1, rng);
  auto report = compare_groups(set, 4, 11);
  CHECK(report.balanced_n == 975);
  CHECK(report.per_group_reduced.at("High").n == 975);
  CHECK(report.per_group_reduced.at("Low").n == 975);
  CHECK(report.scatter.size() == 2 * 975);
}

TEST_CASE("wider band disperses more in both spaces") {
  Rng rng(14);
  auto set = two_band_set(500, 500, 1.0, 0.1, rng);
  auto report = compare_groups(set, 5, 3);
  const auto& reduced = report.per_group_reduced;
  const auto& original = report.per_group_original;
  CHECK(reduced.at("High").mean_centroid_dist >=
        5.0 * reduced.at("Low").mean_centroid_dist);
  CHECK(original.at("High").mean_centroid_dist >=
        5.0 * original.at("Low").mean_centroid_dist);
  CHECK(reduced.at("High").variance > reduced.at("Low").variance);
  CHECK(original.at("High").variance > original.at("Low").variance);
}

TEST_CASE("identical distributions give differences within sampling noise") {
  Rng rng(25);
  auto set = two_band_set(400, 400, 1.0, 1.0, rng);
  auto report = compare_groups(set, 4, 9);
  const auto& original = report.per_group_original;
  double diff = original.at("High").mean_centroid_dist -
                original.at("Low").mean_centroid_dist;

  // Bootstrap the difference of group means of centroid distance under
  // exchangeability; the observed difference must sit inside the 99% CI.
  std::vector<double> dists;
  for (Eigen::Index i = 0; i < set.vectors.rows(); ++i)
    dists.push_back(
        (set.vectors.row(i) - set.vectors.colwise().mean()).norm());
  Rng boot(4242);
  std::vector<double> deltas;
  for (int b = 0; b < 2000; ++b) {
    double a = 0.0, c = 0.0;
    for (int k = 0; k < 400; ++k) {
      a += dists[boot.below(dists.size())];
      c += dists[boot.below(dists.size())];
    }
    deltas.push_back((a - c) / 400.0);
  }
  std::sort(deltas.begin(), deltas.end());
  double lo = deltas[10], hi = deltas[1989];
  CHECK(diff >= lo);
  CHECK(diff <= hi);
}

TEST_CASE("missing bands are rejected") {
  Rng rng(1);
  EmbeddingSet set;
  set.vectors = gaussian_matrix(4, 3, 1.0, rng);
  set.ids = {"a", "b", "c", "d"};
  set.labels = {"High", "High", "Moderate", "Moderate"};
  CHECK_THROWS_WITH(compare_groups(set, 2, 1),
                    Catch::Matchers::ContainsSubstring("Low"));
}

TEST_CASE("per-cluster metrics cover every balanced point") {
  Rng rng(33);
  auto set = two_band_set(60, 80, 1.0, 0.2, rng);
  auto report = compare_groups(set, 3, 21);
  std::size_t total = 0;
  for (const auto& c : report.per_cluster) {
    CHECK((c.majority_band == "High" || c.majority_band == "Low"));
    total += c.n;
  }
  CHECK(total == 2 * report.balanced_n);
}

TEST_CASE("report is deterministic for a fixed seed") {
  Rng rng(71);
  auto set = two_band_set(50, 90, 1.0, 0.3, rng);
  auto a = compare_groups(set, 3, 5);
  auto b = compare_groups(set, 3, 5);
  CHECK(a.per_group_reduced.at("High").mean_centroid_dist ==
        b.per_group_reduced.at("High").mean_centroid_dist);
  REQUIRE(a.scatter.size() == b.scatter.size());
  for (std::size_t i = 0; i < a.scatter.size(); ++i) {
    CHECK(a.scatter[i].id == b.scatter[i].id);
    CHECK(a.scatter[i].x == b.scatter[i].x);
    CHECK(a.scatter[i].cluster_id == b.scatter[i].cluster_id);
  }
}
