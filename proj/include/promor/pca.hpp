#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "promor/error.hpp"
#include "promor/rng.hpp"

namespace promor {

struct Pca2d {
  Eigen::MatrixXd scores;       // n x 2, projections of the centered rows
  Eigen::MatrixXd components;   // d x 2, unit norm, deterministic signs
  Eigen::Vector2d eigenvalues;  // scatter-matrix eigenvalues, descending
  Eigen::RowVectorXd mean;
  bool rank0 = false;           // all rows identical; scores forced to zero
};

// Projection onto the top-2 principal components of the mean-centered data.
// Sign convention: the first loading of each component with magnitude above
// 1e-12 is made positive, so repeated runs and different eigensolvers agree
// up to that convention.
inline Pca2d reduce_2d(const Eigen::MatrixXd& X) {
  if (X.rows() < 2) fail_input("reduce_2d: need at least 2 rows");
  if (X.cols() < 2) fail_input("reduce_2d: need at least 2 columns");

  Pca2d out;
  out.mean = X.colwise().mean();
  Eigen::MatrixXd centered = X.rowwise() - out.mean;

  double max_dev = centered.cwiseAbs().maxCoeff();
  double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if (max_dev <= 1e-12 * scale) {
    out.rank0 = true;
    out.scores = Eigen::MatrixXd::Zero(X.rows(), 2);
    out.components = Eigen::MatrixXd::Zero(X.cols(), 2);
    out.eigenvalues.setZero();
    return out;
  }

  Eigen::MatrixXd scatter = centered.transpose() * centered;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scatter);
  if (solver.info() != Eigen::Success)
    fail_internal("reduce_2d: eigendecomposition failed");

  // Eigen returns eigenvalues ascending; take the last two.
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  out.components.resize(X.cols(), 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd v = vecs.col(vecs.cols() - 1 - c);
    for (int i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.components.col(c) = v;
    out.eigenvalues(c) = vals(vals.size() - 1 - c);
  }
  out.scores = centered * out.components;
  return out;
}

struct KmeansResult {
  Eigen::MatrixXd centroids;    // k' x d, k' <= k after empty-cluster drop
  std::vector<int> assignment;  // per row, index into centroids
  int dropped_empty = 0;
};

namespace detail {

struct KmeansRun {
  Eigen::MatrixXd centroids;
  std::vector<int> assign;
  double sse = std::numeric_limits<double>::infinity();
};

inline KmeansRun kmeans_run(const Eigen::MatrixXd& points, int k,
                            std::uint64_t seed, int max_iter, double tol) {
  const auto n = points.rows();
  // Greedy k-means++ seeding, as in the 1-D case.
  Rng rng(seed);
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  Eigen::MatrixXd centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(
      rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2(n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i) = (points.row(i) - centroids.row(0)).squaredNorm();
    total += d2(i);
  }
  for (int c = 1; c < k; ++c) {
    if (total <= 0.0) {
      // All remaining points coincide with chosen centers; duplicate the
      // first point and let the empty-cluster drop handle it.
      centroids.row(c) = points.row(0);
      continue;
    }
    double best_potential = std::numeric_limits<double>::infinity();
    Eigen::Index best_pick = 0;
    for (int t = 0; t < trials; ++t) {
      double u = rng.real() * total;
      double acc = 0.0;
      Eigen::Index pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (u < acc) {
          pick = i;
          break;
        }
      }
      double potential = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        potential += std::min(d2(i),
                              (points.row(i) - points.row(pick)).squaredNorm());
      if (potential < best_potential) {
        best_potential = potential;
        best_pick = pick;
      }
    }
    centroids.row(c) = points.row(best_pick);
    total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2(i) = std::min(d2(i),
                       (points.row(i) - centroids.row(c)).squaredNorm());
      total += d2(i);
    }
  }

  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  auto nearest = [&](Eigen::Index i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best = c;
        best_d = d;
      }
    }
    return best;
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i)
      assign[static_cast<std::size_t>(i)] = nearest(i);
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;
      Eigen::RowVectorXd next =
          sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      shift = std::max(shift, (next - centroids.row(c)).norm());
      centroids.row(c) = next;
    }
    if (shift < tol) break;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    assign[static_cast<std::size_t>(i)] = nearest(i);

  KmeansRun run;
  run.centroids = std::move(centroids);
  run.assign = std::move(assign);
  run.sse = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    run.sse += (points.row(i) -
                run.centroids.row(run.assign[static_cast<std::size_t>(i)]))
                   .squaredNorm();
  return run;
}

}  // namespace detail

// Seeded greedy k-means++ plus Lloyd iterations over matrix rows, best of
// n_init restarts by SSE (sub-seeds derived from the given seed). Distance
// ties go to the lower cluster index. Clusters left empty at convergence are
// dropped and the remaining ids compacted; callers surface that as a warning.
inline KmeansResult kmeans(const Eigen::MatrixXd& points, int k,
                           std::uint64_t seed, int max_iter = 100,
                           double tol = 1e-6, int n_init = 30) {
  const auto n = points.rows();
  if (n == 0) fail_input("kmeans: no points");
  if (k < 1) fail_input("kmeans: k must be >= 1");
  if (k > n)
    fail_input("kmeans: k (" + std::to_string(k) + ") exceeds point count (" +
               std::to_string(n) + ")");

  detail::KmeansRun best;
  for (int r = 0; r < n_init; ++r) {
    auto run = detail::kmeans_run(
        points, k, derive_seed(seed, "init-" + std::to_string(r)), max_iter,
        tol);
    if (run.sse < best.sse) best = std::move(run);
  }

  // Drop empty clusters, compacting ids in centroid order.
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (int a : best.assign) ++counts[static_cast<std::size_t>(a)];
  std::vector<int> remap(static_cast<std::size_t>(k), -1);
  int kept = 0;
  for (int c = 0; c < k; ++c)
    if (counts[static_cast<std::size_t>(c)] > 0)
      remap[static_cast<std::size_t>(c)] = kept++;

  KmeansResult result;
  result.dropped_empty = k - kept;
  result.centroids.resize(kept, points.cols());
  for (int c = 0; c < k; ++c)
    if (remap[static_cast<std::size_t>(c)] >= 0)
      result.centroids.row(remap[static_cast<std::size_t>(c)]) =
          best.centroids.row(c);
  result.assignment.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    result.assignment[static_cast<std::size_t>(i)] =
        remap[static_cast<std::size_t>(best.assign[static_cast<std::size_t>(i)])];
  return result;
}

}  // namespace promor
