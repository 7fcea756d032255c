#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "promor/error.hpp"
#include "promor/rng.hpp"

namespace promor {

enum class Band { Low, Moderate, High };

inline const char* band_name(Band b) {
  switch (b) {
    case Band::Low: return "Low";
    case Band::Moderate: return "Moderate";
    default: return "High";
  }
}

inline Band band_from_string(std::string_view s) {
  if (s == "Low") return Band::Low;
  if (s == "Moderate") return Band::Moderate;
  if (s == "High") return Band::High;
  fail_input("unknown band name: " + std::string(s));
}

struct Kmeans1dResult {
  std::vector<double> centroids;   // sorted ascending
  std::vector<int> assignment;     // per input value, index into centroids
  int iterations = 0;
};

// Seeded greedy k-means++ init followed by Lloyd iterations, repeated for
// n_init restarts (sub-seeds derived from the given seed, as sklearn's
// KMeans does); the restart with the lowest SSE wins, earliest on ties.
// Convergence per restart: largest centroid shift below tol or max_iter.
// Values are canonicalized by sorting internally, so permuting the input
// permutes only the assignment vector, never the clustering itself. Exact
// distance ties go to the lower centroid.
inline Kmeans1dResult kmeans_1d(const std::vector<double>& values, int k,
                                std::uint64_t seed, int max_iter = 100,
                                double tol = 1e-6, int n_init = 30) {
  if (values.empty()) fail_input("kmeans_1d: no values");
  if (k < 1) fail_input("kmeans_1d: k must be >= 1");
  const std::size_t n = values.size();
  const std::size_t uk = static_cast<std::size_t>(k);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = values[order[i]];

  std::size_t distinct = 1;
  for (std::size_t i = 1; i < n; ++i)
    if (sorted[i] != sorted[i - 1]) ++distinct;
  if (distinct < uk)
    fail_input("kmeans_1d: fewer distinct values (" + std::to_string(distinct) +
               ") than clusters (" + std::to_string(k) + ")");

  struct Run {
    std::vector<double> centroids;
    std::vector<int> assign;
    double sse = std::numeric_limits<double>::infinity();
    int iterations = 0;
  };

  auto nearest = [&](const std::vector<double>& centroids, double v) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      double d = std::abs(v - centroids[static_cast<std::size_t>(c)]);
      bool better =
          d < best_d || (d == best_d && centroids[static_cast<std::size_t>(c)] <
                                            centroids[static_cast<std::size_t>(
                                                best)]);
      if (better) {
        best = c;
        best_d = d;
      }
    }
    return best;
  };

  auto run_once = [&](std::uint64_t sub_seed) {
    Run run;
    Rng rng(sub_seed);
    // Greedy k-means++: each new center is the best of several D^2-sampled
    // candidates, judged by the resulting potential.
    const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
    auto& centroids = run.centroids;
    centroids.reserve(uk);
    centroids.push_back(sorted[rng.below(n)]);
    std::vector<double> d2(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = sorted[i] - centroids[0];
      d2[i] = d * d;
      total += d2[i];
    }
    while (centroids.size() < uk) {
      double best_potential = std::numeric_limits<double>::infinity();
      std::size_t best_pick = 0;
      for (int t = 0; t < trials; ++t) {
        double u = rng.real() * total;
        double acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          acc += d2[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
        double potential = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double d = sorted[i] - sorted[pick];
          potential += std::min(d2[i], d * d);
        }
        if (potential < best_potential) {
          best_potential = potential;
          best_pick = pick;
        }
      }
      centroids.push_back(sorted[best_pick]);
      total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = sorted[i] - sorted[best_pick];
        d2[i] = std::min(d2[i], d * d);
        total += d2[i];
      }
    }

    run.assign.assign(n, 0);
    int iter = 0;
    for (; iter < max_iter; ++iter) {
      for (std::size_t i = 0; i < n; ++i)
        run.assign[i] = nearest(centroids, sorted[i]);
      std::vector<double> sum(uk, 0.0);
      std::vector<std::size_t> count(uk, 0);
      for (std::size_t i = 0; i < n; ++i) {
        sum[static_cast<std::size_t>(run.assign[i])] += sorted[i];
        ++count[static_cast<std::size_t>(run.assign[i])];
      }
      double shift = 0.0;
      for (std::size_t c = 0; c < uk; ++c) {
        if (count[c] == 0) continue;  // keep old centroid
        double next = sum[c] / static_cast<double>(count[c]);
        shift = std::max(shift, std::abs(next - centroids[c]));
        centroids[c] = next;
      }
      if (shift < tol) {
        ++iter;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      run.assign[i] = nearest(centroids, sorted[i]);
    run.iterations = iter;
    run.sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = sorted[i] - centroids[static_cast<std::size_t>(run.assign[i])];
      run.sse += d * d;
    }
    return run;
  };

  Run best;
  for (int r = 0; r < n_init; ++r) {
    auto run = run_once(derive_seed(seed, "init-" + std::to_string(r)));
    if (run.sse < best.sse) best = std::move(run);
  }

  // Sort centroids ascending and remap cluster ids accordingly.
  std::vector<int> rank(uk);
  std::iota(rank.begin(), rank.end(), 0);
  std::sort(rank.begin(), rank.end(), [&](int a, int b) {
    return best.centroids[static_cast<std::size_t>(a)] <
           best.centroids[static_cast<std::size_t>(b)];
  });
  std::vector<int> new_id(uk);
  std::vector<double> sorted_centroids(uk);
  for (int r = 0; r < k; ++r) {
    new_id[static_cast<std::size_t>(rank[static_cast<std::size_t>(r)])] = r;
    sorted_centroids[static_cast<std::size_t>(r)] =
        best.centroids[static_cast<std::size_t>(rank[static_cast<std::size_t>(r)])];
  }

  Kmeans1dResult result;
  result.centroids = std::move(sorted_centroids);
  result.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.assignment[order[i]] = new_id[static_cast<std::size_t>(best.assign[i])];
  result.iterations = best.iterations;
  return result;
}

struct BandAssignment {
  std::string id;
  std::string metric;
  Band band = Band::Moderate;
  double centroid = 0.0;
};

struct BandingResult {
  std::vector<BandAssignment> assignments;        // in input order
  std::vector<double> centroids;                  // ascending
  std::map<std::string, std::size_t> histogram;   // band name -> count
};

// Band scores into Low/Moderate/High by ascending centroid. Degenerate
// inputs: two distinct values -> Low/High only; one distinct value -> all
// Moderate. Flagged or absent scores must be excluded by the caller.
inline BandingResult band_scores(
    const std::vector<std::pair<std::string, double>>& scores,
    const std::string& metric, std::uint64_t seed) {
  if (scores.empty()) fail_input("band_scores: no scores to band");
  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& [id, v] : scores) values.push_back(v);

  std::vector<double> distinct(values);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());

  BandingResult result;
  result.histogram = {{"Low", 0}, {"Moderate", 0}, {"High", 0}};
  auto push = [&](std::size_t i, Band b, double centroid) {
    result.assignments.push_back({scores[i].first, metric, b, centroid});
    ++result.histogram[band_name(b)];
  };

  if (distinct.size() == 1) {
    result.centroids = {distinct[0]};
    for (std::size_t i = 0; i < scores.size(); ++i)
      push(i, Band::Moderate, distinct[0]);
    return result;
  }
  if (distinct.size() == 2) {
    auto km = kmeans_1d(values, 2, seed);
    result.centroids = km.centroids;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      Band b = km.assignment[i] == 0 ? Band::Low : Band::High;
      push(i, b, km.centroids[static_cast<std::size_t>(km.assignment[i])]);
    }
    return result;
  }

  auto km = kmeans_1d(values, 3, seed);
  result.centroids = km.centroids;
  static constexpr Band kOrder[3] = {Band::Low, Band::Moderate, Band::High};
  for (std::size_t i = 0; i < scores.size(); ++i)
    push(i, kOrder[km.assignment[i]],
         km.centroids[static_cast<std::size_t>(km.assignment[i])]);
  return result;
}

}  // namespace promor
