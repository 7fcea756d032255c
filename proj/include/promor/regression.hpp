#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "promor/error.hpp"
#include "promor/rng.hpp"
#include "promor/stats.hpp"

namespace promor {

// Ridge fit with internally standardized features (zero mean, unit population
// variance) and an unpenalized intercept. Coefficients are reported in the
// original feature units; columns that are constant after centering are
// dropped and get coefficient zero.
struct RidgeFit {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  std::vector<int> dropped_columns;
};

inline RidgeFit fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          double lambda) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n < 2) fail_input("fit_ridge: need at least 2 rows");
  if (y.size() != n) fail_input("fit_ridge: X and y row counts differ");
  if (lambda < 0.0) fail_input("fit_ridge: lambda must be non-negative");

  Eigen::RowVectorXd mean = X.colwise().mean();
  Eigen::RowVectorXd sd(p);
  std::vector<int> kept;
  RidgeFit fit;
  for (Eigen::Index j = 0; j < p; ++j) {
    double var = (X.col(j).array() - mean(j)).square().sum() /
                 static_cast<double>(n);
    sd(j) = std::sqrt(var);
    if (sd(j) > 0.0) kept.push_back(static_cast<int>(j));
    else fit.dropped_columns.push_back(static_cast<int>(j));
  }

  double y_mean = y.mean();
  fit.coefficients = Eigen::VectorXd::Zero(p);
  if (kept.empty()) {
    fit.intercept = y_mean;
    return fit;
  }

  Eigen::MatrixXd Z(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c)
    Z.col(static_cast<Eigen::Index>(c)) =
        (X.col(kept[c]).array() - mean(kept[c])) / sd(kept[c]);
  Eigen::VectorXd yc = y.array() - y_mean;

  Eigen::MatrixXd gram = Z.transpose() * Z;
  gram.diagonal().array() += lambda;
  Eigen::VectorXd beta_std = gram.ldlt().solve(Z.transpose() * yc);

  for (std::size_t c = 0; c < kept.size(); ++c)
    fit.coefficients(kept[c]) =
        beta_std(static_cast<Eigen::Index>(c)) / sd(kept[c]);
  fit.intercept = y_mean - fit.coefficients.dot(mean.transpose());
  return fit;
}

inline Eigen::VectorXd predict(const RidgeFit& fit, const Eigen::MatrixXd& X) {
  return (X * fit.coefficients).array() + fit.intercept;
}

struct CvMetrics {
  double r2 = 0.0;    // mean over folds with defined R^2
  double mae = 0.0;   // mean over all folds
  double rmse = 0.0;  // mean over all folds
  std::vector<double> fold_r2;
  std::vector<double> fold_mae;
  std::vector<double> fold_rmse;
  int r2_folds = 0;          // folds where SS_tot > 0
  bool r2_defined = false;
};

// Seeded k-fold cross validation of the ridge pipeline. Indices are shuffled
// once, split into contiguous chunks (sizes differ by at most one), and each
// chunk serves as the held-out set exactly once. Per-fold R^2 uses the
// held-out mean; folds with zero held-out target variance are skipped for R^2
// and flagged through r2_folds.
inline CvMetrics cross_validate(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y, double lambda,
                                int folds, std::uint64_t seed) {
  const Eigen::Index n = X.rows();
  if (folds < 2) fail_input("cross_validate: need at least 2 folds");
  if (n < folds)
    fail_input("cross_validate: fewer rows (" + std::to_string(n) +
               ") than folds (" + std::to_string(folds) + ")");

  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);

  CvMetrics metrics;
  double r2_sum = 0.0;
  for (int f = 0; f < folds; ++f) {
    std::size_t begin = static_cast<std::size_t>(f) * idx.size() /
                        static_cast<std::size_t>(folds);
    std::size_t end = (static_cast<std::size_t>(f) + 1) * idx.size() /
                      static_cast<std::size_t>(folds);
    std::vector<std::size_t> test(idx.begin() + begin, idx.begin() + end);
    std::vector<std::size_t> train;
    train.reserve(idx.size() - test.size());
    train.insert(train.end(), idx.begin(), idx.begin() + begin);
    train.insert(train.end(), idx.begin() + end, idx.end());

    Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train.size()), X.cols());
    Eigen::VectorXd ytr(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      Xtr.row(static_cast<Eigen::Index>(i)) =
          X.row(static_cast<Eigen::Index>(train[i]));
      ytr(static_cast<Eigen::Index>(i)) =
          y(static_cast<Eigen::Index>(train[i]));
    }
    auto fit = fit_ridge(Xtr, ytr, lambda);

    double se_sum = 0.0, abs_sum = 0.0, test_mean = 0.0;
    for (std::size_t i : test) test_mean += y(static_cast<Eigen::Index>(i));
    test_mean /= static_cast<double>(test.size());
    double ss_tot = 0.0;
    for (std::size_t i : test) {
      Eigen::Index r = static_cast<Eigen::Index>(i);
      double pred = X.row(r).dot(fit.coefficients) + fit.intercept;
      double err = pred - y(r);
      se_sum += err * err;
      abs_sum += std::abs(err);
      double dev = y(r) - test_mean;
      ss_tot += dev * dev;
    }
    double mae = abs_sum / static_cast<double>(test.size());
    double rmse = std::sqrt(se_sum / static_cast<double>(test.size()));
    metrics.fold_mae.push_back(mae);
    metrics.fold_rmse.push_back(rmse);
    metrics.mae += mae;
    metrics.rmse += rmse;
    if (ss_tot > 0.0) {
      double r2 = 1.0 - se_sum / ss_tot;
      metrics.fold_r2.push_back(r2);
      r2_sum += r2;
      ++metrics.r2_folds;
    } else {
      metrics.fold_r2.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  metrics.mae /= static_cast<double>(folds);
  metrics.rmse /= static_cast<double>(folds);
  if (metrics.r2_folds > 0) {
    metrics.r2 = r2_sum / static_cast<double>(metrics.r2_folds);
    metrics.r2_defined = true;
  }
  return metrics;
}

// Unpenalized OLS refit used for coefficient inference: sigma^2 =
// SS_res / (n - p - 1), standard errors from the normal-equation covariance,
// two-sided t-tests, and symmetric confidence intervals. The design gains an
// intercept column internally; reported vectors cover the p feature columns.
struct OlsInference {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_values;
  Eigen::VectorXd p_values;
  std::vector<std::pair<double, double>> conf_intervals;
  double intercept_se = 0.0;
  double sigma2 = 0.0;
  double dof = 0.0;
  bool singular = false;
};

inline OlsInference ols_inference(const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& y,
                                  double ci_level = 0.95) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n <= p + 1)
    fail_input("ols_inference: need n > p + 1 (got n=" + std::to_string(n) +
               ", p=" + std::to_string(p) + ")");

  Eigen::MatrixXd design(n, p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = X;

  Eigen::MatrixXd xtx = design.transpose() * design;
  Eigen::VectorXd xty = design.transpose() * y;

  OlsInference inf;
  Eigen::MatrixXd xtx_inv;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
  if (lu.isInvertible()) {
    xtx_inv = lu.inverse();
  } else {
    inf.singular = true;
    xtx_inv = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(xtx)
                  .pseudoInverse();
  }
  Eigen::VectorXd beta = xtx_inv * xty;
  Eigen::VectorXd resid = y - design * beta;
  inf.dof = static_cast<double>(n - p - 1);
  inf.sigma2 = resid.squaredNorm() / inf.dof;

  inf.intercept = beta(0);
  inf.intercept_se = std::sqrt(std::max(0.0, inf.sigma2 * xtx_inv(0, 0)));
  inf.coefficients = beta.tail(p);
  inf.std_errors.resize(p);
  inf.t_values.resize(p);
  inf.p_values.resize(p);
  double t_crit = student_t_quantile(0.5 + ci_level / 2.0, inf.dof);
  for (Eigen::Index j = 0; j < p; ++j) {
    double se = std::sqrt(std::max(0.0, inf.sigma2 * xtx_inv(j + 1, j + 1)));
    inf.std_errors(j) = se;
    if (se > 0.0) {
      inf.t_values(j) = inf.coefficients(j) / se;
      inf.p_values(j) = student_t_p_two_sided(inf.t_values(j), inf.dof);
    } else {
      // Exact fit or degenerate column: a zero standard error means the
      // t statistic diverges; report p = 0 for nonzero coefficients.
      inf.t_values(j) = inf.coefficients(j) == 0.0
                            ? 0.0
                            : std::numeric_limits<double>::infinity();
      inf.p_values(j) = inf.coefficients(j) == 0.0 ? 1.0 : 0.0;
    }
    inf.conf_intervals.emplace_back(inf.coefficients(j) - t_crit * se,
                                    inf.coefficients(j) + t_crit * se);
  }
  return inf;
}

}  // namespace promor
