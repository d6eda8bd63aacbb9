#include "deocc/evalkit/frechet.hpp"

#include <algorithm>
#include <cmath>

#include "deocc/core/errors.hpp"
#include "deocc/core/log.hpp"

namespace deocc::evalkit {

namespace {

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& mean, double ridge) {
  const Eigen::MatrixXd centred = x.rowwise() - mean;
  Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(x.rows() - 1);
  cov.diagonal().array() += ridge;
  return cov;
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

double frechet_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double ridge) {
  if (a.rows() < 2 || b.rows() < 2) throw ValidationError("frechet_distance needs at least 2 vectors per set");
  if (a.cols() != b.cols() || a.cols() < 1) throw ValidationError("frechet_distance feature widths differ");
  if (a.rows() <= a.cols() || b.rows() <= b.cols()) {
    log::warn("frechet_distance: ", a.rows(), " / ", b.rows(), " samples for ", a.cols(),
              "-d features; covariance is rank deficient");
  }
  const Eigen::RowVectorXd mu_a = a.colwise().mean();
  const Eigen::RowVectorXd mu_b = b.colwise().mean();
  const Eigen::MatrixXd cov_a = covariance(a, mu_a, ridge);
  const Eigen::MatrixXd cov_b = covariance(b, mu_b, ridge);

  const Eigen::MatrixXd root_a = symmetric_sqrt(cov_a);
  Eigen::MatrixXd inner = root_a * cov_b * root_a;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner, Eigen::EigenvaluesOnly);
  const double trace_root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

  const double mean_term = (mu_a - mu_b).squaredNorm();
  const double value = mean_term + cov_a.trace() + cov_b.trace() - 2.0 * trace_root;
  return std::max(0.0, value);
}

}  // namespace deocc::evalkit
