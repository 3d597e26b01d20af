#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cxnprobe/error.hpp"

namespace cxnprobe {

struct PcaResult {
  Eigen::MatrixXd coordinates;  // N x n_components
  Eigen::MatrixXd components;   // dim x n_components, unit columns
  std::vector<double> explained_variance;        // sample variance along each component
  std::vector<double> explained_variance_ratio;  // share of total variance
  bool zero_variance_warning = false;
};

// Projects mean-centered rows onto the leading principal axes. Each axis is
// oriented so its largest-magnitude loading is positive.
inline PcaResult pca_project(const Eigen::MatrixXd& x, std::size_t n_components = 2) {
  const auto n = x.rows();
  if (n < 2) throw Error(Errc::argument, "PCA needs at least 2 rows");
  if (n_components == 0) throw Error(Errc::argument, "n_components must be positive");
  const auto k = static_cast<Eigen::Index>(n_components);

  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();
  const double total = s.squaredNorm();

  PcaResult out;
  out.components = Eigen::MatrixXd::Zero(x.cols(), k);
  const Eigen::Index available = std::min<Eigen::Index>(k, s.size());
  for (Eigen::Index c = 0; c < available; ++c) {
    Eigen::VectorXd axis = v.col(c);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0) axis = -axis;
    out.components.col(c) = axis;
  }
  out.coordinates = centered * out.components;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double sv2 = c < s.size() ? s(c) * s(c) : 0.0;
    out.explained_variance.push_back(sv2 / static_cast<double>(n - 1));
    out.explained_variance_ratio.push_back(total > 0.0 ? sv2 / total : 0.0);
    if (!(sv2 > 1e-12 * total) || total == 0.0) out.zero_variance_warning = true;
  }
  return out;
}

}  // namespace cxnprobe
