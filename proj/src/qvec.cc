#include "semtensor/qvec.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "semtensor/error.h"

namespace semtensor {

namespace {

// Centered copy without (numerically) constant columns.
Eigen::MatrixXd CenterAndPrune(const Eigen::MatrixXd& m) {
  const Eigen::RowVectorXd mean = m.colwise().mean();
  Eigen::MatrixXd centered = m.rowwise() - mean;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double scale = std::max(1.0, m.col(c).cwiseAbs().maxCoeff());
    if (centered.col(c).cwiseAbs().maxCoeff() > 1e-12 * scale) keep.push_back(c);
  }
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = centered.col(keep[i]);
  return out;
}

Eigen::MatrixXd InverseSqrt(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd values = eig.eigenvalues().cwiseMax(1e-300);
  return eig.eigenvectors() * values.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

double QvecCca(const Eigen::MatrixXd& x, const Eigen::MatrixXd& s, double ridge) {
  if (x.rows() != s.rows()) {
    throw Error(ErrorCategory::kEval, "CCA inputs have different row counts: " +
                                          std::to_string(x.rows()) + " vs " +
                                          std::to_string(s.rows()));
  }
  if (x.rows() < 2) throw Error(ErrorCategory::kEval, "CCA needs at least 2 aligned rows");
  const Eigen::MatrixXd xc = CenterAndPrune(x);
  const Eigen::MatrixXd sc = CenterAndPrune(s);
  if (xc.cols() == 0 || sc.cols() == 0) {
    throw Error(ErrorCategory::kEval, "CCA input has only constant columns");
  }
  const double n1 = static_cast<double>(x.rows() - 1);
  Eigen::MatrixXd cxx = xc.transpose() * xc / n1;
  Eigen::MatrixXd css = sc.transpose() * sc / n1;
  const Eigen::MatrixXd cxs = xc.transpose() * sc / n1;
  cxx.diagonal().array() += ridge;
  css.diagonal().array() += ridge;
  const Eigen::MatrixXd whitened = InverseSqrt(cxx) * cxs * InverseSqrt(css);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
  const double rho = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return std::clamp(rho, 0.0, 1.0);
}

}  // namespace semtensor
