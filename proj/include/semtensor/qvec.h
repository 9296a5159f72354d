#pragma once

#include <Eigen/Dense>

namespace semtensor {

inline constexpr double kCcaRidge = 1e-8;

// First canonical correlation between the columns of x (N x d) and s (N x p),
// rows aligned by word. Columns are centered and zero-variance columns are
// dropped; `ridge` is added to the diagonals of both within-set covariances.
// Result is clamped to [0, 1].
double QvecCca(const Eigen::MatrixXd& x, const Eigen::MatrixXd& s, double ridge = kCcaRidge);

}  // namespace semtensor
