#pragma once

#include <Eigen/Dense>

namespace lambq {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

// Max-norm of a dense expression; 0 for empty.
template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::DenseBase<Derived>& m) {
  if (m.size() == 0) return typename Derived::Scalar(0);
  return m.derived().array().abs().maxCoeff();
}

}  // namespace lambq
