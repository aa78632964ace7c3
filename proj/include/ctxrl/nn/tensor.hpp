#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <string>

#include "ctxrl/util/errors.hpp"

namespace ctxrl::nn {

// Every payload in the library is a rank-2, row-major tensor: rows index the
// batch, columns the feature. Vectors are 1 x n.
template <typename Scalar>
using TensorX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic, Eigen::RowMajor>;

using Tensor = TensorX<double>;
using RowVector = RowVectorX<double>;
using Vector = Eigen::VectorXd;

template <typename Derived>
std::string shape_string(const Eigen::DenseBase<Derived>& t) {
  std::ostringstream os;
  os << '[' << t.rows() << ", " << t.cols() << ']';
  return os.str();
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& t) {
  return t.derived().array().isFinite().all();
}

/// Throws FaultError when any entry is NaN or infinite.
template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& t, const std::string& what) {
  if (!all_finite(t)) throw FaultError("non-finite values in " + what);
}

template <typename DerivedA, typename DerivedB>
void require_same_shape(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b,
                        const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(what + ": shape " + shape_string(a) + " vs " + shape_string(b));
  }
}

/// Copies a column vector into a 1 x n tensor.
template <typename Scalar>
TensorX<Scalar> as_row(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
  return v.transpose();
}

}  // namespace ctxrl::nn
