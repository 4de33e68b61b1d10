#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>

namespace krod {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Skew-symmetric matrix [a]x with [a]x b = a x b.
[[nodiscard]] inline Mat3 skew(const Vec3& a) {
    Mat3 s;
    s << 0.0, -a.z(), a.y(),
         a.z(), 0.0, -a.x(),
         -a.y(), a.x(), 0.0;
    return s;
}

/// Control point i of a stacked coefficient vector (x0, y0, z0, x1, ...).
[[nodiscard]] inline Vec3 control_point(const Vector& q, int i) {
    return q.segment<3>(3 * i);
}

}  // namespace krod
