#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>

namespace gp {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
// points are stored column-wise, one column per node
using PointSet = Eigen::MatrixXd;
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using SparseMatrix = Eigen::SparseMatrix<double>;

}  // namespace gp
