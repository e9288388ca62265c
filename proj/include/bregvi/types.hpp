#pragma once

#include <Eigen/Dense>

namespace bregvi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace bregvi
