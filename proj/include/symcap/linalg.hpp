#pragma once

#include <Eigen/Dense>

namespace symcap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace symcap
