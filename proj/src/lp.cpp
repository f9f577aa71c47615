#include "symcap/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace symcap {
namespace {

constexpr double kPivotEps = 1e-11;

class Tableau {
 public:
  Tableau(const Mat& A, const Vec& b) : m_(A.rows()), n_(A.cols()), t_(m_ + 1, n_ + m_ + 1), basis_(m_) {
    t_.setZero();
    for (int i = 0; i < m_; ++i) {
      const double sign = b[i] < 0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * A.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign * b[i];
      basis_[i] = n_ + i;
    }
  }

  int rhs() const { return n_ + m_; }
  int rows() const { return m_; }
  int structural() const { return n_; }

  // Objective row holds reduced costs; t_(m_, rhs) holds -objective.
  void set_objective(const Vec& cost) {
    t_.row(m_).setZero();
    t_.row(m_).head(cost.size()) = cost.transpose();
    for (int i = 0; i < m_; ++i) {
      const double cb = basis_[i] < cost.size() ? cost[basis_[i]] : 0.0;
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = c;
  }

  // Returns false when unbounded. allowed_cols: columns [0, allowed_cols) may enter.
  LpStatus optimize(int allowed_cols, int& pivots_left) {
    const double scale = std::max(1.0, t_.row(m_).head(allowed_cols).cwiseAbs().maxCoeff());
    for (;;) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t_(m_, j) < -kPivotEps * scale) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (t_(i, enter) > kPivotEps) {
          const double ratio = t_(i, rhs()) / t_(i, enter);
          if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      if (pivots_left-- <= 0) return LpStatus::iteration_limit;
      pivot(leave, enter);
    }
  }

  double objective() const { return -t_(m_, rhs()); }
  double at(int i, int j) const { return t_(i, j); }
  int basic(int i) const { return basis_[i]; }

 private:
  int m_;
  int n_;
  Mat t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_standard_lp(const Mat& A, const Vec& b, const Vec& c, int max_pivots) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Tableau tab(A, b);
  int pivots_left = max_pivots;
  LpResult result;

  // Phase 1: minimize the sum of artificials.
  Vec phase1 = Vec::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.set_objective(phase1);
  const LpStatus s1 = tab.optimize(n + m, pivots_left);
  if (s1 == LpStatus::iteration_limit) return result;
  const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (tab.objective() > 1e-9 * bscale) {
    result.status = LpStatus::infeasible;
    return result;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basic(i) < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.at(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2.
  tab.set_objective(c);
  const LpStatus s2 = tab.optimize(n, pivots_left);
  result.status = s2;
  if (s2 != LpStatus::optimal) return result;
  result.x = Vec::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tab.basic(i) < n) result.x[tab.basic(i)] = tab.at(i, tab.rhs());
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace symcap
