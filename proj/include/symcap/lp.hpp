#pragma once

#include "symcap/linalg.hpp"

namespace symcap {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  Vec x;
};

/// Dense two-phase simplex for   minimize c^T x  subject to  A x = b, x >= 0.
/// Bland's rule, so it terminates on degenerate problems. Intended for the
/// small programs behind polytope and zonotope gauges.
LpResult solve_standard_lp(const Mat& A, const Vec& b, const Vec& c, int max_pivots = 50'000);

}  // namespace symcap
