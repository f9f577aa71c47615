#include <algorithm>
#include <cmath>

#include "symcap/capacity.hpp"
#include "symcap/error.hpp"

namespace symcap {

LownerEllipsoid minimum_volume_ellipsoid(const Mat& points, double eps, const Tolerances& tol) {
  if (!(eps > 0.0 && eps < 0.5)) throw InputError("lowner eps must lie in (0, 0.5)");
  const Eigen::Index d = points.rows();
  const Eigen::Index n = points.cols();
  if (n <= d) throw InputError("need more than dim points for an enclosing ellipsoid");

  Mat q(d + 1, n);
  q.topRows(d) = points;
  q.row(d).setOnes();
  Vec u = Vec::Constant(n, 1.0 / static_cast<double>(n));
  const double target = static_cast<double>(d + 1) * (1.0 + eps);

  LownerEllipsoid out;
  for (long it = 0;; ++it) {
    const Mat x = q * u.asDiagonal() * q.transpose();
    Eigen::LLT<Mat> chol(x);
    if (chol.info() != Eigen::Success) throw ConditioningError("lowner: points do not span the space", 0.0);
    const Mat y = chol.matrixL().solve(q);
    const Vec mvals = y.colwise().squaredNorm().transpose();
    Eigen::Index j = 0;
    const double mmax = mvals.maxCoeff(&j);
    out.gap = mmax / static_cast<double>(d + 1) - 1.0;
    out.iterations = it;
    if (mmax <= target) break;
    if (it >= tol.lowner_max_iterations) throw NumericalError("lowner: iteration cap reached", out.gap);
    const double step = (mmax - static_cast<double>(d + 1)) / (static_cast<double>(d + 1) * (mmax - 1.0));
    u *= (1.0 - step);
    u[j] += step;
  }

  out.center = points * u;
  const Mat cov = points * u.asDiagonal() * points.transpose() - out.center * out.center.transpose();
  out.form = cov.inverse() / static_cast<double>(d);
  out.form = 0.5 * (out.form + out.form.transpose()).eval();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec c = points.col(i) - out.center;
    worst = std::max(worst, c.dot(out.form * c));
  }
  if (worst > 1.0) out.form /= worst;
  return out;
}

CapacityBound lowner_baseline(const ConvexBody& body, double eps, const Tolerances& tol) {
  const auto verts = body.vertices();
  if (!verts) throw InputError("lowner_baseline needs a body with an explicit vertex set, got " + body.label());
  const LownerEllipsoid e = minimum_volume_ellipsoid(*verts, eps, tol);
  CapacityBound b = ellipsoid_capacity(e.form, tol);
  b.kind = BoundKind::upper_lowner;
  b.body_id = body.label();
  b.spectrum->center = e.center;
  b.provenance = "monotonicity: K inside its enclosing ellipsoid (Khachiyan, eps=" + std::to_string(eps) +
                 ", gap=" + std::to_string(e.gap) + ")";
  return b;
}

}  // namespace symcap
