#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "symcap/linalg.hpp"
#include "symcap/tolerances.hpp"

namespace symcap {

enum class BodyKind {
  ball,
  cube,
  cross_polytope,
  lp_ball,
  ellipsoid,
  zonotope,
  vertex_polytope,
  schatten_ball,
  linear_image,
  difference_body,
};

std::string to_string(BodyKind kind);

/// Orthogonal (or general linear) image of a body in a 2-plane, in a form
/// from which the circumradius about the origin is exact: either a finite
/// point set whose convex hull is the image, or a centered ellipse given by
/// the Gram matrix G with support a -> sqrt(a^T G a).
struct PlanarShadow {
  enum class Form { polygon, ellipse };
  Form form = Form::polygon;
  std::vector<Eigen::Vector2d> points;
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
};

enum class Exactness { exact, monte_carlo };

struct VolumeResult {
  double value = 0.0;
  Exactness exactness = Exactness::exact;
  double std_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string method;              // "closed_form", "subset_sum", "rejection", "radial", "zonotope_subsets_mc"
  bool fallback_to_monte_carlo = false;  // an exact formula existed but was over the configured cap
};

/// A convex body in R^{dim} (dim even) exposed through its support function
/// h_K(u) = sup_{y in K} <u, y> and Minkowski gauge ||x||_K.
///
/// Immutable value type; copies share the parameter block. Linear images are
/// lazy: support of TK is evaluated as h_K(T^T u), so compositions stay exact.
class ConvexBody {
 public:
  struct Ball { double radius; };
  struct Box { Vec half_widths; };
  struct Cross {};
  struct Lp { double p; };  // p = +inf allowed
  struct Ellipsoid { Mat form; Mat inverse; Eigen::LLT<Mat> chol; };  // {x : x^T form x <= 1}
  struct Zonotope { Mat segments; };  // columns; sum of [-s_i, s_i]
  struct Polytope { Mat vertices; };  // columns
  struct Schatten { int m; double p; };  // m x m matrices, row-major flattening
  struct Image { Mat map; Eigen::PartialPivLU<Mat> lu; double abs_det; std::shared_ptr<const ConvexBody> inner; };
  struct Difference { std::shared_ptr<const ConvexBody> inner; std::shared_ptr<const ConvexBody> equivalent; };

  using Params = std::variant<Ball, Box, Cross, Lp, Ellipsoid, Zonotope, Polytope, Schatten, Image, Difference>;

  static ConvexBody ball(int dim, double radius = 1.0);
  static ConvexBody cube(int dim, double half_width = 1.0);
  static ConvexBody box(Vec half_widths);
  static ConvexBody cross_polytope(int dim);
  static ConvexBody lp_ball(int dim, double p);
  static ConvexBody ellipsoid(Mat form);
  static ConvexBody zonotope(Mat segments);
  static ConvexBody vertex_polytope(Mat vertices);
  static ConvexBody schatten_ball(int m, double p);
  static ConvexBody linear_image(Mat map, const ConvexBody& inner);
  static ConvexBody difference_body(const ConvexBody& inner);

  /// Convenience: linear_image(lambda * I, *this).
  ConvexBody scaled(double lambda) const;

  int dim() const;
  bool symmetric() const;
  BodyKind kind() const;
  const Params& params() const;
  std::string label() const;

  /// h_K(u). Throws InputError on dimension mismatch or non-finite input.
  double support(const Vec& u) const;
  /// Column-wise support for a dim x N block of directions.
  Vec support_columns(const Mat& directions) const;

  /// ||x||_K = inf{r > 0 : x in rK}; +inf when x is outside the cone of K.
  double gauge(const Vec& x) const;
  /// x in closure(K). Does not require 0 in the interior.
  bool contains(const Vec& x) const;

  /// Exact image of the body under the 2 x dim map `rows`, if the body is
  /// polyhedral or quadratic (through linear images and difference bodies).
  std::optional<PlanarShadow> planar_shadow(const Mat& rows) const;

  /// Vertex set (columns), when one is available at reasonable size.
  std::optional<Mat> vertices(long max_vertices = 1L << 16) const;

  /// Closed-form volume when one exists (zonotopes: subject to the subset cap).
  std::optional<double> exact_volume(const Tolerances& tol = default_tolerances()) const;

 private:
  struct Impl;
  explicit ConvexBody(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Volume: exact when a closed form applies, otherwise seeded Monte Carlo with
/// `budget` samples. Rejection sampling in a support-derived bounding box for
/// dim <= tol.rejection_volume_max_dim, radial estimator above.
VolumeResult volume(const ConvexBody& body, long budget, std::uint64_t seed,
                    const Tolerances& tol = default_tolerances());

/// kappa_d = pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int dim);

/// Uniform random symmetric zonotope with `segments` Gaussian generators.
ConvexBody random_zonotope(int dim, int segments, std::uint64_t seed);

}  // namespace symcap
