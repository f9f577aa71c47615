#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symcap/bodies.hpp"
#include "symcap/symplect.hpp"
#include "symcap/widths.hpp"

namespace symcap {

enum class BoundKind { upper_cylinder, lower_ball, exact_ellipsoid, upper_lowner };

std::string to_string(BoundKind kind);
bool is_upper(BoundKind kind);

/// How a circumradius was certified: from an exact planar image (polygon
/// vertices or ellipse Gram matrix) or from m supporting lines.
enum class RadiusMode { polygon, ellipse, grid };

std::string to_string(RadiusMode mode);

struct CertifiedRadius {
  double radius = 0.0;
  double radius_sq = 0.0;  // the bound uses this directly
  RadiusMode mode = RadiusMode::grid;
  int grid_m = 0;
};

struct CylinderCertificate {
  Vec v;
  Vec jv;
  CertifiedRadius radius;
  /// Symplectic map applied to the body before projecting (empty: identity).
  Mat position;
};

struct BallCertificate {
  double inradius = 0.0;
  Vec witness;  // a direction attaining the inradius
  bool certified = true;
};

struct SpectrumCertificate {
  std::vector<double> radii;
  Mat s;       // normalizing symplectic map
  Mat form;    // ellipsoid {(x-c)^T form (x-c) <= 1}
  Vec center;
};

/// A capacity value in area units together with what certifies it.
struct CapacityBound {
  BoundKind kind = BoundKind::upper_cylinder;
  double value = 0.0;
  std::string body_id;
  std::optional<CylinderCertificate> cylinder;
  std::optional<BallCertificate> ball;
  std::optional<SpectrumCertificate> spectrum;
  std::string provenance;
};

/// Radius of a disc about the origin containing P_E K. Exact for bodies with
/// a planar shadow; otherwise max_k h_K(cos t_k v + sin t_k Jv) over m equally
/// spaced angles, inflated by 1/cos(pi/m) (the supporting lines cut out a
/// polygon inside the circumscribed regular m-gon).
CertifiedRadius projection_circumradius(const ConvexBody& body, const HolomorphicPlane& plane,
                                        int grid_m = default_tolerances().default_grid,
                                        const Tolerances& tol = default_tolerances());

/// Upper bound pi R^2 on c^Z_lin(K) from the cylinder over the disc of radius R in E.
CapacityBound cylinder_bound(const ConvexBody& body, const HolomorphicPlane& plane,
                             int grid_m = default_tolerances().default_grid,
                             const Tolerances& tol = default_tolerances());

/// Recomputes a bound's value from its certificate alone.
double recertify(const ConvexBody& body, const CapacityBound& bound, const Tolerances& tol = default_tolerances());

/// Seed-independent candidates: coordinate planes E_k = span{e_{2k-1}, e_{2k}},
/// the diagonal direction (1,...,1)/sqrt(2n), and for diagonal images the
/// harmonic direction with entries proportional to the inverse pair scales.
std::vector<std::pair<std::string, HolomorphicPlane>> deterministic_planes(const ConvexBody& body);

enum class PlaneSampler { sphere, cube_vertices };

struct PlaneSearchResult {
  CapacityBound best;
  std::string best_source;
  long trials = 0;
  long successes = 0;
  double success_rate = 0.0;
  double success_std_error = 0.0;  // binomial
  WidthEstimate width;             // the reference width W in the success test
};

/// Deterministic candidates, then `trials` random planes span{v, Jv}. A trial
/// succeeds when both h_K(v) and h_K(Jv) are at most 3W, W being M*(K) for the
/// sphere sampler and s*(K) for the cube-vertex sampler (computed from the
/// same seed family unless supplied).
PlaneSearchResult random_plane_search(const ConvexBody& body, long trials, PlaneSampler sampler, std::uint64_t seed,
                                      int grid_m = default_tolerances().default_grid,
                                      std::optional<WidthEstimate> width = std::nullopt);

/// Exact capacity pi r1^2 of {x : <Mx, x> <= 1}.
CapacityBound ellipsoid_capacity(const Mat& form, const Tolerances& tol = default_tolerances());

/// pi r^2 for an inscribed Euclidean ball. Exact inradius for the standard
/// families (and their ellipsoidal images); otherwise a sampled estimate
/// flagged as not certified.
CapacityBound inradius_lower_bound(const ConvexBody& body);

struct LownerEllipsoid {
  Mat form;   // {(x-c)^T form (x-c) <= 1}
  Vec center;
  double gap = 0.0;  // max_j M_j / (d+1) - 1 at termination
  long iterations = 0;
};

/// (1+eps)-approximate minimum-volume enclosing ellipsoid of the columns of
/// `points` (Khachiyan's barycentric ascent), rescaled to contain every point.
LownerEllipsoid minimum_volume_ellipsoid(const Mat& points, double eps,
                                         const Tolerances& tol = default_tolerances());

/// Capacity of the Lowner ellipsoid of a polytope's vertex set.
CapacityBound lowner_baseline(const ConvexBody& body, double eps, const Tolerances& tol = default_tolerances());

/// Smallest gamma certified by `bound`: (c/pi) / (Vol(K)/kappa_{2n})^{1/n}.
double gamma_ratio(const ConvexBody& body, const CapacityBound& bound, const VolumeResult& vol);

}  // namespace symcap
