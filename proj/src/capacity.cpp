#include "symcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "symcap/error.hpp"
#include "symcap/parallel.hpp"
#include "symcap/random.hpp"

namespace symcap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr long kInradiusDirections = 4096;
constexpr double kZonotopeFacetLimit = 200000;
constexpr int kMaxFacetEnumerationDim = 22;

double max_eigenvalue(const Eigen::Matrix2d& g) {
  const double half_tr = 0.5 * (g(0, 0) + g(1, 1));
  const double half_diff = 0.5 * (g(0, 0) - g(1, 1));
  return half_tr + std::sqrt(half_diff * half_diff + g(0, 1) * g(0, 1));
}

void check_grid(int grid_m) {
  if (grid_m < 8) throw InputError("grid size must be at least 8, got " + std::to_string(grid_m));
}

bool is_diagonal(const Mat& m) {
  const Mat off = m - Mat(m.diagonal().asDiagonal());
  return max_abs(off) == 0.0;
}

std::optional<double> image_polytope_inradius(const ConvexBody::Image& img, Vec& witness);
std::optional<double> zonotope_inradius(const Mat& seg, Vec& witness);

std::optional<double> exact_inradius(const ConvexBody& body, Vec& witness) {
  const int d = body.dim();
  const Vec diag = Vec::Ones(d) / std::sqrt(static_cast<double>(d));
  const Vec e1 = Vec::Unit(d, 0);
  return std::visit(
      [&](const auto& p) -> std::optional<double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConvexBody::Ball>) {
          witness = e1;
          return p.radius;
        } else if constexpr (std::is_same_v<T, ConvexBody::Box>) {
          Eigen::Index i = 0;
          const double a = p.half_widths.minCoeff(&i);
          witness = Vec::Unit(d, i);
          return a;
        } else if constexpr (std::is_same_v<T, ConvexBody::Cross>) {
          witness = diag;
          return 1.0 / std::sqrt(static_cast<double>(d));
        } else if constexpr (std::is_same_v<T, ConvexBody::Lp>) {
          if (p.p <= 2.0) {
            witness = diag;
            return std::pow(static_cast<double>(d), 0.5 - 1.0 / p.p);
          }
          witness = e1;
          return 1.0;
        } else if constexpr (std::is_same_v<T, ConvexBody::Ellipsoid>) {
          Eigen::SelfAdjointEigenSolver<Mat> es(p.form);
          witness = es.eigenvectors().col(d - 1);
          return 1.0 / std::sqrt(es.eigenvalues()[d - 1]);
        } else if constexpr (std::is_same_v<T, ConvexBody::Schatten>) {
          witness = e1;
          if (p.p <= 2.0) return std::pow(static_cast<double>(p.m), 0.5 - 1.0 / p.p);
          return 1.0;
        } else if constexpr (std::is_same_v<T, ConvexBody::Image>) {
          // T(ellipsoid) is the ellipsoid with form T^{-T} F T^{-1}
          std::optional<Mat> form;
          if (const auto* b = std::get_if<ConvexBody::Ball>(&p.inner->params()))
            form = Mat::Identity(d, d) / (b->radius * b->radius);
          else if (const auto* e = std::get_if<ConvexBody::Ellipsoid>(&p.inner->params()))
            form = e->form;
          if (!form) return image_polytope_inradius(p, witness);
          const Mat tinv = p.lu.inverse();
          const Mat f = tinv.transpose() * *form * tinv;
          Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (f + f.transpose()));
          witness = es.eigenvectors().col(d - 1);
          return 1.0 / std::sqrt(es.eigenvalues()[d - 1]);
        } else if constexpr (std::is_same_v<T, ConvexBody::Zonotope>) {
          return zonotope_inradius(p.segments, witness);
        } else if constexpr (std::is_same_v<T, ConvexBody::Difference>) {
          if (p.equivalent) return std::nullopt;
          auto r = exact_inradius(*p.inner, witness);
          if (!r) return std::nullopt;
          return 2.0 * *r;
        } else {
          return std::nullopt;
        }
      },
      body.params());
}

// min over unit u of ||S^T u||_1 for the zonotope with segment columns S. The
// minimum sits at a facet normal, i.e. a normal of some d-1 segments.
std::optional<double> zonotope_inradius(const Mat& seg, Vec& witness) {
  const int d = static_cast<int>(seg.rows());
  const int m = static_cast<int>(seg.cols());
  if (m < d - 1) return std::nullopt;
  double count = 1.0;
  for (int i = 0; i < d - 1; ++i) count = count * (m - i) / (i + 1);
  if (count > kZonotopeFacetLimit) return std::nullopt;
  std::vector<char> pick(static_cast<std::size_t>(m), 0);
  std::fill(pick.begin(), pick.begin() + (d - 1), 1);
  const double scale = max_abs(seg);
  double best = std::numeric_limits<double>::infinity();
  Mat sub(d, d - 1);
  do {
    for (int i = 0, c = 0; i < m; ++i)
      if (pick[static_cast<std::size_t>(i)]) sub.col(c++) = seg.col(i);
    Eigen::FullPivHouseholderQR<Mat> qr(sub);
    if (qr.rank() < d - 1 || std::abs(qr.matrixQR()(d - 2, d - 2)) <= 1e-12 * scale) continue;
    const Vec u = Mat(qr.matrixQ()).col(d - 1);
    const double h = (seg.transpose() * u).cwiseAbs().sum();
    if (h < best) {
      best = h;
      witness = u;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

// Exact inradius of T K for a few polytopes K, from their facets.
std::optional<double> image_polytope_inradius(const ConvexBody::Image& img, Vec& witness) {
  const Mat tinv = img.lu.inverse();
  const int d = static_cast<int>(tinv.rows());
  const auto& inner = img.inner->params();
  if (const auto* b = std::get_if<ConvexBody::Box>(&inner)) {
    // facets |<e_i, T^{-1} x>| = a_i
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      const double r = b->half_widths[i] / tinv.row(i).norm();
      if (r < best) {
        best = r;
        witness = tinv.row(i).transpose().normalized();
      }
    }
    return best;
  }
  const auto* lp = std::get_if<ConvexBody::Lp>(&inner);
  if (std::holds_alternative<ConvexBody::Cross>(inner) || (lp && lp->p == 1.0)) {
    // facets <s, T^{-1} x> = 1 for sign vectors s
    if (d > kMaxFacetEnumerationDim) return std::nullopt;
    const Mat rows = tinv.transpose();
    double worst = 0.0;
    Vec arg = Vec::Zero(d);
    const long count = 1L << (d - 1);
    for (long c = 0; c < count; ++c) {
      Vec v = rows.col(0);
      for (int i = 1; i < d; ++i) v += ((c >> (i - 1)) & 1L) ? Vec(-rows.col(i)) : Vec(rows.col(i));
      const double nv = v.norm();
      if (nv > worst) {
        worst = nv;
        arg = v;
      }
    }
    witness = arg.normalized();
    return 1.0 / worst;
  }
  return std::nullopt;
}

// A certified lower bound on the inradius that need not be sharp.
std::optional<double> inradius_floor(const ConvexBody& body, Vec& witness) {
  if (const auto* z = std::get_if<ConvexBody::Zonotope>(&body.params())) {
    // ||S^T u||_1 >= ||S^T u||_2 >= sigma_min(S^T)
    Eigen::JacobiSVD<Mat> svd(z->segments.transpose(), Eigen::ComputeFullV);
    const double sigma = svd.singularValues()[body.dim() - 1];
    if (!(sigma > 0.0)) return std::nullopt;
    witness = svd.matrixV().col(body.dim() - 1);
    return sigma;
  }
  if (const auto* img = std::get_if<ConvexBody::Image>(&body.params())) {
    Vec inner_witness;
    auto r = exact_inradius(*img->inner, inner_witness);
    if (!r) r = inradius_floor(*img->inner, inner_witness);
    if (!r) return std::nullopt;
    // T(rB) contains sigma_min(T) r B
    Eigen::JacobiSVD<Mat> svd(img->map, Eigen::ComputeFullU);
    const int d = body.dim();
    witness = svd.matrixU().col(d - 1);
    return svd.singularValues()[d - 1] * *r;
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::upper_cylinder: return "upper_cylinder";
    case BoundKind::lower_ball: return "lower_ball";
    case BoundKind::exact_ellipsoid: return "exact_ellipsoid";
    case BoundKind::upper_lowner: return "upper_lowner";
  }
  return "unknown";
}

bool is_upper(BoundKind kind) { return kind != BoundKind::lower_ball; }

std::string to_string(RadiusMode mode) {
  switch (mode) {
    case RadiusMode::polygon: return "polygon";
    case RadiusMode::ellipse: return "ellipse";
    case RadiusMode::grid: return "grid";
  }
  return "unknown";
}

CertifiedRadius projection_circumradius(const ConvexBody& body, const HolomorphicPlane& plane, int grid_m,
                                        const Tolerances& tol) {
  check_grid(grid_m);
  if (plane.dim() != body.dim()) throw InputError("plane and body dimensions differ");
  CertifiedRadius out;
  out.grid_m = grid_m;
  if (auto shadow = body.planar_shadow(plane.rows())) {
    if (shadow->form == PlanarShadow::Form::polygon) {
      double r2 = 0.0;
      for (const auto& p : shadow->points) r2 = std::max(r2, p.squaredNorm());
      out.radius_sq = r2;
      out.mode = RadiusMode::polygon;
    } else {
      out.radius_sq = max_eigenvalue(shadow->gram) * (1.0 + tol.quadratic_slack);
      out.mode = RadiusMode::ellipse;
    }
    out.radius = std::sqrt(out.radius_sq);
    return out;
  }
  Mat dirs(body.dim(), grid_m);
  for (int k = 0; k < grid_m; ++k) {
    const double t = 2.0 * kPi * k / grid_m;
    dirs.col(k) = std::cos(t) * plane.v() + std::sin(t) * plane.jv();
  }
  const double hmax = body.support_columns(dirs).maxCoeff();
  out.radius = hmax / std::cos(kPi / grid_m);
  out.radius_sq = out.radius * out.radius;
  out.mode = RadiusMode::grid;
  return out;
}

CapacityBound cylinder_bound(const ConvexBody& body, const HolomorphicPlane& plane, int grid_m,
                             const Tolerances& tol) {
  CapacityBound b;
  b.kind = BoundKind::upper_cylinder;
  b.body_id = body.label();
  CylinderCertificate cert;
  cert.v = plane.v();
  cert.jv = plane.jv();
  cert.radius = projection_circumradius(body, plane, grid_m, tol);
  b.value = kPi * cert.radius.radius_sq;
  b.cylinder = std::move(cert);
  b.provenance = "K inside P_E K + E^perp; E = U E_0 for a unitary U";
  return b;
}

double recertify(const ConvexBody& body, const CapacityBound& bound, const Tolerances& tol) {
  switch (bound.kind) {
    case BoundKind::upper_cylinder: {
      if (!bound.cylinder) throw InputError("cylinder bound without certificate");
      const auto& c = *bound.cylinder;
      const ConvexBody target = c.position.size() ? ConvexBody::linear_image(c.position, body) : body;
      const HolomorphicPlane plane = HolomorphicPlane::from(c.v);
      return kPi * projection_circumradius(target, plane, c.radius.grid_m, tol).radius_sq;
    }
    case BoundKind::lower_ball:
      if (!bound.ball) throw InputError("ball bound without certificate");
      return kPi * bound.ball->inradius * bound.ball->inradius;
    case BoundKind::exact_ellipsoid:
    case BoundKind::upper_lowner:
      if (!bound.spectrum) throw InputError("ellipsoid bound without certificate");
      return ellipsoid_capacity(bound.spectrum->form, tol).value;
  }
  return 0.0;
}

std::vector<std::pair<std::string, HolomorphicPlane>> deterministic_planes(const ConvexBody& body) {
  const int d = body.dim();
  std::vector<std::pair<std::string, HolomorphicPlane>> out;
  for (int k = 0; k < d / 2; ++k) out.emplace_back("E_" + std::to_string(k), HolomorphicPlane::from(Vec::Unit(d, 2 * k)));
  out.emplace_back("diagonal", HolomorphicPlane::from(Vec::Ones(d)));

  std::optional<Vec> scales;
  if (const auto* img = std::get_if<ConvexBody::Image>(&body.params())) {
    if (is_diagonal(img->map)) scales = img->map.diagonal().cwiseAbs();
  } else if (const auto* box = std::get_if<ConvexBody::Box>(&body.params())) {
    scales = box->half_widths;
  }
  if (scales) {
    Vec v(d);
    for (int k = 0; k < d / 2; ++k) v[2 * k] = v[2 * k + 1] = 1.0 / std::sqrt((*scales)[2 * k] * (*scales)[2 * k + 1]);
    out.emplace_back("harmonic", HolomorphicPlane::from(v));
  }
  return out;
}

PlaneSearchResult random_plane_search(const ConvexBody& body, long trials, PlaneSampler sampler, std::uint64_t seed,
                                      int grid_m, std::optional<WidthEstimate> width) {
  if (trials < 1) throw InputError("random_plane_search needs at least one trial");
  check_grid(grid_m);
  const int d = body.dim();
  PlaneSearchResult res;
  res.trials = trials;

  if (width) {
    res.width = *width;
  } else if (sampler == PlaneSampler::sphere) {
    res.width = mean_width(body, kDefaultSphereSamples / 10, derive_seed(seed, 11));
  } else if (d <= 16) {
    res.width = rademacher_exact(body);
  } else {
    res.width = rademacher_mc(body, kDefaultVertexSamples, derive_seed(seed, 11));
  }
  const double threshold = 3.0 * res.width.value;

  bool have_best = false;
  for (const auto& [name, plane] : deterministic_planes(body)) {
    CapacityBound b = cylinder_bound(body, plane, grid_m);
    if (!have_best || b.value < res.best.value) {
      res.best = std::move(b);
      res.best_source = name;
      have_best = true;
    }
  }

  const std::uint64_t trial_seed = derive_seed(seed, 12);
  std::vector<double> values(static_cast<std::size_t>(trials));
  std::vector<char> ok(static_cast<std::size_t>(trials));
  parallel_for(values.size(), 16, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const Vec v = sampler == PlaneSampler::sphere ? sphere_point(d, trial_seed, t) : cube_vertex(d, trial_seed, t);
      const HolomorphicPlane plane = HolomorphicPlane::from(v);
      Mat pair(d, 2);
      pair.col(0) = plane.v();
      pair.col(1) = plane.jv();
      const Vec h = body.support_columns(pair);
      ok[t] = (h[0] <= threshold && h[1] <= threshold) ? 1 : 0;
      values[t] = kPi * projection_circumradius(body, plane, grid_m).radius_sq;
    }
  });

  std::size_t best_trial = values.size();
  for (std::size_t t = 0; t < values.size(); ++t) {
    res.successes += ok[t];
    if (values[t] < res.best.value && (best_trial == values.size() || values[t] < values[best_trial])) best_trial = t;
  }
  if (best_trial < values.size()) {
    const Vec v = sampler == PlaneSampler::sphere ? sphere_point(d, trial_seed, best_trial)
                                                  : cube_vertex(d, trial_seed, best_trial);
    res.best = cylinder_bound(body, HolomorphicPlane::from(v), grid_m);
    res.best_source = "random#" + std::to_string(best_trial);
  }
  res.success_rate = static_cast<double>(res.successes) / static_cast<double>(trials);
  res.success_std_error = std::sqrt(res.success_rate * (1.0 - res.success_rate) / static_cast<double>(trials));
  return res;
}

CapacityBound ellipsoid_capacity(const Mat& form, const Tolerances& tol) {
  const SymplecticSpectrum spec = symplectic_spectrum(form, tol);
  CapacityBound b;
  b.kind = BoundKind::exact_ellipsoid;
  b.value = kPi * spec.radii.front() * spec.radii.front();
  b.body_id = "ellipsoid(dim=" + std::to_string(form.rows()) + ")";
  SpectrumCertificate cert;
  cert.radii = spec.radii;
  cert.s = spec.s;
  cert.form = form;
  cert.center = Vec::Zero(form.rows());
  b.spectrum = std::move(cert);
  b.provenance = "B(r1) inside S E inside Z(r1) in Williamson coordinates";
  return b;
}

CapacityBound inradius_lower_bound(const ConvexBody& body) {
  CapacityBound b;
  b.kind = BoundKind::lower_ball;
  b.body_id = body.label();
  BallCertificate cert;
  if (auto r = exact_inradius(body, cert.witness)) {
    cert.inradius = *r;
    cert.certified = true;
    b.provenance = "exact inradius";
  } else if (auto f = inradius_floor(body, cert.witness)) {
    cert.inradius = *f;
    cert.certified = true;
    b.provenance = "certified inradius lower bound";
  } else {
    // min of h_K over sampled directions and the coordinate axes; an upper
    // estimate of the inradius for symmetric bodies, so not a certificate.
    const int d = body.dim();
    Mat dirs(d, kInradiusDirections + 2 * d);
    dirs.leftCols(kInradiusDirections) = sphere_directions(d, kInradiusDirections, 0x1a2b3c);
    dirs.middleCols(kInradiusDirections, d) = Mat::Identity(d, d);
    dirs.rightCols(d) = -Mat::Identity(d, d);
    const Vec h = body.support_columns(dirs);
    Eigen::Index arg = 0;
    const double hmin = h.minCoeff(&arg);
    if (body.symmetric()) {
      cert.inradius = hmin;
    } else {
      // distance from the origin to the nearest supporting hyperplane
      cert.inradius = std::max(0.0, hmin);
    }
    cert.witness = dirs.col(arg);
    cert.certified = false;
    b.provenance = "sampled inradius estimate (not certified)";
  }
  b.value = kPi * cert.inradius * cert.inradius;
  b.ball = std::move(cert);
  return b;
}

double gamma_ratio(const ConvexBody& body, const CapacityBound& bound, const VolumeResult& vol) {
  if (!is_upper(bound.kind)) throw InputError("gamma_ratio needs an upper bound");
  if (!(vol.value > 0.0)) throw InputError("gamma_ratio needs a positive volume");
  const int d = body.dim();
  const double n = d / 2.0;
  return (bound.value / kPi) / std::pow(vol.value / unit_ball_volume(d), 1.0 / n);
}

}  // namespace symcap
