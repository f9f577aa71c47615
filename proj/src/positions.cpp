#include "symcap/positions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symcap/error.hpp"
#include "symcap/random.hpp"

namespace symcap {
namespace {

constexpr double kAcceptRatio = 1.0 - 1e-4;
constexpr double kMinStep = 1e-4;

Mat normalize_det(Mat t) {
  const double det = t.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det)) throw NumericalError("singular position", 0.0);
  if (det < 0.0) t.row(0) *= -1.0;
  return t / std::pow(std::abs(det), 1.0 / static_cast<double>(t.rows()));
}

// A map taking the body to a ball or cube, when the structure makes it obvious.
std::optional<Mat> analytic_normalizer(const ConvexBody& body) {
  if (const auto* e = std::get_if<ConvexBody::Ellipsoid>(&body.params())) {
    Eigen::SelfAdjointEigenSolver<Mat> es(e->form);
    return Mat(es.operatorSqrt());
  }
  if (const auto* b = std::get_if<ConvexBody::Box>(&body.params())) {
    return Mat(b->half_widths.cwiseInverse().asDiagonal());
  }
  if (const auto* img = std::get_if<ConvexBody::Image>(&body.params())) {
    const Mat inv = img->lu.inverse();
    if (auto inner = analytic_normalizer(*img->inner)) return Mat(*inner * inv);
    return inv;
  }
  return std::nullopt;
}

// Bodies whose normalized form has a symmetry group acting irreducibly. The
// minimal M* position is unique up to orthogonal maps, so for these the
// normalizer (or the identity) is already optimal and no search is needed.
bool exact_position(const ConvexBody& body) {
  const auto& p = body.params();
  if (std::holds_alternative<ConvexBody::Ball>(p) || std::holds_alternative<ConvexBody::Ellipsoid>(p) ||
      std::holds_alternative<ConvexBody::Box>(p) || std::holds_alternative<ConvexBody::Cross>(p) ||
      std::holds_alternative<ConvexBody::Lp>(p) || std::holds_alternative<ConvexBody::Schatten>(p))
    return true;
  if (const auto* img = std::get_if<ConvexBody::Image>(&p)) return exact_position(*img->inner);
  return false;
}

// Unitary matrix (orthogonal, commuting with J) nearest to w, if the J-linear
// part of w is well conditioned.
std::optional<Mat> nearest_unitary(const Mat& w) {
  const Mat j = standard_j(static_cast<int>(w.rows()));
  const Mat a = 0.5 * (w - j * w * j);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (!(svd.singularValues().minCoeff() > 1e-6)) return std::nullopt;
  return Mat(svd.matrixU() * svd.matrixV().transpose());
}

class Objective {
 public:
  Objective(const ConvexBody& body, long samples, std::uint64_t seed)
      : body_(body), dirs_(sphere_directions(body.dim(), samples, seed)), seed_(seed) {}

  Vec samples(const Mat& t) const { return body_.support_columns(t.transpose() * dirs_); }
  double operator()(const Mat& t) const { return samples(t).mean(); }

  WidthEstimate estimate(const Mat& t) const {
    const Vec v = samples(t);
    const double n = static_cast<double>(v.size());
    const double mean = v.mean();
    WidthEstimate w;
    w.kind = WidthKind::mstar;
    w.value = mean;
    w.std_error = std::sqrt((v.array() - mean).square().sum() / (n - 1.0) / n);
    w.samples = static_cast<long>(v.size());
    w.seed = seed_;
    return w;
  }

 private:
  const ConvexBody& body_;
  Mat dirs_;
  std::uint64_t seed_;
};

Mat givens(int d, int i, int j, double angle) {
  Mat g = Mat::Identity(d, d);
  const double c = std::cos(angle), s = std::sin(angle);
  g(i, i) = c;
  g(j, j) = c;
  g(i, j) = -s;
  g(j, i) = s;
  return g;
}

void check_pair_diagonal(const Mat& d) {
  const Eigen::Index n2 = d.rows();
  if (d.cols() != n2 || n2 % 2 != 0) throw InputError("D must be square of even size");
  if (max_abs(d - Mat(d.diagonal().asDiagonal())) != 0.0) throw InputError("D must be diagonal");
  double log_prod = 0.0;
  for (Eigen::Index k = 0; k < n2 / 2; ++k) {
    const double a = d(2 * k, 2 * k), b = d(2 * k + 1, 2 * k + 1);
    if (!(a > 0.0) || std::abs(a - b) > 1e-12 * a) throw InputError("D must be diag(r1, r1, ..., rn, rn) with r > 0");
    log_prod += std::log(a);
  }
  if (std::abs(std::exp(log_prod) - 1.0) > 1e-9) throw InputError("D must have prod r = 1");
}

}  // namespace

PositionSearchResult optimize_position(const ConvexBody& body, int budget, std::uint64_t seed,
                                       long objective_samples) {
  if (budget < 1) throw InputError("position budget must be at least 1");
  const int d = body.dim();
  PositionSearchResult res;
  res.seed = seed;
  const Objective obj(body, objective_samples, derive_seed(seed, 31));

  const Mat identity = Mat::Identity(d, d);
  res.mstar_before = obj.estimate(identity);
  double best = res.mstar_before.value;
  res.evaluations = 1;
  res.trace.emplace_back(0, best);

  Mat t0 = identity;
  if (exact_position(body)) {
    if (auto a = analytic_normalizer(body)) {
      const Mat cand = normalize_det(*a);
      const WidthEstimate after = obj.estimate(cand);
      ++res.evaluations;
      if (after.value < best) {
        res.t = cand;
        res.mstar_after = after;
        res.trace.emplace_back(1, after.value);
      } else {
        res.t = identity;
        res.mstar_after = res.mstar_before;
      }
    } else {
      res.t = identity;
      res.mstar_after = res.mstar_before;
    }
    return res;
  }
  if (res.evaluations < budget) {
    if (auto a = analytic_normalizer(body)) {
      const Mat cand = normalize_det(*a);
      const double f = obj(cand);
      ++res.evaluations;
      if (f < best * kAcceptRatio) {
        best = f;
        t0 = cand;
        res.trace.emplace_back(res.evaluations - 1, best);
      }
    }
  }

  Vec log_lambda = Vec::Zero(d);
  Mat rot = identity;
  auto compose = [&](const Vec& ll, const Mat& r) {
    const Vec centered = ll.array() - ll.mean();
    return Mat(centered.array().exp().matrix().asDiagonal() * r * t0);
  };

  StreamRng rng(derive_seed(seed, 32), 0);
  std::uniform_int_distribution<int> pick(0, d - 1);
  double delta = 0.25;
  double theta = 0.25;
  bool changed = t0 != identity;
  while (res.evaluations < budget && (delta > kMinStep || theta > kMinStep)) {
    bool accepted = false;
    for (int i = 0; i < d && res.evaluations < budget; ++i) {
      for (double sign : {1.0, -1.0}) {
        if (res.evaluations >= budget) break;
        Vec ll = log_lambda;
        ll[i] += sign * delta;
        const double f = obj(compose(ll, rot));
        ++res.evaluations;
        if (f < best * kAcceptRatio) {
          best = f;
          log_lambda = ll;
          accepted = changed = true;
          res.trace.emplace_back(res.evaluations - 1, best);
          break;
        }
      }
    }
    for (int k = 0; k < d && res.evaluations < budget; ++k) {
      const int i = pick(rng);
      int j = pick(rng);
      if (j == i) j = (i + 1) % d;
      for (double sign : {1.0, -1.0}) {
        if (res.evaluations >= budget) break;
        const Mat r = givens(d, i, j, sign * theta) * rot;
        const double f = obj(compose(log_lambda, r));
        ++res.evaluations;
        if (f < best * kAcceptRatio) {
          best = f;
          rot = r;
          accepted = changed = true;
          res.trace.emplace_back(res.evaluations - 1, best);
          break;
        }
      }
    }
    if (!accepted) {
      delta *= 0.5;
      theta *= 0.5;
    }
  }

  res.t = changed ? normalize_det(compose(log_lambda, rot)) : identity;
  res.mstar_after = changed ? obj.estimate(res.t) : res.mstar_before;
  if (res.mstar_after.value > res.mstar_before.value) {
    res.t = identity;
    res.mstar_after = res.mstar_before;
  }
  return res;
}

PlaneChoice proposition_plane(const ConvexBody& body, const Mat& d, long trials, std::uint64_t seed, int grid_m) {
  if (trials < 0) throw InputError("trials must be non-negative");
  check_pair_diagonal(d);
  const int n2 = body.dim();
  if (d.rows() != n2) throw InputError("D and body dimensions differ");
  const ConvexBody dk = ConvexBody::linear_image(d, body);

  PlaneChoice out;
  out.sstar = n2 <= 16 ? rademacher_exact(dk) : rademacher_mc(dk, kDefaultVertexSamples, derive_seed(seed, 41));
  const double threshold = 3.0 * out.sstar.value;

  const std::uint64_t vertex_seed = derive_seed(seed, 42);
  const long count = trials + 1;
  Mat vs(n2, count);
  vs.col(0) = Vec::Ones(n2) / std::sqrt(static_cast<double>(n2));
  for (long t = 1; t < count; ++t) vs.col(t) = cube_vertex(n2, vertex_seed, static_cast<std::uint64_t>(t - 1));
  Mat jvs(n2, count);
  for (long t = 0; t < count; ++t) jvs.col(t) = apply_j(vs.col(t));
  const Vec hv = dk.support_columns(vs);
  const Vec hjv = dk.support_columns(jvs);

  long chosen = -1;
  double chosen_r2 = std::numeric_limits<double>::infinity();
  CertifiedRadius chosen_radius;
  for (long t = 0; t < count; ++t) {
    if (hv[t] > threshold || hjv[t] > threshold) continue;
    const Vec vp = d * vs.col(t);
    const CertifiedRadius r = projection_circumradius(body, HolomorphicPlane::from(vp), grid_m);
    if (r.radius_sq < chosen_r2) {
      chosen = t;
      chosen_r2 = r.radius_sq;
      chosen_radius = r;
    }
  }
  out.qualified = chosen >= 0;
  if (!out.qualified) {
    const Vec worst = hv.cwiseMax(hjv);
    Eigen::Index arg = 0;
    worst.minCoeff(&arg);
    chosen = arg;
  }
  out.v = vs.col(chosen);
  out.max_support = std::max(hv[chosen], hjv[chosen]);
  out.plane = HolomorphicPlane::from(d * out.v);
  out.radius = out.qualified ? chosen_radius : projection_circumradius(body, out.plane, grid_m);
  out.source = chosen == 0 ? "diagonal" : "vertex#" + std::to_string(chosen - 1);
  return out;
}

PipelineReport main_pipeline(const ConvexBody& body, const PipelineOptions& options) {
  PipelineReport rep;
  rep.body_id = body.label();
  const int d = body.dim();
  const double n = d / 2.0;
  rep.two_n_baseline = d;
  rep.log_sq_curve = std::log(n) * std::log(n);

  ConvexBody k = body;
  if (!body.symmetric()) {
    k = ConvexBody::difference_body(body);
    rep.symmetrized = true;
    rep.volume_factor = 16.0;
  }

  std::string stage;
  try {
    stage = "position";
    rep.position = optimize_position(k, options.budget, derive_seed(options.seed, 1), options.objective_samples);
    rep.stages.push_back(stage);

    stage = "wds";
    rep.wds = wds_decompose(rep.position->t);
    rep.stages.push_back(stage);

    stage = "plane";
    const Mat& s = rep.wds->s;
    const ConvexBody kp = ConvexBody::linear_image(s, k);
    rep.plane = proposition_plane(kp, rep.wds->d, options.trials, derive_seed(options.seed, 2), options.grid_m);
    rep.stages.push_back(stage);

    stage = "bound";
    CapacityBound best = cylinder_bound(kp, rep.plane->plane, options.grid_m);
    best.cylinder->position = s;
    rep.route = "proposition:" + rep.plane->source;
    auto try_position = [&](const Mat& pos, const std::string& prefix) {
      const ConvexBody kq = ConvexBody::linear_image(pos, k);
      for (const auto& [name, plane] : deterministic_planes(kq)) {
        CapacityBound b = cylinder_bound(kq, plane, options.grid_m);
        if (b.value < best.value) {
          best = std::move(b);
          best.cylinder->position = pos;
          rep.route = prefix + name;
        }
      }
    };
    try_position(s, "positioned:");
    // S is only fixed up to a unitary factor; U S with U nearest to W keeps
    // the orientation the position search found.
    if (const auto u = nearest_unitary(rep.wds->w)) try_position(*u * s, "aligned:");
    if (exact_position(k)) {
      if (const auto a = analytic_normalizer(k)) {
        const WdsDecomposition na = wds_decompose(normalize_det(*a));
        try_position(na.s, "normalized:");
        if (const auto u = nearest_unitary(na.w)) try_position(*u * na.s, "normalized-aligned:");
      }
    }
    best.body_id = k.label();
    // the planes on K itself; for a symmetrized input these bound K directly
    for (const auto& [name, plane] : deterministic_planes(body)) {
      CapacityBound b = cylinder_bound(body, plane, options.grid_m);
      if (b.value < best.value) {
        best = std::move(b);
        rep.route = "direct:" + name;
      }
    }
    rep.bound = std::move(best);
    rep.stages.push_back(stage);

    stage = "volume";
    rep.volume = volume(body, options.mc_samples, derive_seed(options.seed, 3));
    rep.gamma = gamma_ratio(body, *rep.bound, *rep.volume);
    rep.stages.push_back(stage);
  } catch (const std::exception& e) {
    rep.error = e.what();
    rep.failed_stage = stage;
  }
  return rep;
}

}  // namespace symcap
