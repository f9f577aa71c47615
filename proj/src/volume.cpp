#include <algorithm>
#include <cmath>
#include <numeric>

#include "symcap/bodies.hpp"
#include "symcap/error.hpp"
#include "symcap/parallel.hpp"
#include "symcap/random.hpp"

namespace symcap {
namespace {

struct Moments {
  double mean;
  double std_error;
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

VolumeResult rejection_volume(const ConvexBody& body, long budget, std::uint64_t seed) {
  const int d = body.dim();
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    const Vec e = Vec::Unit(d, i);
    hi[i] = body.support(e);
    lo[i] = -body.support(-e);
  }
  const double box = (hi - lo).prod();
  std::vector<double> hit(static_cast<std::size_t>(budget));
  parallel_for(hit.size(), 1024, [&](std::size_t b, std::size_t e) {
    Vec x(d);
    for (std::size_t s = b; s < e; ++s) {
      StreamRng rng(seed, s);
      for (int i = 0; i < d; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
      hit[s] = body.contains(x) ? 1.0 : 0.0;
    }
  });
  const auto m = moments(hit);
  VolumeResult r;
  r.value = box * m.mean;
  r.std_error = box * m.std_error;
  r.exactness = Exactness::monte_carlo;
  r.samples = budget;
  r.seed = seed;
  r.method = "rejection";
  return r;
}

// Vol(K) = kappa_d * E_u[ ||u||_K^{-d} ] over the uniform sphere.
VolumeResult radial_volume(const ConvexBody& body, long budget, std::uint64_t seed) {
  const int d = body.dim();
  std::vector<double> rho(static_cast<std::size_t>(budget));
  parallel_for(rho.size(), 256, [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      const double g = body.gauge(sphere_point(d, seed, s));
      if (!(g > 0.0) || std::isinf(g))
        throw InputError("radial volume estimator needs the origin in the interior of the body");
      rho[s] = std::pow(g, -d);
    }
  });
  const auto m = moments(rho);
  const double kappa = unit_ball_volume(d);
  VolumeResult r;
  r.value = kappa * m.mean;
  r.std_error = kappa * m.std_error;
  r.exactness = Exactness::monte_carlo;
  r.samples = budget;
  r.seed = seed;
  r.method = "radial";
  return r;
}

// Vol(Z) = 2^d * C(m, d) * E_I |det S_I| over uniform d-subsets I.
VolumeResult zonotope_subset_volume(const Mat& segments, long budget, std::uint64_t seed) {
  const int d = static_cast<int>(segments.rows());
  const int m = static_cast<int>(segments.cols());
  std::vector<double> dets(static_cast<std::size_t>(budget));
  parallel_for(dets.size(), 512, [&](std::size_t b, std::size_t e) {
    std::vector<int> perm(m);
    Mat sub(d, d);
    for (std::size_t s = b; s < e; ++s) {
      StreamRng rng(seed, s);
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = 0; i < d; ++i) {  // partial Fisher-Yates
        const int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(m - i));
        std::swap(perm[i], perm[j]);
        sub.col(i) = segments.col(perm[i]);
      }
      dets[s] = std::abs(sub.partialPivLu().determinant());
    }
  });
  const auto mo = moments(dets);
  const double log_scale = d * std::log(2.0) + std::lgamma(m + 1.0) - std::lgamma(d + 1.0) - std::lgamma(m - d + 1.0);
  const double scale = std::exp(log_scale);
  VolumeResult r;
  r.value = scale * mo.mean;
  r.std_error = scale * mo.std_error;
  r.exactness = Exactness::monte_carlo;
  r.samples = budget;
  r.seed = seed;
  r.method = "zonotope_subsets_mc";
  r.fallback_to_monte_carlo = true;
  return r;
}

}  // namespace

VolumeResult volume(const ConvexBody& body, long budget, std::uint64_t seed, const Tolerances& tol) {
  if (auto v = body.exact_volume(tol)) {
    VolumeResult r;
    r.value = *v;
    r.exactness = Exactness::exact;
    r.seed = seed;
    r.method = body.kind() == BodyKind::zonotope ? "subset_sum" : "closed_form";
    return r;
  }
  if (budget <= 0) throw InputError("volume: Monte-Carlo budget must be positive when no exact formula applies");

  if (const auto* img = std::get_if<ConvexBody::Image>(&body.params())) {
    VolumeResult r = volume(*img->inner, budget, seed, tol);
    r.value *= img->abs_det;
    r.std_error *= img->abs_det;
    return r;
  }
  if (const auto* z = std::get_if<ConvexBody::Zonotope>(&body.params())) {
    if (z->segments.cols() >= z->segments.rows()) return zonotope_subset_volume(z->segments, budget, seed);
  }
  if (body.dim() <= tol.rejection_volume_max_dim) return rejection_volume(body, budget, seed);
  return radial_volume(body, budget, seed);
}

}  // namespace symcap
