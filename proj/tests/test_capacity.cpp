#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "symcap/capacity.hpp"
#include "symcap/error.hpp"
#include "symcap/parallel.hpp"
#include "symcap/random.hpp"

using namespace symcap;

namespace {

constexpr double kPi = std::numbers::pi;

Mat cube_vertices(int d) {
  Mat v(d, 1L << d);
  for (long c = 0; c < (1L << d); ++c)
    for (int i = 0; i < d; ++i) v(i, c) = (c >> i) & 1 ? -1.0 : 1.0;
  return v;
}

}  // namespace

TEST_CASE("capacity: cube and cross-polytope examples") {
  for (int d : {4, 8, 12}) {
    const int n = d / 2;
    const ConvexBody cube = ConvexBody::cube(d);
    const CertifiedRadius r = projection_circumradius(cube, HolomorphicPlane::from(Vec::Unit(d, 0)));
    CHECK(r.mode == RadiusMode::polygon);
    CHECK(r.radius_sq == 2.0);
    CHECK(cylinder_bound(cube, HolomorphicPlane::from(Vec::Unit(d, 0))).value == 2 * kPi);

    const ConvexBody cross = ConvexBody::cross_polytope(d);
    const HolomorphicPlane diag = HolomorphicPlane::from(Vec::Ones(d));
    const CertifiedRadius rc = projection_circumradius(cross, diag);
    CHECK(rc.radius == doctest::Approx(1 / std::sqrt(n)).epsilon(1e-14));
    CHECK(cylinder_bound(cross, diag).value == doctest::Approx(kPi / n).epsilon(1e-14));
  }
}

TEST_CASE("capacity: grid certification") {
  const ConvexBody ball = ConvexBody::ball(6);
  const HolomorphicPlane e = HolomorphicPlane::from(gaussian_matrix(6, 1, 1).col(0));
  const CertifiedRadius r = projection_circumradius(ball, e, 360);
  CHECK(r.radius >= 1.0);
  CHECK(r.radius <= 1 / std::cos(kPi / 360));
  CHECK_THROWS_AS(projection_circumradius(ball, e, 7), InputError);

  // a body without an exact planar shadow is certified on the grid; the
  // certified radius dominates every sampled point of the projection
  const ConvexBody lp = ConvexBody::lp_ball(6, 3.0);
  const CertifiedRadius rg = projection_circumradius(lp, e, 64);
  CHECK(rg.mode == RadiusMode::grid);
  double sampled = 0.0;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    const Vec x = sphere_point(6, 2, s);
    sampled = std::max(sampled, (e.rows() * (x / lp.gauge(x))).norm());
  }
  CHECK(sampled <= rg.radius);
  const CertifiedRadius fine = projection_circumradius(lp, e, 4096);
  CHECK(fine.radius <= rg.radius * (1 + 1e-12));
  CHECK(fine.radius >= sampled);
}

TEST_CASE("capacity: distorted cross-polytope harmonic direction") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const int n = 4, d = 8;
    Vec a = gaussian_matrix(n, 1, 10 + seed).col(0).array().exp();
    a /= std::pow(a.prod(), 1.0 / n);
    Vec dd(d);
    for (int k = 0; k < n; ++k) dd[2 * k] = dd[2 * k + 1] = a[k];
    const ConvexBody k = ConvexBody::linear_image(dd.asDiagonal(), ConvexBody::cross_polytope(d));
    bool found = false;
    for (const auto& [name, plane] : deterministic_planes(k)) {
      if (name != "harmonic") continue;
      found = true;
      const CapacityBound b = cylinder_bound(k, plane);
      CHECK(b.cylinder->radius.radius <= 1 / std::sqrt(n) + 1e-9);
      CHECK(b.value <= kPi / n * (1 + 1e-12));
    }
    CHECK(found);
  }
}

TEST_CASE("capacity: ellipsoids") {
  CHECK(ellipsoid_capacity(Mat::Identity(4, 4)).value == doctest::Approx(kPi).epsilon(1e-14));
  const Mat m = (Vec(4) << 1, 1, 0.25, 0.25).finished().asDiagonal();
  const CapacityBound b = ellipsoid_capacity(m);
  CHECK(b.kind == BoundKind::exact_ellipsoid);
  CHECK(b.value == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(b.spectrum->radii[1] == doctest::Approx(2.0));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Mat a = gaussian_matrix(6, 6, 30 + seed);
    const Mat e = a.transpose() * a + 0.1 * Mat::Identity(6, 6);
    const Mat s = random_symplectic(3, 40 + seed);
    const Mat sinv = symplectic_inverse(s);
    // S E has form S^{-T} M S^{-1}
    const Mat moved = sinv.transpose() * e * sinv;
    CHECK(ellipsoid_capacity(0.5 * (moved + moved.transpose())).value ==
          doctest::Approx(ellipsoid_capacity(e).value).epsilon(1e-8));
  }
}

TEST_CASE("capacity: inradius lower bounds") {
  for (int d : {4, 6, 10}) {
    const int n = d / 2;
    const CapacityBound c = inradius_lower_bound(ConvexBody::cross_polytope(d));
    CHECK(c.kind == BoundKind::lower_ball);
    CHECK(c.ball->certified);
    CHECK(c.value == doctest::Approx(kPi / (2 * n)).epsilon(1e-14));
    CHECK(inradius_lower_bound(ConvexBody::cube(d)).value == doctest::Approx(kPi));
  }
  CHECK(inradius_lower_bound(ConvexBody::lp_ball(6, 1.5)).value ==
        doctest::Approx(kPi * std::pow(6.0, 2 * (0.5 - 1 / 1.5))).epsilon(1e-14));
  const Mat m = (Vec(4) << 1, 4, 2, 0.5).finished().asDiagonal();
  CHECK(inradius_lower_bound(ConvexBody::ellipsoid(m)).ball->inradius == doctest::Approx(0.5));

  // the minimum of h over many directions is an upper estimate of the inradius,
  // and h at the witness attains the exact value
  auto sampled_min = [](const ConvexBody& k) {
    return k.support_columns(sphere_directions(k.dim(), 200000, 17)).minCoeff();
  };
  const ConvexBody zon = random_zonotope(6, 12, 3);
  const CapacityBound z = inradius_lower_bound(zon);
  CHECK(z.ball->certified);
  CHECK(z.ball->inradius <= sampled_min(zon));
  CHECK(zon.support(z.ball->witness) == doctest::Approx(z.ball->inradius).epsilon(1e-12));

  // too many facets: sigma_min floor
  const ConvexBody big = random_zonotope(16, 32, 4);
  const CapacityBound zb = inradius_lower_bound(big);
  CHECK(zb.ball->certified);
  CHECK(zb.ball->inradius <= sampled_min(big));

  // diagonal images of the cross-polytope: 1 / sqrt(sum 1/d_i^2)
  const Vec dg = (Vec(6) << 2, 2, 0.5, 0.5, 1, 1).finished();
  const CapacityBound dc = inradius_lower_bound(ConvexBody::linear_image(dg.asDiagonal(), ConvexBody::cross_polytope(6)));
  CHECK(dc.ball->certified);
  CHECK(dc.ball->inradius == doctest::Approx(1.0 / std::sqrt(dg.cwiseInverse().squaredNorm())).epsilon(1e-13));
  const Mat tb = gaussian_matrix(4, 4, 18);
  const ConvexBody ib = ConvexBody::linear_image(tb, ConvexBody::cube(4));
  const CapacityBound bi = inradius_lower_bound(ib);
  CHECK(bi.ball->inradius <= sampled_min(ib));
  CHECK(ib.support(bi.ball->witness) == doctest::Approx(bi.ball->inradius).epsilon(1e-12));

  Mat verts(4, 8);
  verts << gaussian_matrix(4, 4, 19), -gaussian_matrix(4, 4, 19);
  CHECK_FALSE(inradius_lower_bound(ConvexBody::vertex_polytope(verts)).ball->certified);
}

TEST_CASE("capacity: Lowner baseline") {
  const ConvexBody cube = ConvexBody::vertex_polytope(cube_vertices(4));
  const double eps = 0.01;
  const CapacityBound b = lowner_baseline(cube, eps);
  CHECK(b.kind == BoundKind::upper_lowner);
  // the enclosing ball has radius sqrt(2n), so the bound is 2n pi
  CHECK(b.value >= 4 * kPi * (1 - 1e-9));
  CHECK(b.value <= 4 * kPi * (1 + 2 * eps));
  const LownerEllipsoid e = minimum_volume_ellipsoid(cube_vertices(4), eps);
  CHECK(max_abs(e.form - Mat::Identity(4, 4) / 4) <= 0.01);
  CHECK(e.gap <= eps);

  Mat cv(4, 8);
  cv << Mat::Identity(4, 4), -Mat::Identity(4, 4);
  const CapacityBound bc = lowner_baseline(ConvexBody::vertex_polytope(cv), eps);
  CHECK(bc.value >= kPi * (1 - 1e-9));
  CHECK(bc.value <= kPi * (1 + 2 * eps));

  CHECK_THROWS_AS(lowner_baseline(ConvexBody::ball(4), eps), InputError);
  CHECK_THROWS_AS(lowner_baseline(cube, 0.7), InputError);
  Tolerances tight = default_tolerances();
  tight.lowner_max_iterations = 2;
  CHECK_THROWS_AS(lowner_baseline(ConvexBody::vertex_polytope(gaussian_matrix(4, 12, 5)), 1e-6, tight),
                  NumericalError);

  // random symmetric polytope: both bounds are upper bounds on the same capacity
  const Mat g = gaussian_matrix(4, 6, 6);
  Mat sym(4, 12);
  sym << g, -g;
  const ConvexBody poly = ConvexBody::vertex_polytope(sym);
  const CapacityBound low = lowner_baseline(poly, eps);
  const PlaneSearchResult ps = random_plane_search(poly, 200, PlaneSampler::sphere, 7);
  MESSAGE("random polytope: lowner " << low.value << ", plane search " << ps.best.value);
  CHECK(inradius_lower_bound(poly).value <= std::min(low.value, ps.best.value));
}

TEST_CASE("capacity: gamma ratio examples") {
  for (int d : {4, 8, 12}) {
    const int n = d / 2;
    const ConvexBody cube = ConvexBody::cube(d);
    const double g = gamma_ratio(cube, cylinder_bound(cube, HolomorphicPlane::from(Vec::Unit(d, 0))),
                                 volume(cube, 0, 0));
    CHECK(g <= kPi * std::numbers::e / (2 * n) * (1 + 1e-9));
    const ConvexBody cross = ConvexBody::cross_polytope(d);
    const double gc = gamma_ratio(cross, cylinder_bound(cross, HolomorphicPlane::from(Vec::Ones(d))),
                                  volume(cross, 0, 0));
    CHECK(gc <= kPi / 2);
    const ConvexBody ball = ConvexBody::ball(d);
    CHECK(gamma_ratio(ball, ellipsoid_capacity(Mat::Identity(d, d)), volume(ball, 0, 0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gamma_ratio(ConvexBody::cube(4), inradius_lower_bound(ConvexBody::cube(4)),
                              volume(ConvexBody::cube(4), 0, 0)),
                  InputError);
}

TEST_CASE("capacity: certificates, unitary invariance and conformality") {
  const std::vector<ConvexBody> bodies{ConvexBody::cube(6), ConvexBody::lp_ball(6, 3.0), random_zonotope(6, 12, 8),
                                       ConvexBody::linear_image(gaussian_matrix(6, 6, 9), ConvexBody::lp_ball(6, 1.3))};
  for (const auto& k : bodies) {
    CAPTURE(k.label());
    for (std::uint64_t s = 0; s < 5; ++s) {
      const HolomorphicPlane e = HolomorphicPlane::from(gaussian_matrix(6, 1, 50, s).col(0));
      const CapacityBound b = cylinder_bound(k, e);
      CHECK(std::abs(recertify(k, b) - b.value) <= 1e-10 * b.value);

      const Mat u = random_unitary(3, 60 + s);
      const ConvexBody uk = ConvexBody::linear_image(u, k);
      const CapacityBound bu = cylinder_bound(uk, HolomorphicPlane::from(u * e.v()));
      CHECK(bu.value == doctest::Approx(b.value).epsilon(1e-9));

      const double lambda = 1.7;
      const CapacityBound bl = cylinder_bound(k.scaled(lambda), e);
      CHECK(bl.value == doctest::Approx(lambda * lambda * b.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("capacity: lp chain above p = 2") {
  for (int d : {6, 10}) {
    const HolomorphicPlane e0 = HolomorphicPlane::from(Vec::Unit(d, 0));
    const double inf_bound =
        cylinder_bound(ConvexBody::lp_ball(d, std::numeric_limits<double>::infinity()), e0).value;
    CHECK(inf_bound == doctest::Approx(2 * kPi).epsilon(1e-14));
    for (double p : {2.5, 3.0, 6.0}) CHECK(cylinder_bound(ConvexBody::lp_ball(d, p), e0).value <= inf_bound);
  }
}

TEST_CASE("capacity: random plane search") {
  const ConvexBody ball = ConvexBody::ball(8);
  const PlaneSearchResult rb = random_plane_search(ball, 50, PlaneSampler::sphere, 1, 360);
  CHECK(rb.best.value <= kPi / std::pow(std::cos(kPi / 360), 2));

  const ConvexBody cube = ConvexBody::cube(10);
  const PlaneSearchResult rc = random_plane_search(cube, 500, PlaneSampler::cube_vertices, 2);
  CHECK(rc.best.value <= kPi * 18 * std::pow(rc.width.value, 2));
  CHECK(rc.width.exact);

  for (const auto& k : {ConvexBody::cube(10), ConvexBody::cross_polytope(10), ConvexBody::lp_ball(10, 1.5),
                        random_zonotope(10, 20, 4)}) {
    for (auto sampler : {PlaneSampler::sphere, PlaneSampler::cube_vertices}) {
      const PlaneSearchResult r = random_plane_search(k, 300, sampler, 3);
      CHECK(r.success_rate >= 1.0 / 3 - 3 * r.success_std_error);
      CHECK(std::abs(recertify(k, r.best) - r.best.value) <= 1e-10 * r.best.value);
      CHECK(inradius_lower_bound(k).value <= r.best.value);
    }
  }
  CHECK_THROWS_AS(random_plane_search(cube, 0, PlaneSampler::sphere, 1), InputError);
}

TEST_CASE("capacity: plane search is independent of the thread count") {
  const ConvexBody k = ConvexBody::lp_ball(8, 3.0);
  set_thread_count(1);
  const PlaneSearchResult a = random_plane_search(k, 200, PlaneSampler::sphere, 5);
  set_thread_count(3);
  const PlaneSearchResult b = random_plane_search(k, 200, PlaneSampler::sphere, 5);
  set_thread_count(0);
  CHECK(a.best.value == b.best.value);
  CHECK(a.best_source == b.best_source);
  CHECK(a.successes == b.successes);
}
