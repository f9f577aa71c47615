// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "symcap/body_json.hpp"
#include "symcap/capacity.hpp"
#include "symcap/experiment.hpp"
#include "symcap/parallel.hpp"
#include "symcap/positions.hpp"
#include "symcap/random.hpp"
#include "symcap/symplect.hpp"
#include "symcap/widths.hpp"

using namespace symcap;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Every body touched by the suite, with all bounds computed for it.
struct Entry {
  ConvexBody body;
  std::vector<double> upper;
  std::vector<double> gamma;
  std::vector<double> lower;
};

class Registry {
 public:
  // Labels do not identify linear images, so the key adds a few support values.
  Entry& at(const ConvexBody& body) {
    std::ostringstream key;
    key.precision(17);
    key << body.label();
    for (std::uint64_t i = 0; i < 3; ++i) key << ' ' << body.support(sphere_point(body.dim(), 977, i));
    auto it = entries_.find(key.str());
    if (it == entries_.end()) it = entries_.emplace(key.str(), Entry{body, {}, {}, {}}).first;
    return it->second;
  }
  void upper(const ConvexBody& body, double value, std::optional<double> gamma = std::nullopt) {
    Entry& e = at(body);
    e.upper.push_back(value);
    if (gamma) e.gamma.push_back(*gamma);
  }
  void lower(const ConvexBody& body, double value) { at(body).lower.push_back(value); }
  std::map<std::string, Entry>& entries() { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

Mat random_spd(int d, std::uint64_t seed) {
  const Mat a = gaussian_matrix(d, d, seed);
  return a.transpose() * a / d + 0.05 * Mat::Identity(d, d);
}

Mat random_sl(int d, std::uint64_t seed) {
  Mat t = gaussian_matrix(d, d, seed);
  const double det = t.determinant();
  if (det < 0) t.row(0) *= -1;
  return t / std::pow(std::abs(det), 1.0 / d);
}

// diag(a1, a1, ..., an, an) with prod a = 1
Vec distortion(int d, std::uint64_t seed) {
  const int n = d / 2;
  Vec a = gaussian_matrix(n, 1, seed).col(0).array().exp();
  a /= std::pow(a.prod(), 1.0 / n);
  Vec diag(d);
  for (int k = 0; k < n; ++k) diag[2 * k] = diag[2 * k + 1] = a[k];
  return diag;
}

double ulp_gap(double a, double b) { return std::abs(a - b) / (std::numeric_limits<double>::epsilon() * std::abs(b)); }

std::vector<ConvexBody> acceptance_bodies(int d) {
  const double inf = std::numeric_limits<double>::infinity();
  return {ConvexBody::ball(d),
          ConvexBody::cube(d),
          ConvexBody::cross_polytope(d),
          ConvexBody::lp_ball(d, 1.25),
          ConvexBody::lp_ball(d, 1.5),
          ConvexBody::lp_ball(d, 3.0),
          ConvexBody::lp_ball(d, inf),
          ConvexBody::ellipsoid(random_spd(d, 900 + d)),
          ConvexBody::linear_image(distortion(d, 800 + d).asDiagonal(), ConvexBody::cross_polytope(d)),
          random_zonotope(d, 2 * d, 700 + d)};
}

Outcome criterion1(Registry& reg) {
  Outcome o;
  for (int d : {4, 8, 12, 20}) {
    const auto start = Clock::now();
    const int n = d / 2;
    const ConvexBody cube = ConvexBody::cube(d);
    const CapacityBound b = cylinder_bound(cube, HolomorphicPlane::from(Vec::Unit(d, 0)));
    const VolumeResult v = volume(cube, 0, 0);
    const double g = gamma_ratio(cube, b, v);
    const double t = seconds_since(start);
    o.require(b.cylinder->radius.mode == RadiusMode::polygon, "vertex-exact mode");
    o.require(b.cylinder->radius.radius_sq == 2.0, "radius sqrt(2) at 2n=" + std::to_string(d));
    o.require(b.value == 2 * kPi, "bound 2pi at 2n=" + std::to_string(d));
    o.require(v.exactness == Exactness::exact, "exact volume");
    o.require(g <= kPi * kE / (2 * n) * (1 + 1e-9), "gamma <= pi e/(2n) at 2n=" + std::to_string(d));
    o.require(t < 1.0, "runtime < 1 s");
    reg.upper(cube, b.value, g);
    o.detail << "2n=" << d << " gamma=" << g << " (" << t << "s) ";
  }
  return o;
}

Outcome criterion2(Registry& reg) {
  Outcome o;
  for (int d : {4, 8, 12, 20}) {
    const auto start = Clock::now();
    const int n = d / 2;
    const ConvexBody cross = ConvexBody::cross_polytope(d);
    const CapacityBound b = cylinder_bound(cross, HolomorphicPlane::from(Vec::Ones(d)));
    const CapacityBound low = inradius_lower_bound(cross);
    const double g = gamma_ratio(cross, b, volume(cross, 0, 0));
    const double t = seconds_since(start);
    o.require(ulp_gap(b.value, kPi / n) <= 4, "bound pi/n at 2n=" + std::to_string(d));
    o.require(ulp_gap(low.value, kPi / (2 * n)) <= 4, "inradius bound pi/(2n)");
    o.require(ulp_gap(b.value / low.value, 2.0) <= 8, "ratio 2");
    o.require(g <= kPi / 2, "gamma <= pi/2");
    o.require(t < 1.0, "runtime < 1 s");
    reg.upper(cross, b.value, g);
    reg.lower(cross, low.value);
    o.detail << "2n=" << d << " gamma=" << g << " ";
  }
  return o;
}

Outcome criterion3(Registry& reg) {
  Outcome o;
  double worst = 0.0;
  for (int d : {8, 12}) {
    const int n = d / 2;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Vec diag = distortion(d, 300 + s + 10 * d);
      const ConvexBody k = ConvexBody::linear_image(diag.asDiagonal(), ConvexBody::cross_polytope(d));
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [name, plane] : deterministic_planes(k)) {
        if (name != "harmonic") continue;
        const CapacityBound b = cylinder_bound(k, plane);
        best = b.cylinder->radius.radius;
        reg.upper(k, b.value, gamma_ratio(k, b, volume(k, 0, 0)));
      }
      o.require(best <= 1 / std::sqrt(n) + 1e-9, "harmonic radius <= 1/sqrt(n)");
      worst = std::max(worst, best * std::sqrt(n));
    }
  }
  o.detail << "max radius*sqrt(n)=" << worst;
  return o;
}

Outcome criterion4(Registry& reg) {
  Outcome o;
  double max_res = 0.0, max_ratio = 1.0, min_ratio = 1.0, max_inv = 0.0;
  for (int d : {4, 6, 10}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Mat m = random_spd(d, 1000 * d + s);
      const WilliamsonForm w = williamson(m);
      max_res = std::max(max_res, w.residual);
      const SymplecticSpectrum spec = symplectic_spectrum(m);
      const double exact = kPi * spec.radii.front() * spec.radii.front();

      const ConvexBody e = ConvexBody::ellipsoid(m);
      PipelineOptions opt;
      opt.seed = s;
      opt.trials = 50;
      opt.budget = 100;
      const PipelineReport rep = main_pipeline(e, opt);
      o.require(rep.complete(), "pipeline completed");
      if (!rep.complete()) continue;
      const double ratio = rep.bound->value / exact;
      max_ratio = std::max(max_ratio, ratio);
      min_ratio = std::min(min_ratio, ratio);
      reg.upper(e, rep.bound->value, rep.gamma);
      reg.upper(e, exact);

      const Mat s0 = random_symplectic(d / 2, 5000 + s);
      const SymplecticSpectrum moved = symplectic_spectrum(s0.transpose() * m * s0);
      for (std::size_t k = 0; k < spec.radii.size(); ++k)
        max_inv = std::max(max_inv, std::abs(moved.radii[k] - spec.radii[k]) / spec.radii[k]);
    }
  }
  o.require(max_res <= 1e-8, "williamson residual");
  o.require(min_ratio >= 1.0 && max_ratio <= 1.0 + 1e-6, "pipeline ratio in [1, 1+1e-6]");
  o.require(max_inv <= 1e-8, "conjugation invariance");
  o.detail << "max residual=" << max_res << " ratio in [" << min_ratio << ", " << max_ratio
           << "] invariance=" << max_inv;
  return o;
}

Outcome criterion5() {
  Outcome o;
  double rec = 0, orth = 0, symp = 0, prod = 0;
  for (int d : {4, 8}) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Mat t = random_sl(d, 7000 + 100 * d + s);
      const WdsDecomposition w = wds_decompose(t);
      rec = std::max(rec, max_abs(w.w * w.d * w.s - t) / max_abs(t));
      orth = std::max(orth, max_abs(w.w.transpose() * w.w - Mat::Identity(d, d)));
      symp = std::max(symp, symplectic_defect(w.s));
      prod = std::max(prod, std::abs(w.r.prod() - 1.0));
    }
  }
  o.require(rec <= 1e-8, "reconstruction");
  o.require(orth <= 1e-9, "orthogonality");
  o.require(symp <= 1e-9, "symplecticity");
  o.require(prod <= 1e-9, "prod r = 1");
  o.detail << "reconstruction=" << rec << " orthogonality=" << orth << " symplectic=" << symp << " |prod r-1|=" << prod;
  return o;
}

Outcome criterion6(Registry& reg) {
  Outcome o;
  const int d = 10;
  for (const auto& k : {ConvexBody::cube(d), ConvexBody::cross_polytope(d), ConvexBody::lp_ball(d, 1.5),
                        ConvexBody::lp_ball(d, 3.0)}) {
    const WidthEstimate s = rademacher_exact(k);
    const PlaneSearchResult r = random_plane_search(k, 2000, PlaneSampler::cube_vertices, 61, 720, s);
    o.require(r.success_rate >= 1.0 / 3 - 3 * r.success_std_error, "success rate for " + k.label());
    reg.upper(k, r.best.value, gamma_ratio(k, r.best, volume(k, 0, 0)));
    o.detail << k.label() << ": " << r.success_rate << " ";
  }
  return o;
}

Outcome criterion7(Registry& reg) {
  Outcome o;
  const auto start = Clock::now();
  double worst_a3 = 0.0, worst_ury = 0.0;
  for (int d : {6, 10}) {
    for (const auto& k : acceptance_bodies(d)) {
      const WidthEstimate ms = mean_width(k, kDefaultSphereSamples, 71);
      const WidthEstimate ss = rademacher_exact(k);
      const double a3 = std::sqrt(kPi / 2) * ms.value * (1 + 5 * ms.relative_error());
      o.require(ss.value <= a3, "s* <= sqrt(pi/2) M* for " + k.label());
      worst_a3 = std::max(worst_a3, ss.value / (std::sqrt(kPi / 2) * ms.value));
      const VolumeResult v = volume(k, kDefaultSphereSamples, 72);
      const double vrad = std::pow(v.value / unit_ball_volume(d), 1.0 / d);
      const double rel = ms.relative_error() + (v.value > 0 ? v.std_error / v.value / d : 0.0);
      o.require(vrad <= ms.value * (1 + 4 * rel), "Urysohn for " + k.label());
      worst_ury = std::max(worst_ury, vrad / ms.value);
      reg.at(k);
    }
    const WidthEstimate b = mean_width(ConvexBody::ball(d), kDefaultSphereSamples, 73);
    o.require(std::abs(b.value - 1.0) <= 4 * b.std_error + 1e-12, "M*(B) = 1");
  }
  const double t = seconds_since(start);
  o.require(t < 30.0, "runtime < 30 s");
  o.detail << "max s*/(sqrt(pi/2)M*)=" << worst_a3 << " max vrad/M*=" << worst_ury << " (" << t << "s)";
  return o;
}

Outcome criterion8(Registry& reg) {
  Outcome o;
  double worst_gamma = 0.0;
  for (int d : {6, 10}) {
    for (double p : {1.25, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
      const ConvexBody k = ConvexBody::lp_ball(d, p);
      const PlaneSearchResult r = random_plane_search(k, 200, PlaneSampler::cube_vertices, 81);
      const double limit = p <= 2.0 ? 2 * kPi * std::pow(d, 1 - 2 / p) * (1 + 1e-6) : 2 * kPi;
      o.require(r.best.value <= limit, "bound for " + k.label());
      const double g = gamma_ratio(k, r.best, volume(k, 0, 0));
      o.require(g <= kPi / 2, "gamma <= pi/2 for " + k.label());
      worst_gamma = std::max(worst_gamma, g);
      reg.upper(k, r.best.value, g);
    }
  }
  o.detail << "max gamma=" << worst_gamma;
  return o;
}

Outcome criterion9(Registry& reg) {
  Outcome o;
  int gamma_checks = 0, sandwich_checks = 0, gamma_violations = 0, sandwich_violations = 0;
  for (auto& [label, e] : reg.entries()) {
    if (e.lower.empty()) e.lower.push_back(inradius_lower_bound(e.body).value);
    const double d = e.body.dim();
    for (double g : e.gamma) {
      ++gamma_checks;
      if (e.body.symmetric() && g > d) ++gamma_violations;
    }
    for (double lo : e.lower)
      for (double up : e.upper) {
        ++sandwich_checks;
        if (lo > up) {
          if (sandwich_violations == 0) o.detail << "e.g. " << label << " lower " << lo << " > upper " << up << "; ";
          ++sandwich_violations;
        }
      }
  }
  o.require(gamma_violations == 0, "gamma <= 2n");
  o.require(sandwich_violations == 0, "lower <= upper");
  o.detail << reg.entries().size() << " bodies, " << gamma_checks << " gamma checks, " << sandwich_checks
           << " sandwich checks, violations " << gamma_violations << "/" << sandwich_violations;
  return o;
}

Outcome criterion10(Registry& reg) {
  Outcome o;
  std::vector<std::pair<std::string, ConvexBody>> cases;
  for (int d : {4, 8, 16}) cases.emplace_back("zonotope", random_zonotope(d, 2 * d, 1100 + d));
  cases.emplace_back("schatten", ConvexBody::schatten_ball(2, 2.0));
  cases.emplace_back("schatten", ConvexBody::schatten_ball(4, 2.0));
  std::map<std::string, double> previous;
  for (const auto& [family, k] : cases) {
    PipelineOptions opt;
    opt.seed = 101;
    opt.mc_samples = 100000;
    const PipelineReport rep = main_pipeline(k, opt);
    o.require(rep.complete(), "pipeline for " + k.label());
    if (!rep.complete()) continue;
    o.require(*rep.gamma <= 10.0, "gamma <= 10 for " + k.label());
    reg.upper(k, rep.bound->value, rep.gamma);
    const char* trend = "";
    if (previous.count(family)) trend = *rep.gamma <= previous[family] ? " (non-increasing)" : " (increasing)";
    previous[family] = *rep.gamma;
    o.detail << family << " 2n=" << k.dim() << " gamma=" << *rep.gamma << trend << "; ";
  }
  return o;
}

Outcome criterion11() {
  Outcome o;
  const json cfg{{"bodies",
                  {{{"kind", "cube"}},
                   {{"kind", "lp_ball"}, {"p", 3}},
                   {{"kind", "zonotope"}, {"seed", 5}},
                   {{"kind", "ellipsoid"}, {"seed", 6}}}},
                 {"dims", {4, 6}},
                 {"methods", {"plane-search", "pipeline", "inradius"}},
                 {"seeds", {1, 2}},
                 {"budgets", {{"mc_samples", 20000}, {"search_trials", 60}, {"position_budget", 80}, {"grid_m", 720}}}};
  const RunRecord first = run(ExperimentConfig::from_json(cfg));
  const RunRecord stored = RunRecord::from_json(json::parse(first.to_json().dump()));
  set_thread_count(1);
  const RunRecord replay = run(ExperimentConfig::from_json(stored.config));
  set_thread_count(0);
  o.require(replay.config_hash == stored.config_hash, "config hash");
  o.require(replay.cells.size() == stored.cells.size(), "cell count");
  int compared = 0;
  for (std::size_t i = 0; i < std::min(replay.cells.size(), stored.cells.size()); ++i) {
    const auto& a = stored.cells[i];
    const auto& b = replay.cells[i];
    o.require(a.status == "ok" && b.status == "ok", "cell status");
    o.require(a.bound == b.bound, "bound bits");
    const json ca = a.detail.contains("best") ? a.detail.at("best") : a.detail.value("bound", a.detail);
    const json cb = b.detail.contains("best") ? b.detail.at("best") : b.detail.value("bound", b.detail);
    o.require(ca == cb, "certificate bits");
    if (a.volume_exact) o.require(a.volume == b.volume && a.gamma == b.gamma, "exact volume/gamma bits");
    ++compared;
  }
  o.detail << compared << " cells replayed";
  return o;
}

}  // namespace

int main() {
  Registry reg;
  int failures = 0;
  auto report_line = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %2d %-28s %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.str().c_str(),
                seconds_since(start));
    std::fflush(stdout);
  };
  report_line(1, "cube", [&] { return criterion1(reg); });
  report_line(2, "cross-polytope", [&] { return criterion2(reg); });
  report_line(3, "distorted cross-polytope", [&] { return criterion3(reg); });
  report_line(4, "ellipsoids", [&] { return criterion4(reg); });
  report_line(5, "wds decomposition", [] { return criterion5(); });
  report_line(6, "markov success rate", [&] { return criterion6(reg); });
  report_line(7, "width relations", [&] { return criterion7(reg); });
  report_line(8, "lp bounds", [&] { return criterion8(reg); });
  report_line(10, "zonotope/schatten gamma", [&] { return criterion10(reg); });
  report_line(9, "gamma and sandwich", [&] { return criterion9(reg); });
  report_line(11, "determinism", [] { return criterion11(); });
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
