#include "symcap/serialize.hpp"

#include "symcap/body_json.hpp"
#include "symcap/error.hpp"

namespace symcap {

using nlohmann::json;

namespace {

Vec vec_from_json(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Mat square_from_json(const json& j) {
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(j.size()))));
  return matrix_from_json(j, n, n, "matrix");
}

BoundKind bound_kind_from_string(const std::string& s) {
  for (auto k : {BoundKind::upper_cylinder, BoundKind::lower_ball, BoundKind::exact_ellipsoid, BoundKind::upper_lowner})
    if (to_string(k) == s) return k;
  throw ConfigError("kind", "unknown bound kind \"" + s + "\"");
}

RadiusMode radius_mode_from_string(const std::string& s) {
  for (auto m : {RadiusMode::polygon, RadiusMode::ellipse, RadiusMode::grid})
    if (to_string(m) == s) return m;
  throw ConfigError("mode", "unknown radius mode \"" + s + "\"");
}

}  // namespace

json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const WidthEstimate& w) {
  return {{"kind", to_string(w.kind)}, {"value", w.value},   {"std_error", w.std_error},
          {"samples", w.samples},      {"seed", w.seed},     {"exact", w.exact}};
}

json to_json(const VolumeResult& v) {
  return {{"value", v.value},
          {"exact", v.exactness == Exactness::exact},
          {"std_error", v.std_error},
          {"samples", v.samples},
          {"seed", v.seed},
          {"method", v.method},
          {"fallback_to_monte_carlo", v.fallback_to_monte_carlo}};
}

json to_json(const CertifiedRadius& r) {
  return {{"radius", r.radius}, {"radius_sq", r.radius_sq}, {"mode", to_string(r.mode)}, {"grid_m", r.grid_m}};
}

json to_json(const CapacityBound& b) {
  json j{{"kind", to_string(b.kind)}, {"value", b.value}, {"body_id", b.body_id}, {"provenance", b.provenance}};
  json cert = json::object();
  if (b.cylinder) {
    cert["v"] = to_json(b.cylinder->v);
    cert["jv"] = to_json(b.cylinder->jv);
    cert["circumradius"] = to_json(b.cylinder->radius);
    if (b.cylinder->position.size()) cert["position"] = matrix_to_json(b.cylinder->position);
  }
  if (b.ball) {
    cert["inradius"] = b.ball->inradius;
    cert["witness"] = to_json(b.ball->witness);
    cert["certified"] = b.ball->certified;
  }
  if (b.spectrum) {
    cert["radii"] = b.spectrum->radii;
    cert["s"] = matrix_to_json(b.spectrum->s);
    cert["form"] = matrix_to_json(b.spectrum->form);
    cert["center"] = to_json(b.spectrum->center);
  }
  j["certificate"] = cert;
  return j;
}

CapacityBound bound_from_json(const json& j) {
  CapacityBound b;
  b.kind = bound_kind_from_string(j.at("kind").get<std::string>());
  b.value = j.at("value").get<double>();
  b.body_id = j.value("body_id", std::string());
  b.provenance = j.value("provenance", std::string());
  const json& c = j.at("certificate");
  if (c.contains("v")) {
    CylinderCertificate cc;
    cc.v = vec_from_json(c.at("v"));
    cc.jv = vec_from_json(c.at("jv"));
    const json& r = c.at("circumradius");
    cc.radius.radius = r.at("radius").get<double>();
    cc.radius.radius_sq = r.at("radius_sq").get<double>();
    cc.radius.mode = radius_mode_from_string(r.at("mode").get<std::string>());
    cc.radius.grid_m = r.at("grid_m").get<int>();
    if (c.contains("position")) cc.position = square_from_json(c.at("position"));
    b.cylinder = std::move(cc);
  }
  if (c.contains("inradius")) {
    BallCertificate bc;
    bc.inradius = c.at("inradius").get<double>();
    bc.witness = vec_from_json(c.at("witness"));
    bc.certified = c.at("certified").get<bool>();
    b.ball = std::move(bc);
  }
  if (c.contains("radii")) {
    SpectrumCertificate sc;
    sc.radii = c.at("radii").get<std::vector<double>>();
    sc.s = square_from_json(c.at("s"));
    sc.form = square_from_json(c.at("form"));
    sc.center = vec_from_json(c.at("center"));
    b.spectrum = std::move(sc);
  }
  return b;
}

json to_json(const PlaneSearchResult& r) {
  return {{"best", to_json(r.best)},
          {"best_source", r.best_source},
          {"trials", r.trials},
          {"successes", r.successes},
          {"success_rate", r.success_rate},
          {"success_std_error", r.success_std_error},
          {"width", to_json(r.width)}};
}

json to_json(const WdsDecomposition& w) {
  return {{"w", matrix_to_json(w.w)},
          {"d", matrix_to_json(w.d)},
          {"s", matrix_to_json(w.s)},
          {"r", to_json(w.r)},
          {"reconstruction_residual", w.reconstruction_residual},
          {"orthogonality_residual", w.orthogonality_residual},
          {"symplectic_residual", w.symplectic_residual}};
}

json to_json(const WilliamsonForm& w) {
  return {{"s", matrix_to_json(w.s)}, {"d", to_json(w.d)}, {"residual", w.residual}};
}

json to_json(const PositionSearchResult& p) {
  json trace = json::array();
  for (const auto& [step, value] : p.trace) trace.push_back({step, value});
  return {{"t", matrix_to_json(p.t)},
          {"mstar_before", to_json(p.mstar_before)},
          {"mstar_after", to_json(p.mstar_after)},
          {"trace", trace},
          {"seed", p.seed},
          {"evaluations", p.evaluations}};
}

json to_json(const PlaneChoice& p) {
  return {{"v", to_json(p.plane.v())},
          {"jv", to_json(p.plane.jv())},
          {"cube_vertex", to_json(p.v)},
          {"qualified", p.qualified},
          {"max_support", p.max_support},
          {"sstar", to_json(p.sstar)},
          {"circumradius", to_json(p.radius)},
          {"source", p.source}};
}

json to_json(const PipelineReport& r) {
  json j{{"body_id", r.body_id},
         {"symmetrized", r.symmetrized},
         {"volume_factor", r.volume_factor},
         {"route", r.route},
         {"stages", r.stages},
         {"overlays", {{"two_n_baseline", r.two_n_baseline}, {"log_sq_curve", r.log_sq_curve}}}};
  if (r.position) j["position"] = to_json(*r.position);
  if (r.wds) j["wds"] = to_json(*r.wds);
  if (r.plane) j["plane"] = to_json(*r.plane);
  if (r.bound) j["bound"] = to_json(*r.bound);
  if (r.volume) j["volume"] = to_json(*r.volume);
  if (r.gamma) j["gamma"] = *r.gamma;
  if (r.error) {
    j["error"] = *r.error;
    j["failed_stage"] = r.failed_stage.value_or("");
  }
  return j;
}

}  // namespace symcap
