#include "symcap/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "symcap/body_json.hpp"
#include "symcap/capacity.hpp"
#include "symcap/parallel.hpp"
#include "symcap/positions.hpp"
#include "symcap/random.hpp"
#include "symcap/serialize.hpp"

namespace symcap {

using nlohmann::json;

namespace {

const std::set<std::string> kBodyKinds{"ball",           "cube",         "cross_polytope", "lp_ball",
                                       "ellipsoid",      "zonotope",     "vertex_polytope", "simplex",
                                       "schatten_ball",  "linear_image", "difference_body"};

const std::set<std::string> kConfigKeys{"bodies", "dims", "methods", "seeds", "budgets", "output"};

constexpr double kLownerEps = 0.01;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string exact_number(const std::optional<double>& v) { return v ? fmt("%.17g", *v) : ""; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void validate_body(const json& b, const std::string& field) {
  if (!b.is_object()) throw ConfigError(field, "expected an object");
  if (!b.contains("kind") || !b.at("kind").is_string()) throw ConfigError(field + ".kind", "missing field");
  const auto kind = b.at("kind").get<std::string>();
  if (!kBodyKinds.count(kind)) throw ConfigError(field + ".kind", "unknown body kind \"" + kind + "\"");
  if (b.contains("inner")) validate_body(b.at("inner"), field + ".inner");
}

template <typename T>
T positive(const json& j, const char* key, T fallback, const std::string& field) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(field + "." + key, "expected an integer");
  const T v = j.at(key).get<T>();
  if (v < 1) throw ConfigError(field + "." + key, "must be positive");
  return v;
}

// Form of an ellipsoid body (possibly a linear image of a ball or ellipsoid).
Mat ellipsoid_form(const ConvexBody& body) {
  const int d = body.dim();
  if (const auto* b = std::get_if<ConvexBody::Ball>(&body.params()))
    return Mat::Identity(d, d) / (b->radius * b->radius);
  if (const auto* e = std::get_if<ConvexBody::Ellipsoid>(&body.params())) return e->form;
  if (const auto* img = std::get_if<ConvexBody::Image>(&body.params())) {
    const Mat inner = ellipsoid_form(*img->inner);
    const Mat inv = img->lu.inverse();
    const Mat f = inv.transpose() * inner * inv;
    return 0.5 * (f + f.transpose());
  }
  throw InputError("method ellipsoid needs an ellipsoid, got " + body.label());
}

void run_cell(const json& desc, CellResult& cell, const Budgets& budgets) {
  const ConvexBody body = body_from_json(desc, cell.dim);
  const std::uint64_t seed = cell.seed;
  std::optional<CapacityBound> bound;
  bool want_gamma = true;
  switch (method_from_string(cell.method)) {
    case Method::plane_search: {
      const auto r = random_plane_search(body, budgets.search_trials, PlaneSampler::cube_vertices, seed, budgets.grid_m);
      cell.detail = to_json(r);
      bound = r.best;
      break;
    }
    case Method::lowner:
      bound = lowner_baseline(body, kLownerEps);
      cell.detail = to_json(*bound);
      break;
    case Method::ellipsoid:
      bound = ellipsoid_capacity(ellipsoid_form(body));
      bound->body_id = body.label();
      cell.detail = to_json(*bound);
      break;
    case Method::inradius:
      bound = inradius_lower_bound(body);
      cell.detail = to_json(*bound);
      want_gamma = false;
      break;
    case Method::pipeline: {
      PipelineOptions opt;
      opt.budget = budgets.position_budget;
      opt.trials = budgets.search_trials;
      opt.seed = seed;
      opt.grid_m = budgets.grid_m;
      opt.mc_samples = budgets.mc_samples;
      const PipelineReport rep = main_pipeline(body, opt);
      cell.detail = to_json(rep);
      if (rep.bound) {
        cell.bound = rep.bound->value;
        cell.bound_kind = to_string(rep.bound->kind);
      }
      if (rep.volume) {
        cell.volume = rep.volume->value;
        cell.volume_std_error = rep.volume->std_error;
        cell.volume_exact = rep.volume->exactness == Exactness::exact;
      }
      cell.gamma = rep.gamma;
      if (rep.error) throw NumericalError("pipeline stage " + rep.failed_stage.value_or("?") + ": " + *rep.error, 0.0);
      return;
    }
  }
  cell.bound = bound->value;
  cell.bound_kind = to_string(bound->kind);
  if (want_gamma) {
    const VolumeResult vol = volume(body, budgets.mc_samples, derive_seed(seed, 3));
    cell.volume = vol.value;
    cell.volume_std_error = vol.std_error;
    cell.volume_exact = vol.exactness == Exactness::exact;
    cell.gamma = gamma_ratio(body, *bound, vol);
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::plane_search: return "plane-search";
    case Method::lowner: return "lowner";
    case Method::ellipsoid: return "ellipsoid";
    case Method::inradius: return "inradius";
    case Method::pipeline: return "pipeline";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (auto m : {Method::plane_search, Method::lowner, Method::ellipsoid, Method::inradius, Method::pipeline})
    if (to_string(m) == s) return m;
  throw ConfigError("methods", "unknown method \"" + s + "\"");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected an object");
  for (const auto& [key, _] : j.items())
    if (!kConfigKeys.count(key)) throw ConfigError(key, "unknown config field");
  ExperimentConfig c;
  try {
    if (j.contains("bodies")) {
      const json& bodies = j.at("bodies");
      if (!bodies.is_array()) throw ConfigError("bodies", "expected an array");
      for (std::size_t i = 0; i < bodies.size(); ++i) {
        validate_body(bodies[i], "bodies[" + std::to_string(i) + "]");
        c.bodies.push_back(bodies[i]);
      }
    }
    if (j.contains("dims")) {
      for (const auto& d : j.at("dims")) {
        if (!d.is_number_integer()) throw ConfigError("dims", "expected integers");
        const int v = d.get<int>();
        if (v < 2 || v % 2 != 0) throw ConfigError("dims", "dimension " + std::to_string(v) + " is not even and >= 2");
        c.dims.push_back(v);
      }
    }
    if (j.contains("methods")) {
      for (const auto& m : j.at("methods")) {
        if (!m.is_string()) throw ConfigError("methods", "expected strings");
        c.methods.push_back(method_from_string(m.get<std::string>()));
      }
    }
    if (j.contains("seeds")) {
      c.seeds.clear();
      for (const auto& s : j.at("seeds")) {
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0)
          throw ConfigError("seeds", "expected non-negative integers");
        c.seeds.push_back(s.get<std::uint64_t>());
      }
    }
    if (j.contains("budgets")) {
      const json& b = j.at("budgets");
      if (!b.is_object()) throw ConfigError("budgets", "expected an object");
      for (const auto& [key, _] : b.items())
        if (key != "mc_samples" && key != "search_trials" && key != "position_budget" && key != "grid_m")
          throw ConfigError("budgets." + key, "unknown budget");
      c.budgets.mc_samples = positive<long>(b, "mc_samples", c.budgets.mc_samples, "budgets");
      c.budgets.search_trials = positive<long>(b, "search_trials", c.budgets.search_trials, "budgets");
      c.budgets.position_budget = positive<int>(b, "position_budget", c.budgets.position_budget, "budgets");
      c.budgets.grid_m = positive<int>(b, "grid_m", c.budgets.grid_m, "budgets");
      if (c.budgets.grid_m < 8) throw ConfigError("budgets.grid_m", "must be at least 8");
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      if (!o.is_object()) throw ConfigError("output", "expected an object");
      c.output.path = o.value("path", std::string());
      c.output.format = o.value("format", std::string("json"));
      if (c.output.format != "json" && c.output.format != "csv")
        throw ConfigError("output.format", "expected json or csv");
    }
  } catch (const json::exception& e) {
    throw ConfigError("config", e.what());
  }
  for (std::size_t i = 0; i < c.bodies.size(); ++i)
    if (!c.bodies[i].contains("dim") && c.dims.empty() && c.bodies[i].value("kind", "") != "schatten_ball")
      throw ConfigError("dims", "body " + std::to_string(i) + " has no dim and the config lists no dims");
  return c;
}

json ExperimentConfig::to_json() const {
  json methods_json = json::array();
  for (auto m : methods) methods_json.push_back(symcap::to_string(m));
  return {{"bodies", bodies},
          {"dims", dims},
          {"methods", methods_json},
          {"seeds", seeds},
          {"budgets",
           {{"mc_samples", budgets.mc_samples},
            {"search_trials", budgets.search_trials},
            {"position_budget", budgets.position_budget},
            {"grid_m", budgets.grid_m}}},
          {"output", {{"path", output.path}, {"format", output.format}}}};
}

std::string ExperimentConfig::hash() const {
  json canonical = to_json();
  canonical.erase("output");  // where results go does not change them
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool RunRecord::partial_failure() const {
  return std::any_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.status != "ok"; });
}

json RunRecord::to_json() const {
  json cells_json = json::array();
  for (const auto& c : cells) {
    cells_json.push_back({{"family", c.family},
                          {"dim", c.dim},
                          {"seed", c.seed},
                          {"method", c.method},
                          {"status", c.status},
                          {"error", c.error ? json(*c.error) : json(nullptr)},
                          {"bound", optional_number(c.bound)},
                          {"bound_kind", c.bound_kind},
                          {"gamma", optional_number(c.gamma)},
                          {"volume", optional_number(c.volume)},
                          {"volume_std_error", optional_number(c.volume_std_error)},
                          {"volume_exact", c.volume_exact},
                          {"wall_time", c.wall_time},
                          {"detail", c.detail}});
  }
  return {{"schema_version", schema_version}, {"config_hash", config_hash}, {"timestamp", timestamp},
          {"tool_version", tool_version},     {"config", config},           {"cells", cells_json}};
}

RunRecord RunRecord::from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version")) throw SchemaError("not a run record");
  RunRecord r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion)
      throw SchemaError("unsupported schema version " + std::to_string(r.schema_version));
    r.config_hash = j.value("config_hash", std::string());
    r.timestamp = j.value("timestamp", std::string());
    r.tool_version = j.value("tool_version", std::string());
    r.config = j.value("config", json::object());
    for (const auto& c : j.at("cells")) {
      CellResult cell;
      cell.family = c.at("family").get<std::string>();
      cell.dim = c.at("dim").get<int>();
      cell.seed = c.at("seed").get<std::uint64_t>();
      cell.method = c.at("method").get<std::string>();
      cell.status = c.at("status").get<std::string>();
      if (c.contains("error") && !c.at("error").is_null()) cell.error = c.at("error").get<std::string>();
      cell.bound = number_or_null(c, "bound");
      cell.bound_kind = c.value("bound_kind", std::string());
      cell.gamma = number_or_null(c, "gamma");
      cell.volume = number_or_null(c, "volume");
      cell.volume_std_error = number_or_null(c, "volume_std_error");
      cell.volume_exact = c.value("volume_exact", false);
      cell.wall_time = c.value("wall_time", 0.0);
      cell.detail = c.value("detail", json());
      r.cells.push_back(std::move(cell));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed run record: ") + e.what());
  }
  return r;
}

RunRecord run(const ExperimentConfig& config) {
  RunRecord rec;
  rec.config = config.to_json();
  rec.config_hash = config.hash();
  rec.timestamp = utc_timestamp();

  struct Job {
    std::size_t body;
  };
  std::vector<Job> jobs;
  for (std::size_t b = 0; b < config.bodies.size(); ++b) {
    const json& desc = config.bodies[b];
    std::vector<int> dims;
    if (desc.contains("dim")) {
      dims.push_back(desc.at("dim").get<int>());
    } else if (desc.value("kind", "") == "schatten_ball" && desc.contains("m")) {
      const int m = desc.at("m").get<int>();
      dims.push_back(m * m);
    } else {
      dims = config.dims;
    }
    for (int d : dims)
      for (auto seed : config.seeds)
        for (auto method : config.methods) {
          CellResult cell;
          cell.family = family_name(desc);
          cell.dim = d;
          cell.seed = seed;
          cell.method = to_string(method);
          rec.cells.push_back(std::move(cell));
          jobs.push_back({b});
        }
  }

  parallel_for(rec.cells.size(), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CellResult& cell = rec.cells[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        run_cell(config.bodies[jobs[i].body], cell, config.budgets);
      } catch (const std::exception& e) {
        cell.status = "error";
        cell.error = e.what();
      }
      cell.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });

  if (!config.output.path.empty()) {
    std::ofstream out(config.output.path);
    if (!out) throw ConfigError("output.path", "cannot open " + config.output.path);
    if (config.output.format == "csv") out << cells_csv(rec);
    else out << rec.to_json().dump(2) << "\n";
  }
  return rec;
}

std::string summary_table(const RunRecord& record) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %4s %8s %-13s %14s %12s  %s\n", "family", "n", "seed", "method", "bound",
                "gamma", "status");
  os << line;
  for (const auto& c : record.cells) {
    std::snprintf(line, sizeof line, "%-24s %4d %8llu %-13s %14s %12s  %s\n", c.family.c_str(), c.dim / 2,
                  static_cast<unsigned long long>(c.seed), c.method.c_str(),
                  c.bound ? fmt("%.8g", *c.bound).c_str() : "-", c.gamma ? fmt("%.6g", *c.gamma).c_str() : "-",
                  c.status.c_str());
    os << line;
  }
  return os.str();
}

std::string cells_csv(const RunRecord& record) {
  std::ostringstream os;
  os << "family,dim,n,seed,method,status,bound_kind,bound,gamma,volume,wall_time\n";
  for (const auto& c : record.cells) {
    os << c.family << ',' << c.dim << ',' << c.dim / 2 << ',' << c.seed << ',' << c.method << ',' << c.status << ','
       << c.bound_kind << ',' << exact_number(c.bound) << ',' << exact_number(c.gamma) << ','
       << exact_number(c.volume) << ',' << fmt("%.6f", c.wall_time) << '\n';
  }
  return os.str();
}

ReportDocument report(const std::vector<RunRecord>& records) {
  if (records.empty()) throw SchemaError("report needs at least one record");
  ReportDocument doc;
  for (const auto& r : records) {
    if (r.schema_version != records.front().schema_version) throw SchemaError("records have mixed schema versions");
    if (r.schema_version != kSchemaVersion) throw SchemaError("unsupported schema version");
    for (const auto& c : r.cells) {
      if (c.dim < 2 || c.dim % 2 != 0) throw SchemaError("cell with invalid dimension " + std::to_string(c.dim));
      if (!c.gamma) continue;
      ReportRow row;
      row.family = c.family;
      row.method = c.method;
      row.n = c.dim / 2;
      row.gamma = *c.gamma;
      row.two_n = c.dim;
      row.log_sq = std::log(row.n) * std::log(row.n);
      row.flagged = row.gamma > row.two_n;
      doc.flagged += row.flagged ? 1 : 0;
      doc.rows.push_back(row);
    }
  }
  std::stable_sort(doc.rows.begin(), doc.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.family, a.method, a.n) < std::tie(b.family, b.method, b.n);
  });

  std::ostringstream csv;
  csv << "family,method,n,gamma,2n,log^2(n),flag\n";
  std::ostringstream text;
  std::string current;
  char line[160];
  for (const auto& r : doc.rows) {
    csv << r.family << ',' << r.method << ',' << r.n << ',' << fmt("%.17g", r.gamma) << ',' << r.two_n << ','
        << fmt("%.17g", r.log_sq) << ',' << (r.flagged ? "GAMMA_EXCEEDS_2N" : "") << '\n';
    const std::string key = r.family + " / " + r.method;
    if (key != current) {
      if (!current.empty()) text << '\n';
      text << key << '\n';
      std::snprintf(line, sizeof line, "  %4s %12s %6s %10s\n", "n", "gamma", "2n", "log^2(n)");
      text << line;
      current = key;
    }
    std::snprintf(line, sizeof line, "  %4d %12.6g %6g %10.4g%s\n", r.n, r.gamma, r.two_n, r.log_sq,
                  r.flagged ? "  <-- gamma > 2n" : "");
    text << line;
  }
  if (doc.flagged) text << "\n" << doc.flagged << " row(s) with gamma > 2n\n";
  doc.csv = csv.str();
  doc.text = text.str();
  return doc;
}

std::string sweep_csv(const RunRecord& record) {
  std::ostringstream os;
  os << "family,n,bound,volume,gamma,two_n_baseline\n";
  for (const auto& c : record.cells) {
    if (c.method != to_string(Method::pipeline)) continue;
    os << c.family << ',' << c.dim / 2 << ',' << exact_number(c.bound) << ',' << exact_number(c.volume) << ','
       << exact_number(c.gamma) << ',' << c.dim << '\n';
  }
  return os.str();
}

}  // namespace symcap
