#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symcap/body_json.hpp"
#include "symcap/capacity.hpp"
#include "symcap/error.hpp"
#include "symcap/experiment.hpp"
#include "symcap/parallel.hpp"
#include "symcap/positions.hpp"
#include "symcap/serialize.hpp"
#include "symcap/symplect.hpp"
#include "symcap/widths.hpp"

using nlohmann::json;
using namespace symcap;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kPartial = 4 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON, or @path to read it from a file.
json parse_arg(const std::string& text, const std::string& field) {
  try {
    return json::parse(!text.empty() && text[0] == '@' ? slurp(text.substr(1)) : text);
  } catch (const json::parse_error& e) {
    throw ConfigError(field, e.what());
  }
}

Mat square_matrix(const json& j) {
  std::size_t count = j.size();
  if (!j.empty() && j[0].is_array()) count = j.size() * j[0].size();
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
  if (n * n != static_cast<int>(count)) throw ConfigError("matrix", "expected a square matrix");
  return matrix_from_json(j, n, n, "matrix");
}

struct Output {
  std::string path;
  void emit(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("output", "cannot open " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
};

std::vector<int> parse_dims(const std::string& spec) {
  // "4,8,12" or "4:20:4"
  std::vector<int> dims;
  if (spec.find(':') != std::string::npos) {
    int lo = 0, hi = 0, step = 2;
    if (std::sscanf(spec.c_str(), "%d:%d:%d", &lo, &hi, &step) < 2 || step <= 0)
      throw ConfigError("dims", "expected lo:hi[:step]");
    for (int d = lo; d <= hi; d += step) dims.push_back(d);
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
  }
  return dims;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified linear cylindrical capacity bounds for convex bodies"};
  app.require_subcommand(0, 1);
  std::string config_path;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  Output output;
  app.add_option("--config", config_path, "Experiment config (JSON); runs it when no subcommand is given");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--threads", threads, "Worker threads (0: all cores)");
  app.add_option("--output", output.path, "Write the result here instead of stdout");
  app.fallthrough();

  std::string body_text;
  int grid = default_tolerances().default_grid;
  long trials = 500;

  auto* bound_cmd = app.add_subcommand("bound", "Certified capacity bound for one body");
  std::string method = "plane-search";
  std::string sampler = "cube_vertices";
  double eps = 0.01;
  bound_cmd->add_option("--body", body_text, "Body description (JSON or @file)")->required();
  bound_cmd->add_option("--method", method, "plane-search | lowner | ellipsoid | inradius");
  bound_cmd->add_option("--trials", trials, "Random planes for plane-search");
  bound_cmd->add_option("--grid", grid, "Angles for grid-certified circumradii");
  bound_cmd->add_option("--sampler", sampler, "sphere | cube_vertices");
  bound_cmd->add_option("--eps", eps, "Lowner ellipsoid accuracy");

  auto* width_cmd = app.add_subcommand("width", "Mean width M*, mean norm M, or Rademacher average s*");
  std::string width_kind = "mstar";
  long samples = kDefaultSphereSamples;
  bool exact = false;
  width_cmd->add_option("--body", body_text, "Body description (JSON or @file)")->required();
  width_cmd->add_option("--kind", width_kind, "mstar | m | sstar");
  width_cmd->add_option("--samples", samples, "Monte Carlo samples");
  width_cmd->add_flag("--exact", exact, "Enumerate all cube vertices (sstar only)");

  std::string matrix_text;
  auto* decompose_cmd = app.add_subcommand("decompose", "T = W D S split of an invertible matrix");
  decompose_cmd->add_option("--matrix", matrix_text, "Row-major flat or nested JSON (or @file)")->required();

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Symplectic spectrum of {x : <Mx, x> <= 1}");
  spectrum_cmd->add_option("--matrix", matrix_text, "Positive definite M (JSON or @file)")->required();

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Position search, WDS split and certified plane");
  PipelineOptions popt;
  pipeline_cmd->add_option("--body", body_text, "Body description (JSON or @file)")->required();
  pipeline_cmd->add_option("--budget", popt.budget, "Objective evaluations for the position search");
  pipeline_cmd->add_option("--trials", popt.trials, "Cube vertices tried for the plane");
  pipeline_cmd->add_option("--grid", popt.grid_m, "Angles for grid-certified circumradii");
  pipeline_cmd->add_option("--mc-samples", popt.mc_samples, "Monte Carlo volume samples");

  auto* sweep_cmd = app.add_subcommand("sweep", "Pipeline over a body family and a dimension range (CSV)");
  std::string dims_text = "4,8,12";
  std::string sweep_format = "csv";
  Budgets budgets;
  sweep_cmd->add_option("--body", body_text, "Body family (JSON without dim, or @file)")->required();
  sweep_cmd->add_option("--dims", dims_text, "Dimensions: 4,8,12 or lo:hi:step");
  sweep_cmd->add_option("--budget", budgets.position_budget, "Objective evaluations for the position search");
  sweep_cmd->add_option("--trials", budgets.search_trials, "Cube vertices tried for the plane");
  sweep_cmd->add_option("--grid", budgets.grid_m, "Angles for grid-certified circumradii");
  sweep_cmd->add_option("--mc-samples", budgets.mc_samples, "Monte Carlo volume samples");
  sweep_cmd->add_option("--format", sweep_format, "csv | json");

  auto* report_cmd = app.add_subcommand("report", "Gamma-vs-n tables from run records");
  std::vector<std::string> record_paths;
  std::string report_format = "text";
  report_cmd->add_option("records", record_paths, "Run record JSON files")->required();
  report_cmd->add_option("--format", report_format, "text | csv");

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    set_thread_count(threads);
    if (*bound_cmd) {
      const ConvexBody body = body_from_json(parse_arg(body_text, "body"));
      json out;
      if (method == "plane-search") {
        if (sampler != "sphere" && sampler != "cube_vertices") throw ConfigError("sampler", "unknown sampler");
        const auto r = random_plane_search(body, trials, sampler == "sphere" ? PlaneSampler::sphere
                                                                             : PlaneSampler::cube_vertices,
                                           seed, grid);
        out = to_json(r.best);
        out["search"] = to_json(r);
        out["search"].erase("best");
      } else if (method == "lowner") {
        out = to_json(lowner_baseline(body, eps));
      } else if (method == "ellipsoid") {
        const auto* e = std::get_if<ConvexBody::Ellipsoid>(&body.params());
        if (!e) throw ConfigError("method", "ellipsoid needs an ellipsoid body");
        out = to_json(ellipsoid_capacity(e->form));
      } else if (method == "inradius") {
        out = to_json(inradius_lower_bound(body));
      } else {
        throw ConfigError("method", "unknown method \"" + method + "\"");
      }
      output.emit(out.dump(2));
      return kOk;
    }
    if (*width_cmd) {
      const ConvexBody body = body_from_json(parse_arg(body_text, "body"));
      WidthEstimate w;
      if (width_kind == "mstar") w = mean_width(body, samples, seed);
      else if (width_kind == "m") w = mean_norm(body, samples, seed);
      else if (width_kind == "sstar") w = exact ? rademacher_exact(body) : rademacher_mc(body, samples, seed);
      else throw ConfigError("kind", "unknown width kind \"" + width_kind + "\"");
      output.emit(to_json(w).dump(2));
      return kOk;
    }
    if (*decompose_cmd) {
      output.emit(to_json(wds_decompose(square_matrix(parse_arg(matrix_text, "matrix")))).dump(2));
      return kOk;
    }
    if (*spectrum_cmd) {
      const Mat m = square_matrix(parse_arg(matrix_text, "matrix"));
      const auto spec = symplectic_spectrum(m);
      json out{{"radii", spec.radii}, {"s", matrix_to_json(spec.s)}, {"capacity", to_json(ellipsoid_capacity(m))}};
      output.emit(out.dump(2));
      return kOk;
    }
    if (*pipeline_cmd) {
      const ConvexBody body = body_from_json(parse_arg(body_text, "body"));
      popt.seed = seed;
      const PipelineReport rep = main_pipeline(body, popt);
      output.emit(to_json(rep).dump(2));
      return rep.complete() ? kOk : kPartial;
    }
    if (*sweep_cmd) {
      ExperimentConfig cfg;
      cfg.bodies.push_back(parse_arg(body_text, "body"));
      cfg = ExperimentConfig::from_json(
          {{"bodies", cfg.bodies}, {"dims", parse_dims(dims_text)}, {"methods", {"pipeline"}}, {"seeds", {seed}}});
      cfg.budgets = budgets;
      const RunRecord rec = run(cfg);
      output.emit(sweep_format == "json" ? rec.to_json().dump(2) : sweep_csv(rec));
      return rec.partial_failure() ? kPartial : kOk;
    }
    if (*report_cmd) {
      std::vector<RunRecord> records;
      for (const auto& p : record_paths) records.push_back(RunRecord::from_json(parse_arg("@" + p, p)));
      const ReportDocument doc = report(records);
      output.emit(report_format == "csv" ? doc.csv : doc.text);
      return kOk;
    }
    if (*run_cmd || !config_path.empty()) {
      if (config_path.empty()) throw ConfigError("config", "run needs --config");
      ExperimentConfig cfg = ExperimentConfig::from_json(parse_arg("@" + config_path, "config"));
      if (!output.path.empty()) cfg.output.path = output.path;
      const RunRecord rec = run(cfg);
      std::cout << summary_table(rec);
      if (cfg.output.path.empty()) std::cout << rec.to_json().dump(2) << '\n';
      return rec.partial_failure() ? kPartial : kOk;
    }
    std::cout << app.help();
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
