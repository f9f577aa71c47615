#include "symcap/body_json.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "symcap/error.hpp"
#include "symcap/random.hpp"
#include "symcap/symplect.hpp"

namespace symcap {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* field) {
  if (!j.contains(field)) throw ConfigError(field, "missing field");
  return j.at(field);
}

double number(const json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  const json& v = j.at(field);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ConfigError(field, "expected a number, got \"" + s + "\"");
  }
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  return v.get<double>();
}

Mat columns_from_json(const json& j, int dim, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of vectors");
  Mat m(dim, static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    const json& col = j[c];
    if (!col.is_array() || static_cast<int>(col.size()) != dim)
      throw ConfigError(field, "every vector must have length " + std::to_string(dim));
    for (int r = 0; r < dim; ++r) m(r, static_cast<Eigen::Index>(c)) = col[r].get<double>();
  }
  return m;
}

json columns_to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    json col = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    out.push_back(col);
  }
  return out;
}

int dimension(const json& j, std::optional<int> dim) {
  if (j.contains("dim")) return j.at("dim").get<int>();
  if (dim) return *dim;
  throw ConfigError("dim", "missing field");
}

}  // namespace

json matrix_to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

Mat matrix_from_json(const json& j, int rows, int cols, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected a row-major array");
  if (!j.empty() && j[0].is_array()) {  // nested rows also accepted
    if (static_cast<int>(j.size()) != rows) throw ConfigError(field, "wrong number of rows");
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      if (static_cast<int>(j[r].size()) != cols) throw ConfigError(field, "wrong number of columns");
      for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
  }
  if (static_cast<long>(j.size()) != static_cast<long>(rows) * cols)
    throw ConfigError(field, "expected " + std::to_string(rows * cols) + " entries");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = j[static_cast<std::size_t>(r * cols + c)].get<double>();
  return m;
}

ConvexBody body_from_json(const json& j, std::optional<int> dim) {
  if (!j.is_object()) throw ConfigError("body", "expected an object");
  const std::string kind = require(j, "kind").get<std::string>();
  try {
    if (kind == "ball") return ConvexBody::ball(dimension(j, dim), number(j, "r", 1.0));
    if (kind == "cube") {
      if (j.contains("half_widths")) {
        const auto& hw = j.at("half_widths");
        Vec a(static_cast<Eigen::Index>(hw.size()));
        for (std::size_t i = 0; i < hw.size(); ++i) a[static_cast<Eigen::Index>(i)] = hw[i].get<double>();
        return ConvexBody::box(a);
      }
      return ConvexBody::cube(dimension(j, dim), number(j, "a", 1.0));
    }
    if (kind == "cross_polytope") return ConvexBody::cross_polytope(dimension(j, dim));
    if (kind == "lp_ball") return ConvexBody::lp_ball(dimension(j, dim), number(j, "p", 2.0));
    if (kind == "ellipsoid") {
      const int d = dimension(j, dim);
      if (j.contains("matrix")) return ConvexBody::ellipsoid(matrix_from_json(j.at("matrix"), d, d, "matrix"));
      // random positive-definite form A^T A + 0.1 I
      const auto seed = j.value("seed", std::uint64_t{1});
      const Mat a = gaussian_matrix(d, d, seed);
      return ConvexBody::ellipsoid(a.transpose() * a / d + 0.1 * Mat::Identity(d, d));
    }
    if (kind == "zonotope") {
      const int d = dimension(j, dim);
      if (j.contains("segments")) return ConvexBody::zonotope(columns_from_json(j.at("segments"), d, "segments"));
      const int per_dim = j.value("segments_per_dim", 2);
      return random_zonotope(d, per_dim * d, j.value("seed", std::uint64_t{1}));
    }
    if (kind == "vertex_polytope") {
      const int d = dimension(j, dim);
      return ConvexBody::vertex_polytope(columns_from_json(require(j, "vertices"), d, "vertices"));
    }
    if (kind == "simplex") {
      const int d = dimension(j, dim);
      Mat v = Mat::Zero(d, d + 1);
      v.rightCols(d).setIdentity();
      return ConvexBody::vertex_polytope(v);
    }
    if (kind == "schatten_ball") {
      int m = j.value("m", 0);
      if (m == 0) {
        const int d = dimension(j, dim);
        m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
        if (m * m != d) throw ConfigError("dim", "schatten_ball needs a square dimension");
      } else if (j.contains("dim") && j.at("dim").get<int>() != m * m) {
        throw ConfigError("dim", "schatten_ball dim must equal m*m");
      }
      return ConvexBody::schatten_ball(m, number(j, "p", 2.0));
    }
    if (kind == "linear_image") {
      const ConvexBody inner = body_from_json(require(j, "inner"), j.contains("dim") ? std::optional<int>(j.at("dim").get<int>()) : dim);
      const int d = inner.dim();
      if (j.contains("diagonal")) {
        const json& diag = j.at("diagonal");
        if (!diag.is_array() || static_cast<int>(diag.size()) != d)
          throw ConfigError("diagonal", "expected " + std::to_string(d) + " entries");
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = diag[static_cast<std::size_t>(i)].get<double>();
        return ConvexBody::linear_image(v.asDiagonal(), inner);
      }
      if (j.contains("symplectic_seed")) {
        if (d % 2 != 0) throw ConfigError("symplectic_seed", "needs an even dimension");
        return ConvexBody::linear_image(
            random_symplectic(d / 2, j.at("symplectic_seed").get<std::uint64_t>(), number(j, "spread", 0.5)), inner);
      }
      return ConvexBody::linear_image(matrix_from_json(require(j, "matrix"), d, d, "matrix"), inner);
    }
    if (kind == "difference_body") {
      return ConvexBody::difference_body(body_from_json(require(j, "inner"), j.contains("dim") ? std::optional<int>(j.at("dim").get<int>()) : dim));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("body", e.what());
  } catch (const InputError& e) {
    throw ConfigError("body", e.what());
  }
  throw ConfigError("kind", "unknown body kind \"" + kind + "\"");
}

json body_to_json(const ConvexBody& body) {
  json j;
  j["kind"] = to_string(body.kind());
  j["dim"] = body.dim();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConvexBody::Ball>) {
          j["r"] = p.radius;
        } else if constexpr (std::is_same_v<T, ConvexBody::Box>) {
          if (p.half_widths.isConstant(p.half_widths[0])) {
            j["a"] = p.half_widths[0];
          } else {
            j["half_widths"] = std::vector<double>(p.half_widths.data(), p.half_widths.data() + p.half_widths.size());
          }
        } else if constexpr (std::is_same_v<T, ConvexBody::Lp>) {
          if (std::isinf(p.p)) j["p"] = "inf";
          else j["p"] = p.p;
        } else if constexpr (std::is_same_v<T, ConvexBody::Ellipsoid>) {
          j["matrix"] = matrix_to_json(p.form);
        } else if constexpr (std::is_same_v<T, ConvexBody::Zonotope>) {
          j["segments"] = columns_to_json(p.segments);
        } else if constexpr (std::is_same_v<T, ConvexBody::Polytope>) {
          j["vertices"] = columns_to_json(p.vertices);
        } else if constexpr (std::is_same_v<T, ConvexBody::Schatten>) {
          j["m"] = p.m;
          j["p"] = p.p;
        } else if constexpr (std::is_same_v<T, ConvexBody::Image>) {
          j["matrix"] = matrix_to_json(p.map);
          j["inner"] = body_to_json(*p.inner);
        } else if constexpr (std::is_same_v<T, ConvexBody::Difference>) {
          j["inner"] = body_to_json(*p.inner);
        }
      },
      body.params());
  return j;
}

std::string family_name(const json& j) {
  std::ostringstream os;
  os << j.value("kind", std::string("?"));
  if (j.contains("p")) {
    if (j.at("p").is_string()) os << "_p" << j.at("p").get<std::string>();
    else os << "_p" << j.at("p").get<double>();
  }
  if (j.contains("m")) os << "_m" << j.at("m").get<int>();
  if (j.contains("name")) return j.at("name").get<std::string>();
  return os.str();
}

}  // namespace symcap
