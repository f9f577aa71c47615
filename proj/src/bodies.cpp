#include "symcap/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "symcap/error.hpp"
#include "symcap/lp.hpp"
#include "symcap/random.hpp"

namespace symcap {

struct ConvexBody::Impl {
  int dim;
  bool symmetric;
  Params params;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(int dim) {
  if (dim < 2 || dim % 2 != 0) throw InputError("body dimension must be even and >= 2, got " + std::to_string(dim));
}

void check_vector(const Vec& v, int dim, const char* what) {
  if (v.size() != dim)
    throw InputError(std::string(what) + " has length " + std::to_string(v.size()) + ", body dimension is " +
                     std::to_string(dim));
  if (!v.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_norm(const Eigen::Ref<const Vec>& x, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double schatten_norm(const Eigen::Ref<const Vec>& x, int m, double p) {
  if (p == 2.0) return x.norm();  // Frobenius
  Mat a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = x[i * m + j];
  const Vec sv = Eigen::JacobiSVD<Mat>(a).singularValues();
  return lp_norm(sv, p);
}

// Zonogon vertices of sum_i [-g_i, g_i] in the plane.
std::vector<Eigen::Vector2d> zonogon_vertices(const Eigen::Matrix<double, 2, Eigen::Dynamic>& gens) {
  std::vector<Eigen::Vector2d> g;
  for (Eigen::Index i = 0; i < gens.cols(); ++i)
    if (gens.col(i).squaredNorm() > 0.0) g.emplace_back(gens.col(i));
  if (g.empty()) return {Eigen::Vector2d::Zero()};
  std::vector<double> angles;
  angles.reserve(2 * g.size());
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (const auto& v : g) {
    double a = std::atan2(v.y(), v.x()) + 0.5 * std::numbers::pi;
    a = std::fmod(a + two_pi, two_pi);
    angles.push_back(a);
    angles.push_back(std::fmod(a + std::numbers::pi, two_pi));
  }
  std::sort(angles.begin(), angles.end());
  std::vector<Eigen::Vector2d> out;
  out.reserve(angles.size());
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const double lo = angles[k];
    const double hi = k + 1 < angles.size() ? angles[k + 1] : angles[0] + two_pi;
    if (hi - lo <= 0.0) continue;
    const double mid = 0.5 * (lo + hi);
    const Eigen::Vector2d w(std::cos(mid), std::sin(mid));
    Eigen::Vector2d p = Eigen::Vector2d::Zero();
    for (const auto& v : g) p += (w.dot(v) >= 0.0 ? 1.0 : -1.0) * v;
    out.push_back(p);
  }
  return out;
}

bool columns_symmetric(const Mat& v) {
  const double scale = std::max(1.0, max_abs(v));
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < v.cols() && !found; ++j)
      found = (v.col(i) + v.col(j)).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    if (!found) return false;
  }
  return true;
}

double zonotope_gauge(const Mat& s, const Vec& x) {
  if (x.isZero(0.0)) return 0.0;
  const int d = static_cast<int>(s.rows());
  const int m = static_cast<int>(s.cols());
  // variables: c+ (m), c- (m), t, slack (m)
  Mat a = Mat::Zero(d + m, 3 * m + 1);
  a.block(0, 0, d, m) = s;
  a.block(0, m, d, m) = -s;
  for (int i = 0; i < m; ++i) {
    a(d + i, i) = 1.0;
    a(d + i, m + i) = 1.0;
    a(d + i, 2 * m) = -1.0;
    a(d + i, 2 * m + 1 + i) = 1.0;
  }
  Vec b = Vec::Zero(d + m);
  b.head(d) = x;
  Vec c = Vec::Zero(3 * m + 1);
  c[2 * m] = 1.0;
  const LpResult r = solve_standard_lp(a, b, c);
  if (r.status == LpStatus::infeasible) return kInf;
  if (r.status != LpStatus::optimal) throw NumericalError("zonotope gauge LP did not converge", 0.0);
  return r.objective;
}

double polytope_gauge(const Mat& v, const Vec& x) {
  if (x.isZero(0.0)) return 0.0;
  const LpResult r = solve_standard_lp(v, x, Vec::Ones(v.cols()));
  if (r.status == LpStatus::infeasible) return kInf;
  if (r.status != LpStatus::optimal) throw NumericalError("polytope gauge LP did not converge", 0.0);
  return r.objective;
}

bool polytope_contains(const Mat& v, const Vec& x) {
  Mat a(v.rows() + 1, v.cols());
  a.topRows(v.rows()) = v;
  a.row(v.rows()).setOnes();
  Vec b(v.rows() + 1);
  b.head(v.rows()) = x;
  b[v.rows()] = 1.0;
  const LpResult r = solve_standard_lp(a, b, Vec::Zero(v.cols()));
  return r.status == LpStatus::optimal;
}

double log_binomial(long n, long k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::string to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::ball: return "ball";
    case BodyKind::cube: return "cube";
    case BodyKind::cross_polytope: return "cross_polytope";
    case BodyKind::lp_ball: return "lp_ball";
    case BodyKind::ellipsoid: return "ellipsoid";
    case BodyKind::zonotope: return "zonotope";
    case BodyKind::vertex_polytope: return "vertex_polytope";
    case BodyKind::schatten_ball: return "schatten_ball";
    case BodyKind::linear_image: return "linear_image";
    case BodyKind::difference_body: return "difference_body";
  }
  return "unknown";
}

double unit_ball_volume(int dim) {
  return std::exp(0.5 * dim * std::log(std::numbers::pi) - std::lgamma(0.5 * dim + 1.0));
}

ConvexBody::ConvexBody(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ConvexBody ConvexBody::ball(int dim, double radius) {
  check_dim(dim);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("ball radius must be positive");
  return ConvexBody(std::make_shared<Impl>(Impl{dim, true, Ball{radius}}));
}

ConvexBody ConvexBody::cube(int dim, double half_width) {
  check_dim(dim);
  return box(Vec::Constant(dim, half_width));
}

ConvexBody ConvexBody::box(Vec half_widths) {
  const int dim = static_cast<int>(half_widths.size());
  check_dim(dim);
  if (!half_widths.allFinite() || half_widths.minCoeff() <= 0.0) throw InputError("cube half-widths must be positive");
  return ConvexBody(std::make_shared<Impl>(Impl{dim, true, Box{std::move(half_widths)}}));
}

ConvexBody ConvexBody::cross_polytope(int dim) {
  check_dim(dim);
  return ConvexBody(std::make_shared<Impl>(Impl{dim, true, Cross{}}));
}

ConvexBody ConvexBody::lp_ball(int dim, double p) {
  check_dim(dim);
  if (!(p >= 1.0)) throw InputError("lp_ball requires p >= 1");
  return ConvexBody(std::make_shared<Impl>(Impl{dim, true, Lp{p}}));
}

ConvexBody ConvexBody::ellipsoid(Mat form) {
  const int dim = static_cast<int>(form.rows());
  check_dim(dim);
  if (form.cols() != dim) throw InputError("ellipsoid matrix must be square");
  if (!form.allFinite()) throw InputError("ellipsoid matrix has non-finite entries");
  const auto& tol = default_tolerances();
  if (max_abs(form - form.transpose()) > tol.symmetry * std::max(1.0, max_abs(form)))
    throw InputError("ellipsoid matrix must be symmetric");
  form = 0.5 * (form + form.transpose()).eval();
  Eigen::LLT<Mat> chol(form);
  if (chol.info() != Eigen::Success) throw InputError("ellipsoid matrix must be positive definite");
  Mat inverse = chol.solve(Mat::Identity(dim, dim));
  return ConvexBody(std::make_shared<Impl>(Impl{dim, true, Ellipsoid{std::move(form), std::move(inverse), std::move(chol)}}));
}

ConvexBody ConvexBody::zonotope(Mat segments) {
  const int dim = static_cast<int>(segments.rows());
  check_dim(dim);
  if (segments.cols() == 0) throw InputError("zonotope needs at least one segment");
  if (!segments.allFinite()) throw InputError("zonotope segments have non-finite entries");
  return ConvexBody(std::make_shared<Impl>(Impl{dim, true, Zonotope{std::move(segments)}}));
}

ConvexBody ConvexBody::vertex_polytope(Mat vertices) {
  const int dim = static_cast<int>(vertices.rows());
  check_dim(dim);
  if (vertices.cols() == 0) throw InputError("vertex_polytope needs at least one vertex");
  if (!vertices.allFinite()) throw InputError("vertex_polytope vertices have non-finite entries");
  const bool sym = columns_symmetric(vertices);
  return ConvexBody(std::make_shared<Impl>(Impl{dim, sym, Polytope{std::move(vertices)}}));
}

ConvexBody ConvexBody::schatten_ball(int m, double p) {
  if (m < 1) throw InputError("schatten_ball requires m >= 1");
  check_dim(m * m);
  if (!(p >= 1.0)) throw InputError("schatten_ball requires p >= 1");
  return ConvexBody(std::make_shared<Impl>(Impl{m * m, true, Schatten{m, p}}));
}

ConvexBody ConvexBody::linear_image(Mat map, const ConvexBody& inner) {
  const int dim = inner.dim();
  if (map.rows() != dim || map.cols() != dim)
    throw InputError("linear_image map must be " + std::to_string(dim) + "x" + std::to_string(dim));
  if (!map.allFinite()) throw InputError("linear_image map has non-finite entries");
  const ConvexBody* base = &inner;
  if (const auto* img = std::get_if<Image>(&inner.params())) {
    map = (map * img->map).eval();
    base = img->inner.get();
  }
  Eigen::PartialPivLU<Mat> lu(map);
  const double abs_det = std::abs(lu.determinant());
  if (!(abs_det > default_tolerances().min_abs_det)) throw InputError("linear_image map is singular");
  return ConvexBody(std::make_shared<Impl>(
      Impl{dim, base->symmetric(), Image{std::move(map), std::move(lu), abs_det, std::make_shared<const ConvexBody>(*base)}}));
}

ConvexBody ConvexBody::difference_body(const ConvexBody& inner) {
  std::shared_ptr<const ConvexBody> equivalent;
  if (!inner.symmetric()) {
    if (const auto* poly = std::get_if<Polytope>(&inner.params())) {
      const Mat& v = poly->vertices;
      Mat diffs(v.rows(), v.cols() * (v.cols() - 1));
      Eigen::Index k = 0;
      for (Eigen::Index i = 0; i < v.cols(); ++i)
        for (Eigen::Index j = 0; j < v.cols(); ++j)
          if (i != j) diffs.col(k++) = v.col(i) - v.col(j);
      equivalent = std::make_shared<const ConvexBody>(vertex_polytope(diffs.leftCols(k)));
    } else if (const auto* img = std::get_if<Image>(&inner.params())) {
      equivalent = std::make_shared<const ConvexBody>(linear_image(img->map, difference_body(*img->inner)));
    } else {
      throw InputError("difference_body: no exact representation for a non-symmetric " + to_string(inner.kind()));
    }
  }
  return ConvexBody(std::make_shared<Impl>(
      Impl{inner.dim(), true, Difference{std::make_shared<const ConvexBody>(inner), std::move(equivalent)}}));
}

ConvexBody ConvexBody::scaled(double lambda) const {
  return linear_image(lambda * Mat::Identity(dim(), dim()), *this);
}

int ConvexBody::dim() const { return impl_->dim; }
bool ConvexBody::symmetric() const { return impl_->symmetric; }
const ConvexBody::Params& ConvexBody::params() const { return impl_->params; }

BodyKind ConvexBody::kind() const {
  return std::visit(overloaded{
                        [](const Ball&) { return BodyKind::ball; },
                        [](const Box&) { return BodyKind::cube; },
                        [](const Cross&) { return BodyKind::cross_polytope; },
                        [](const Lp&) { return BodyKind::lp_ball; },
                        [](const Ellipsoid&) { return BodyKind::ellipsoid; },
                        [](const Zonotope&) { return BodyKind::zonotope; },
                        [](const Polytope&) { return BodyKind::vertex_polytope; },
                        [](const Schatten&) { return BodyKind::schatten_ball; },
                        [](const Image&) { return BodyKind::linear_image; },
                        [](const Difference&) { return BodyKind::difference_body; },
                    },
                    impl_->params);
}

std::string ConvexBody::label() const {
  std::ostringstream os;
  os << to_string(kind()) << "(dim=" << dim();
  std::visit(overloaded{
                 [&](const Ball& b) { os << ",r=" << b.radius; },
                 [&](const Box& b) {
                   if (b.half_widths.isConstant(b.half_widths[0])) os << ",a=" << b.half_widths[0];
                   else os << ",distorted";
                 },
                 [&](const Lp& b) { os << ",p=" << b.p; },
                 [&](const Zonotope& z) { os << ",segments=" << z.segments.cols(); },
                 [&](const Polytope& v) { os << ",vertices=" << v.vertices.cols(); },
                 [&](const Schatten& s) { os << ",m=" << s.m << ",p=" << s.p; },
                 [&](const Image& i) { os << ",inner=" << i.inner->label(); },
                 [&](const Difference& d) { os << ",inner=" << d.inner->label(); },
                 [](const auto&) {},
             },
             impl_->params);
  os << ")";
  return os.str();
}

double ConvexBody::support(const Vec& u) const {
  check_vector(u, dim(), "support direction");
  return support_columns(u)[0];
}

Vec ConvexBody::support_columns(const Mat& dirs) const {
  if (dirs.rows() != dim()) throw InputError("support directions have wrong dimension");
  const Eigen::Index n = dirs.cols();
  Vec out(n);
  std::visit(overloaded{
                 [&](const Ball& b) { out = b.radius * dirs.colwise().norm().transpose(); },
                 [&](const Box& b) { out = (b.half_widths.transpose() * dirs.cwiseAbs()).transpose(); },
                 [&](const Cross&) { out = dirs.cwiseAbs().colwise().maxCoeff().transpose(); },
                 [&](const Lp& b) {
                   const double q = conjugate_exponent(b.p);
                   for (Eigen::Index j = 0; j < n; ++j) out[j] = lp_norm(dirs.col(j), q);
                 },
                 [&](const Ellipsoid& e) {
                   const Mat y = e.chol.matrixL().solve(dirs);
                   out = y.colwise().squaredNorm().cwiseSqrt().transpose();
                 },
                 [&](const Zonotope& z) { out = (z.segments.transpose() * dirs).cwiseAbs().colwise().sum().transpose(); },
                 [&](const Polytope& v) { out = (v.vertices.transpose() * dirs).colwise().maxCoeff().transpose(); },
                 [&](const Schatten& s) {
                   const double q = conjugate_exponent(s.p);
                   for (Eigen::Index j = 0; j < n; ++j) out[j] = schatten_norm(dirs.col(j), s.m, q);
                 },
                 [&](const Image& i) { out = i.inner->support_columns(i.map.transpose() * dirs); },
                 [&](const Difference& d) {
                   out = d.inner->support_columns(dirs) + d.inner->support_columns(-dirs);
                 },
             },
             impl_->params);
  return out;
}

double ConvexBody::gauge(const Vec& x) const {
  check_vector(x, dim(), "gauge argument");
  return std::visit(overloaded{
                        [&](const Ball& b) { return x.norm() / b.radius; },
                        [&](const Box& b) { return x.cwiseAbs().cwiseQuotient(b.half_widths).maxCoeff(); },
                        [&](const Cross&) { return x.cwiseAbs().sum(); },
                        [&](const Lp& b) { return lp_norm(x, b.p); },
                        [&](const Ellipsoid& e) { return std::sqrt(std::max(0.0, x.dot(e.form * x))); },
                        [&](const Zonotope& z) { return zonotope_gauge(z.segments, x); },
                        [&](const Polytope& v) { return polytope_gauge(v.vertices, x); },
                        [&](const Schatten& s) { return schatten_norm(x, s.m, s.p); },
                        [&](const Image& i) { return i.inner->gauge(i.lu.solve(x)); },
                        [&](const Difference& d) {
                          return d.equivalent ? d.equivalent->gauge(x) : 0.5 * d.inner->gauge(x);
                        },
                    },
                    impl_->params);
}

bool ConvexBody::contains(const Vec& x) const {
  check_vector(x, dim(), "point");
  constexpr double slack = 1e-12;
  return std::visit(overloaded{
                        [&](const Polytope& v) { return polytope_contains(v.vertices, x); },
                        [&](const Image& i) { return i.inner->contains(i.lu.solve(x)); },
                        [&](const Difference& d) {
                          return d.equivalent ? d.equivalent->contains(x) : d.inner->gauge(0.5 * x) <= 1.0 + slack;
                        },
                        [&](const auto&) { return gauge(x) <= 1.0 + slack; },
                    },
                    impl_->params);
}

std::optional<PlanarShadow> ConvexBody::planar_shadow(const Mat& rows) const {
  if (rows.rows() != 2 || rows.cols() != dim()) throw InputError("planar_shadow expects a 2 x dim map");
  using Form = PlanarShadow::Form;
  auto polygon_from_columns = [](const Mat& pts) {
    PlanarShadow s;
    s.form = Form::polygon;
    s.points.reserve(pts.cols());
    for (Eigen::Index j = 0; j < pts.cols(); ++j) s.points.emplace_back(pts(0, j), pts(1, j));
    return s;
  };
  auto zonogon = [](const Mat& gens) {
    PlanarShadow s;
    s.form = Form::polygon;
    s.points = zonogon_vertices(gens);
    return s;
  };
  auto ellipse = [](Eigen::Matrix2d g) {
    PlanarShadow s;
    s.form = Form::ellipse;
    s.gram = 0.5 * (g + g.transpose());
    return s;
  };
  auto cross = [&](const Mat& a) {
    Mat pts(2, 2 * a.cols());
    pts << a, -a;
    return polygon_from_columns(pts);
  };

  return std::visit(
      overloaded{
          [&](const Ball& b) -> std::optional<PlanarShadow> { return ellipse(b.radius * b.radius * rows * rows.transpose()); },
          [&](const Box& b) -> std::optional<PlanarShadow> { return zonogon(rows * b.half_widths.asDiagonal()); },
          [&](const Cross&) -> std::optional<PlanarShadow> { return cross(rows); },
          [&](const Lp& b) -> std::optional<PlanarShadow> {
            if (b.p == 1.0) return cross(rows);
            if (std::isinf(b.p)) return zonogon(rows);
            if (b.p == 2.0) return ellipse(rows * rows.transpose());
            return std::nullopt;
          },
          [&](const Ellipsoid& e) -> std::optional<PlanarShadow> {
            const Mat y = e.chol.matrixL().solve(rows.transpose());
            return ellipse(y.transpose() * y);
          },
          [&](const Zonotope& z) -> std::optional<PlanarShadow> { return zonogon(rows * z.segments); },
          [&](const Polytope& v) -> std::optional<PlanarShadow> { return polygon_from_columns(rows * v.vertices); },
          [&](const Schatten& s) -> std::optional<PlanarShadow> {
            if (s.p == 2.0) return ellipse(rows * rows.transpose());
            return std::nullopt;
          },
          [&](const Image& i) -> std::optional<PlanarShadow> { return i.inner->planar_shadow(rows * i.map); },
          [&](const Difference& d) -> std::optional<PlanarShadow> {
            auto s = d.inner->planar_shadow(rows);
            if (!s) return std::nullopt;
            if (s->form == Form::ellipse) {
              s->gram *= 4.0;
              return s;
            }
            if (d.inner->symmetric()) {
              for (auto& p : s->points) p *= 2.0;
              return s;
            }
            PlanarShadow out;
            out.form = Form::polygon;
            for (const auto& p : s->points)
              for (const auto& q : s->points) out.points.push_back(p - q);
            return out;
          },
      },
      impl_->params);
}

std::optional<Mat> ConvexBody::vertices(long max_vertices) const {
  const int d = dim();
  auto all_sign_vertices = [&](const Vec& half) -> std::optional<Mat> {
    if (d >= 62 || (1L << d) > max_vertices) return std::nullopt;
    const long count = 1L << d;
    Mat v(d, count);
    for (long c = 0; c < count; ++c)
      for (int i = 0; i < d; ++i) v(i, c) = ((c >> i) & 1L) ? -half[i] : half[i];
    return v;
  };
  auto cross_vertices = [&]() -> std::optional<Mat> {
    Mat v(d, 2 * d);
    v << Mat::Identity(d, d), -Mat::Identity(d, d);
    return v;
  };
  return std::visit(
      overloaded{
          [&](const Box& b) { return all_sign_vertices(b.half_widths); },
          [&](const Cross&) { return cross_vertices(); },
          [&](const Lp& b) -> std::optional<Mat> {
            if (b.p == 1.0) return cross_vertices();
            if (std::isinf(b.p)) return all_sign_vertices(Vec::Ones(d));
            return std::nullopt;
          },
          [&](const Zonotope& z) -> std::optional<Mat> {
            const Eigen::Index m = z.segments.cols();
            if (m >= 62 || (1L << m) > max_vertices) return std::nullopt;
            const long count = 1L << m;
            Mat v(d, count);
            for (long c = 0; c < count; ++c) {
              Vec p = Vec::Zero(d);
              for (Eigen::Index i = 0; i < m; ++i) p += ((c >> i) & 1L) ? Vec(-z.segments.col(i)) : Vec(z.segments.col(i));
              v.col(c) = p;
            }
            return v;
          },
          [&](const Polytope& v) -> std::optional<Mat> {
            if (v.vertices.cols() > max_vertices) return std::nullopt;
            return v.vertices;
          },
          [&](const Image& i) -> std::optional<Mat> {
            auto v = i.inner->vertices(max_vertices);
            if (!v) return std::nullopt;
            return Mat(i.map * *v);
          },
          [&](const Difference& dd) -> std::optional<Mat> {
            if (dd.equivalent) return dd.equivalent->vertices(max_vertices);
            auto v = dd.inner->vertices(max_vertices);
            if (!v) return std::nullopt;
            return Mat(2.0 * *v);
          },
          [](const auto&) -> std::optional<Mat> { return std::nullopt; },
      },
      impl_->params);
}

std::optional<double> ConvexBody::exact_volume(const Tolerances& tol) const {
  const int d = dim();
  return std::visit(
      overloaded{
          [&](const Ball& b) -> std::optional<double> { return unit_ball_volume(d) * std::pow(b.radius, d); },
          [&](const Box& b) -> std::optional<double> { return (2.0 * b.half_widths).prod(); },
          [&](const Cross&) -> std::optional<double> { return std::exp(d * std::log(2.0) - std::lgamma(d + 1.0)); },
          [&](const Lp& b) -> std::optional<double> {
            if (std::isinf(b.p)) return std::pow(2.0, d);
            return std::exp(d * std::log(2.0 * std::tgamma(1.0 / b.p + 1.0)) - std::lgamma(d / b.p + 1.0));
          },
          [&](const Ellipsoid& e) -> std::optional<double> {
            const double logdet = 2.0 * e.chol.matrixLLT().diagonal().array().log().sum();
            return unit_ball_volume(d) * std::exp(-0.5 * logdet);
          },
          [&](const Zonotope& z) -> std::optional<double> {
            const long m = z.segments.cols();
            if (m < d) return std::nullopt;  // degenerate: volume zero, 0 not interior
            if (log_binomial(m, d) > std::log(static_cast<double>(tol.zonotope_subset_cap))) return std::nullopt;
            // sum over d-subsets of |det|, enumerated in lexicographic order
            std::vector<int> idx(d);
            for (int i = 0; i < d; ++i) idx[i] = i;
            double total = 0.0;
            Mat sub(d, d);
            for (;;) {
              for (int i = 0; i < d; ++i) sub.col(i) = z.segments.col(idx[i]);
              total += std::abs(sub.partialPivLu().determinant());
              int k = d - 1;
              while (k >= 0 && idx[k] == m - d + k) --k;
              if (k < 0) break;
              ++idx[k];
              for (int i = k + 1; i < d; ++i) idx[i] = idx[i - 1] + 1;
            }
            return std::pow(2.0, d) * total;
          },
          [&](const Schatten& s) -> std::optional<double> {
            if (s.p == 2.0) return unit_ball_volume(d);
            return std::nullopt;
          },
          [&](const Image& i) -> std::optional<double> {
            auto v = i.inner->exact_volume(tol);
            if (!v) return std::nullopt;
            return i.abs_det * *v;
          },
          [&](const Difference& dd) -> std::optional<double> {
            if (dd.equivalent) return std::nullopt;
            auto v = dd.inner->exact_volume(tol);
            if (!v) return std::nullopt;
            return std::pow(2.0, d) * *v;
          },
          [](const Polytope&) -> std::optional<double> { return std::nullopt; },
      },
      impl_->params);
}

ConvexBody random_zonotope(int dim, int segments, std::uint64_t seed) {
  return ConvexBody::zonotope(gaussian_matrix(dim, segments, seed) / std::sqrt(static_cast<double>(segments)));
}

}  // namespace symcap
