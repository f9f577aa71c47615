#include "symcap/widths.hpp"

#include <cmath>
#include <numeric>

#include "symcap/error.hpp"
#include "symcap/parallel.hpp"
#include "symcap/random.hpp"

namespace symcap {
namespace {

constexpr std::size_t kChunk = 2048;

WidthEstimate summarize(WidthKind kind, const Vec& values, std::uint64_t seed, bool exact) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) sum += values[i];  // fixed order
  const double mean = sum / n;
  double ss = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) ss += (values[i] - mean) * (values[i] - mean);
  WidthEstimate w;
  w.kind = kind;
  w.value = mean;
  w.std_error = (exact || values.size() < 2) ? 0.0 : std::sqrt(ss / (n - 1.0) / n);
  w.samples = static_cast<long>(values.size());
  w.seed = seed;
  w.exact = exact;
  return w;
}

void check_samples(long samples) {
  if (samples < 100) throw InputError("width estimators need at least 100 samples");
}

}  // namespace

std::string to_string(WidthKind kind) {
  switch (kind) {
    case WidthKind::mstar: return "mstar";
    case WidthKind::m: return "m";
    case WidthKind::sstar: return "sstar";
  }
  return "unknown";
}

Mat sphere_directions(int dim, long samples, std::uint64_t seed) {
  Mat u(dim, samples);
  parallel_for(static_cast<std::size_t>(samples), kChunk, [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) u.col(static_cast<Eigen::Index>(s)) = sphere_point(dim, seed, s);
  });
  return u;
}

Vec sphere_support_samples(const ConvexBody& body, long samples, std::uint64_t seed) {
  const int d = body.dim();
  Vec values(samples);
  parallel_for(static_cast<std::size_t>(samples), kChunk, [&](std::size_t b, std::size_t e) {
    Mat u(d, static_cast<Eigen::Index>(e - b));
    for (std::size_t s = b; s < e; ++s) u.col(static_cast<Eigen::Index>(s - b)) = sphere_point(d, seed, s);
    values.segment(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b)) = body.support_columns(u);
  });
  return values;
}

WidthEstimate mean_width(const ConvexBody& body, long samples, std::uint64_t seed) {
  check_samples(samples);
  return summarize(WidthKind::mstar, sphere_support_samples(body, samples, seed), seed, false);
}

WidthEstimate mean_norm(const ConvexBody& body, long samples, std::uint64_t seed) {
  check_samples(samples);
  const int d = body.dim();
  Vec values(samples);
  parallel_for(static_cast<std::size_t>(samples), kChunk / 8, [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) values[static_cast<Eigen::Index>(s)] = body.gauge(sphere_point(d, seed, s));
  });
  return summarize(WidthKind::m, values, seed, false);
}

WidthEstimate rademacher_exact(const ConvexBody& body) {
  const int d = body.dim();
  if (d > kMaxExactRademacherDim)
    throw InputError("exact Rademacher average is limited to dimension " + std::to_string(kMaxExactRademacherDim) +
                     "; use Monte-Carlo mode");
  const std::size_t count = std::size_t{1} << d;
  Vec values(static_cast<Eigen::Index>(count));
  parallel_for(count, 1U << 12, [&](std::size_t b, std::size_t e) {
    Mat u(d, static_cast<Eigen::Index>(e - b));
    for (std::size_t c = b; c < e; ++c) u.col(static_cast<Eigen::Index>(c - b)) = cube_vertex_from_bits(d, c);
    values.segment(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b)) = body.support_columns(u);
  });
  return summarize(WidthKind::sstar, values, 0, true);
}

WidthEstimate rademacher_mc(const ConvexBody& body, long samples, std::uint64_t seed) {
  check_samples(samples);
  const int d = body.dim();
  Vec values(samples);
  parallel_for(static_cast<std::size_t>(samples), kChunk, [&](std::size_t b, std::size_t e) {
    Mat u(d, static_cast<Eigen::Index>(e - b));
    for (std::size_t s = b; s < e; ++s) u.col(static_cast<Eigen::Index>(s - b)) = cube_vertex(d, seed, s);
    values.segment(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b)) = body.support_columns(u);
  });
  return summarize(WidthKind::sstar, values, seed, false);
}

}  // namespace symcap
