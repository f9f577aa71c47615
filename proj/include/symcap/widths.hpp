#pragma once

#include <cstdint>
#include <string>

#include "symcap/bodies.hpp"

namespace symcap {

enum class WidthKind { mstar, m, sstar };

std::string to_string(WidthKind kind);

struct WidthEstimate {
  WidthKind kind = WidthKind::mstar;
  double value = 0.0;
  double std_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  bool exact = false;

  double relative_error() const { return value > 0.0 ? std_error / value : 0.0; }
};

inline constexpr long kDefaultSphereSamples = 200'000;
inline constexpr long kDefaultVertexSamples = 100'000;
inline constexpr int kMaxExactRademacherDim = 22;

/// M*(K): average of h_K over the uniform sphere (half the mean width).
WidthEstimate mean_width(const ConvexBody& body, long samples, std::uint64_t seed);

/// M(K): average of ||x||_K over the uniform sphere.
WidthEstimate mean_norm(const ConvexBody& body, long samples, std::uint64_t seed);

/// s*(K): average of h_K over the vertices of {±1/sqrt(2n)}^{2n}.
/// Exact mode enumerates every vertex and refuses above kMaxExactRademacherDim.
WidthEstimate rademacher_exact(const ConvexBody& body);
WidthEstimate rademacher_mc(const ConvexBody& body, long samples, std::uint64_t seed);

/// Sample-wise values behind an estimate (same streams as the estimators),
/// for common-random-numbers comparisons between bodies.
Vec sphere_support_samples(const ConvexBody& body, long samples, std::uint64_t seed);

/// dim x samples block of uniform unit vectors from streams (seed, 0..samples-1).
Mat sphere_directions(int dim, long samples, std::uint64_t seed);

}  // namespace symcap
