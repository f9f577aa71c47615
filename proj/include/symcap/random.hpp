#pragma once

#include <cstdint>
#include <limits>

#include "symcap/linalg.hpp"

namespace symcap {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based stream: the generator for (seed, stream) is fully determined
/// by the pair, so per-sample streams do not depend on how work is split
/// across threads. Satisfies UniformRandomBitGenerator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  double uniform() noexcept;  // [0, 1)

 private:
  std::uint64_t state_;
};

/// Derive an independent child seed (for nested procedures sharing one user seed).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

/// Uniform unit vector from stream (seed, index), via a normalized Gaussian.
Vec sphere_point(int dim, std::uint64_t seed, std::uint64_t index);

/// Uniform vertex of {±1/sqrt(dim)}^dim from stream (seed, index).
Vec cube_vertex(int dim, std::uint64_t seed, std::uint64_t index);

/// Vertex number `code` of {±1/sqrt(dim)}^dim (bit k set means coordinate k negative).
Vec cube_vertex_from_bits(int dim, std::uint64_t code);

/// Standard Gaussian matrix from one stream.
Mat gaussian_matrix(int rows, int cols, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace symcap
