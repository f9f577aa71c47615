#include "symcap/random.hpp"

#include <cmath>
#include <random>

namespace symcap {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(mix64(mix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL))) {}

StreamRng::result_type StreamRng::operator()() noexcept {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double StreamRng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(seed ^ mix64(tag + 0x632be59bd9b4e019ULL));
}

Vec sphere_point(int dim, std::uint64_t seed, std::uint64_t index) {
  StreamRng rng(seed, index);
  std::normal_distribution<double> normal;
  Vec x(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) x[i] = normal(rng);
    norm = x.norm();
  } while (norm == 0.0);
  return x / norm;
}

Vec cube_vertex_from_bits(int dim, std::uint64_t code) {
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = ((code >> i) & 1U) ? -s : s;
  return x;
}

Vec cube_vertex(int dim, std::uint64_t seed, std::uint64_t index) {
  StreamRng rng(seed, index);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  Vec x(dim);
  std::uint64_t bits = rng();
  for (int i = 0; i < dim; ++i) {
    if (i > 0 && i % 64 == 0) bits = rng();
    x[i] = (bits & 1U) ? -s : s;
    bits >>= 1;
  }
  return x;
}

Mat gaussian_matrix(int rows, int cols, std::uint64_t seed, std::uint64_t stream) {
  StreamRng rng(seed, stream);
  std::normal_distribution<double> normal;
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

}  // namespace symcap
