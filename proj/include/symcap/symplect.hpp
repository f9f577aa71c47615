#pragma once

#include <cstdint>
#include <vector>

#include "symcap/linalg.hpp"
#include "symcap/tolerances.hpp"

namespace symcap {

// Coordinates are interleaved: (x1, y1, ..., xn, yn).
// J(x1, y1, ..., xn, yn) = (-y1, x1, ..., -yn, xn), omega(u, v) = <Ju, v>.

/// The standard complex structure on R^{dim}, dim = 2n.
Mat standard_j(int dim);
/// J v without forming J.
Vec apply_j(const Vec& v);
/// omega(u, v) = <Ju, v>; omega(e1, e2) = 1.
double omega(const Vec& u, const Vec& v);

/// ||S^T J S - J||_max.
double symplectic_defect(const Mat& s);
/// S^{-1} = -J S^T J, exact for symplectic S.
Mat symplectic_inverse(const Mat& s);
/// diag(r1, r1, r2, r2, ..., rn, rn).
Mat pair_diagonal(const Vec& r);

struct SymplecticContext {
  explicit SymplecticContext(int n);
  int n;
  Mat j;
};

/// Williamson normal form M = S^T diag(d1, d1, ..., dn, dn) S with S symplectic.
/// d is sorted ascending; d_j are the moduli of the eigenvalues of J M.
struct WilliamsonForm {
  Mat s;
  Vec d;
  double residual = 0.0;  // ||S^T Lambda S - M||_max / ||M||_max
};

WilliamsonForm williamson(const Mat& m, const Tolerances& tol = default_tolerances());

/// Same as williamson(R^T R) but works from the factor R, which avoids squaring
/// its condition number.
WilliamsonForm williamson_from_factor(const Mat& r, const Tolerances& tol = default_tolerances());

/// Symplectic radii of the ellipsoid {x : <Mx, x> <= 1}, sorted ascending, and
/// a symplectic S with S E = diag(r1, r1, ..., rn, rn) B.
struct SymplecticSpectrum {
  std::vector<double> radii;
  Mat s;
};

SymplecticSpectrum symplectic_spectrum(const Mat& m, const Tolerances& tol = default_tolerances());

/// T = W D S with W orthogonal, D = diag(r1, r1, ..., rn, rn) > 0, S symplectic.
/// Within each group of equal r the unitary freedom is fixed by taking W as
/// close to the identity as possible.
struct WdsDecomposition {
  Mat w;
  Mat d;
  Mat s;
  Vec r;
  double reconstruction_residual = 0.0;  // ||WDS - T||_max / ||T||_max
  double orthogonality_residual = 0.0;   // ||W^T W - I||_max
  double symplectic_residual = 0.0;      // ||S^T J S - J||_max
};

WdsDecomposition wds_decompose(const Mat& t, const Tolerances& tol = default_tolerances());

/// span{v, Jv} for a unit v.
class HolomorphicPlane {
 public:
  static HolomorphicPlane from(const Vec& v);

  const Vec& v() const { return v_; }
  const Vec& jv() const { return jv_; }
  int dim() const { return static_cast<int>(v_.size()); }
  /// 2 x dim matrix with rows v, Jv (orthogonal projection coordinates).
  Mat rows() const;

 private:
  HolomorphicPlane(Vec v, Vec jv) : v_(std::move(v)), jv_(std::move(jv)) {}
  Vec v_;
  Vec jv_;
};

/// Haar-random element of U(n) acting on R^{2n}: orthogonal, commutes with J.
Mat random_unitary(int n, std::uint64_t seed);

/// Random symplectic matrix U1 diag(e^{s1}, e^{-s1}, ...) U2 with s_k ~ spread * N(0,1).
Mat random_symplectic(int n, std::uint64_t seed, double spread = 0.5);

}  // namespace symcap
