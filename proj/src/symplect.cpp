#include "symcap/symplect.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "symcap/error.hpp"
#include "symcap/random.hpp"

namespace symcap {
namespace {

void check_square_even(const Mat& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0)
    throw InputError(std::string(what) + " must be a square matrix of even size");
  if (!m.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

// (J-commuting part) P(A) = (A - J A J) / 2.
Mat complex_part(const Mat& a) {
  const Mat j = standard_j(static_cast<int>(a.rows()));
  return 0.5 * (a - j * a * j);
}

Mat polar_factor(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

// Core of the skew spectral method: given M^{1/2} and M^{-1/2}.
WilliamsonForm williamson_core(const Mat& m, const Mat& sqrt_m, const Tolerances& tol) {
  const int dim = static_cast<int>(sqrt_m.rows());
  const int n = dim / 2;
  const Mat c = sqrt_m * standard_j(dim) * sqrt_m;
  const Mat skew = 0.5 * (c - c.transpose());

  // i * C is Hermitian with eigenvalues +-d_j; eigenvector w = a + ib for +d
  // gives the real pair (sqrt2 a, sqrt2 b) on which C acts as [[0,-d],[d,0]].
  const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * skew.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("williamson: eigensolver failed", 0.0);

  Mat o(dim, dim);
  Vec d(n);
  for (int k = 0; k < n; ++k) {
    const int idx = n + k;  // positive eigenvalues, ascending
    d[k] = es.eigenvalues()[idx];
    const Eigen::VectorXcd w = es.eigenvectors().col(idx);
    o.col(2 * k) = std::sqrt(2.0) * w.real();
    o.col(2 * k + 1) = std::sqrt(2.0) * w.imag();
  }
  if (d.minCoeff() <= 0.0) throw ConditioningError("williamson: degenerate symplectic spectrum", d.minCoeff());

  Vec inv_sqrt_lambda(dim);
  for (int k = 0; k < n; ++k) inv_sqrt_lambda[2 * k] = inv_sqrt_lambda[2 * k + 1] = 1.0 / std::sqrt(d[k]);

  WilliamsonForm out;
  out.d = d;
  out.s = inv_sqrt_lambda.asDiagonal() * o.transpose() * sqrt_m;

  Vec lambda(dim);
  for (int k = 0; k < n; ++k) lambda[2 * k] = lambda[2 * k + 1] = d[k];
  const Mat recon = out.s.transpose() * lambda.asDiagonal() * out.s;
  out.residual = max_abs(recon - m) / std::max(max_abs(m), 1e-300);
  if (!(out.residual <= tol.williamson_residual))
    throw NumericalError("williamson: reconstruction residual above tolerance", out.residual);
  return out;
}

}  // namespace

Mat standard_j(int dim) {
  Mat j = Mat::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; k += 2) {
    j(k + 1, k) = 1.0;
    j(k, k + 1) = -1.0;
  }
  return j;
}

Vec apply_j(const Vec& v) {
  Vec out(v.size());
  for (Eigen::Index k = 0; k + 1 < v.size(); k += 2) {
    out[k] = -v[k + 1];
    out[k + 1] = v[k];
  }
  return out;
}

double omega(const Vec& u, const Vec& v) { return apply_j(u).dot(v); }

double symplectic_defect(const Mat& s) {
  const Mat j = standard_j(static_cast<int>(s.rows()));
  return max_abs(s.transpose() * j * s - j);
}

Mat symplectic_inverse(const Mat& s) {
  const Mat j = standard_j(static_cast<int>(s.rows()));
  return -j * s.transpose() * j;
}

Mat pair_diagonal(const Vec& r) {
  Vec diag(2 * r.size());
  for (Eigen::Index k = 0; k < r.size(); ++k) diag[2 * k] = diag[2 * k + 1] = r[k];
  return diag.asDiagonal();
}

SymplecticContext::SymplecticContext(int n_) : n(n_), j(standard_j(2 * n_)) {
  if (n_ < 1) throw InputError("symplectic context needs n >= 1");
}

WilliamsonForm williamson(const Mat& m, const Tolerances& tol) {
  check_square_even(m, "williamson input");
  const double scale = std::max(max_abs(m), 1e-300);
  if (max_abs(m - m.transpose()) > tol.symmetry * scale) throw InputError("williamson input must be symmetric");
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const double min_eig = es.eigenvalues().minCoeff();
  if (!(min_eig >= tol.min_eigenvalue))
    throw ConditioningError("williamson input is not (numerically) positive definite", min_eig);
  const Mat sqrt_m = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  return williamson_core(sym, sqrt_m, tol);
}

WilliamsonForm williamson_from_factor(const Mat& r, const Tolerances& tol) {
  check_square_even(r, "williamson factor");
  Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  if (!(sv.minCoeff() * sv.minCoeff() >= tol.min_eigenvalue))
    throw ConditioningError("williamson factor is (numerically) singular", sv.minCoeff());
  const Mat& v = svd.matrixV();
  const Mat sqrt_m = v * sv.asDiagonal() * v.transpose();
  return williamson_core(r.transpose() * r, sqrt_m, tol);
}

SymplecticSpectrum symplectic_spectrum(const Mat& m, const Tolerances& tol) {
  const WilliamsonForm wf = williamson(m, tol);
  const int n = static_cast<int>(wf.d.size());
  // Radii 1/sqrt(d) ascending means d descending: reverse the pair order
  // (a permutation of (x_k, y_k) pairs is symplectic).
  SymplecticSpectrum out;
  out.s.resize(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const int src = n - 1 - k;
    out.radii.push_back(1.0 / std::sqrt(wf.d[src]));
    out.s.row(2 * k) = wf.s.row(2 * src);
    out.s.row(2 * k + 1) = wf.s.row(2 * src + 1);
  }
  return out;
}

WdsDecomposition wds_decompose(const Mat& t, const Tolerances& tol) {
  check_square_even(t, "wds_decompose input");
  const double det = t.partialPivLu().determinant();
  if (!(std::abs(det) > tol.min_abs_det)) throw InputError("wds_decompose input must be invertible");
  const int dim = static_cast<int>(t.rows());
  const int n = dim / 2;

  const WilliamsonForm wf = williamson_from_factor(t, tol);
  WdsDecomposition out;
  out.r = wf.d.cwiseSqrt();
  out.d = pair_diagonal(out.r);
  out.s = wf.s;
  Vec inv_r(dim);
  for (int k = 0; k < n; ++k) inv_r[2 * k] = inv_r[2 * k + 1] = 1.0 / out.r[k];
  out.w = t * symplectic_inverse(out.s) * inv_r.asDiagonal();

  // Fix the U(k) freedom inside each group of equal radii.
  int begin = 0;
  while (begin < n) {
    int end = begin + 1;
    while (end < n && out.r[end] - out.r[begin] <= tol.spectrum_tie * out.r[end]) ++end;
    const int off = 2 * begin;
    const int len = 2 * (end - begin);
    const Mat v = polar_factor(complex_part(out.w.block(off, off, len, len)));
    out.w.middleCols(off, len) = (out.w.middleCols(off, len) * v.transpose()).eval();
    out.s.middleRows(off, len) = (v * out.s.middleRows(off, len)).eval();
    begin = end;
  }

  out.reconstruction_residual = max_abs(out.w * out.d * out.s - t) / max_abs(t);
  out.orthogonality_residual = max_abs(out.w.transpose() * out.w - Mat::Identity(dim, dim));
  out.symplectic_residual = symplectic_defect(out.s);
  if (!(out.orthogonality_residual <= tol.orthogonality))
    throw NumericalError("wds_decompose: W is not orthogonal", out.orthogonality_residual);
  return out;
}

HolomorphicPlane HolomorphicPlane::from(const Vec& v) {
  if (v.size() < 2 || v.size() % 2 != 0) throw InputError("holomorphic plane needs an even-dimensional vector");
  if (!v.allFinite()) throw InputError("holomorphic plane vector has non-finite entries");
  const double norm = v.norm();
  if (!(norm > 0.0)) throw InputError("holomorphic plane needs a nonzero vector");
  Vec unit = v / norm;
  Vec j = apply_j(unit);
  return HolomorphicPlane(std::move(unit), std::move(j));
}

Mat HolomorphicPlane::rows() const {
  Mat r(2, v_.size());
  r.row(0) = v_.transpose();
  r.row(1) = jv_.transpose();
  return r;
}

Mat random_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw InputError("random_unitary needs n >= 1");
  const Mat re = gaussian_matrix(n, n, seed, 0);
  const Mat im = gaussian_matrix(n, n, seed, 1);
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) z(i, k) = {re(i, k), im(i, k)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const std::complex<double> diag = rr(k, k);
    const double a = std::abs(diag);
    if (a > 0.0) q.col(k) *= diag / a;
  }
  // a + ib acts on (x, y) as [[a, -b], [b, a]].
  Mat u(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double a = q(i, k).real();
      const double b = q(i, k).imag();
      u(2 * i, 2 * k) = a;
      u(2 * i, 2 * k + 1) = -b;
      u(2 * i + 1, 2 * k) = b;
      u(2 * i + 1, 2 * k + 1) = a;
    }
  return u;
}

Mat random_symplectic(int n, std::uint64_t seed, double spread) {
  const Mat u1 = random_unitary(n, derive_seed(seed, 1));
  const Mat u2 = random_unitary(n, derive_seed(seed, 2));
  const Mat g = gaussian_matrix(n, 1, derive_seed(seed, 3));
  Vec diag(2 * n);
  for (int k = 0; k < n; ++k) {
    diag[2 * k] = std::exp(spread * g(k, 0));
    diag[2 * k + 1] = std::exp(-spread * g(k, 0));
  }
  return u1 * diag.asDiagonal() * u2;
}

}  // namespace symcap
