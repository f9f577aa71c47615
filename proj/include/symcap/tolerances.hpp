#pragma once

namespace symcap {

/// Every numerical threshold used by the library. Acceptance tests pin these.
struct Tolerances {
  // symplectic linear algebra
  double symmetry = 1e-10;           // |M - M^T|_max relative to |M|_max
  double min_eigenvalue = 1e-12;     // SPD inputs below this are rejected
  double williamson_residual = 1e-8; // |S^T Lambda S - M|_max / |M|_max
  double orthogonality = 1e-8;       // |W^T W - I|_max accepted from wds_decompose
  double min_abs_det = 1e-12;
  double spectrum_tie = 1e-9;        // relative gap below which symplectic radii are treated as equal

  // bodies
  double schatten_svd = 1e-10;
  long zonotope_subset_cap = 2'000'000;  // exact zonotope volume enumerates at most this many subsets
  int rejection_volume_max_dim = 8;      // above this the radial estimator is used

  // capacity
  int default_grid = 720;
  double plane_unit = 1e-12;             // plane basis orthonormality
  double quadratic_slack = 1e-10;        // relative inflation of radii obtained from 2x2 eigenproblems

  // Lowner ellipsoid
  long lowner_max_iterations = 200'000;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace symcap
