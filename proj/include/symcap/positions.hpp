#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symcap/bodies.hpp"
#include "symcap/capacity.hpp"
#include "symcap/symplect.hpp"
#include "symcap/widths.hpp"

namespace symcap {

inline constexpr int kDefaultPositionBudget = 400;
inline constexpr long kDefaultObjectiveSamples = 4096;

struct PositionSearchResult {
  Mat t;  // det t = 1
  WidthEstimate mstar_before;  // M*(K) on the objective's direction set
  WidthEstimate mstar_after;   // M*(TK) on the same set
  std::vector<std::pair<int, double>> trace;  // (evaluation, accepted objective)
  std::uint64_t seed = 0;
  int evaluations = 0;
};

/// Gradient-free search over SL(2n) for a position TK with small M*.
/// T = diag(lambda) R T0: T0 is the better of the identity and an analytic
/// normalizer (for ellipsoids, boxes and linear images of them); sweeps
/// alternate log-coordinate moves on lambda (renormalized to det 1) with
/// random Givens rotations composed into R. The objective is M*(TK) on one
/// fixed set of sphere directions, so every comparison is sample-wise.
PositionSearchResult optimize_position(const ConvexBody& body, int budget, std::uint64_t seed,
                                       long objective_samples = kDefaultObjectiveSamples);

struct PlaneChoice {
  HolomorphicPlane plane = HolomorphicPlane::from(Vec::Unit(2, 0));
  Vec v;                 // cube vertex chosen for DK
  bool qualified = false;  // h_{DK}(v), h_{DK}(Jv) <= 3 s*(DK)
  double max_support = 0.0;  // max(h_{DK}(v), h_{DK}(Jv))
  WidthEstimate sstar;   // s*(DK)
  CertifiedRadius radius;  // of P_E K
  std::string source;    // "diagonal" or "vertex#k"
};

/// Searches cube vertices v for DK and returns E = span{v', Jv'} with
/// v' = Dv/|Dv|. D must be diag(r1, r1, ..., rn, rn) with prod r = 1.
/// Among qualifying vertices the one with the smallest certified radius of
/// P_E K wins; with none qualifying the vertex minimizing max support on DK is
/// returned and `qualified` is false.
PlaneChoice proposition_plane(const ConvexBody& body, const Mat& d, long trials, std::uint64_t seed,
                              int grid_m = default_tolerances().default_grid);

struct PipelineOptions {
  int budget = kDefaultPositionBudget;
  long trials = 200;
  std::uint64_t seed = 1;
  int grid_m = default_tolerances().default_grid;
  long mc_samples = 200'000;
  long objective_samples = kDefaultObjectiveSamples;
};

struct PipelineReport {
  std::string body_id;
  bool symmetrized = false;
  double volume_factor = 1.0;  // Rogers-Shephard factor when K was replaced by K - K
  std::optional<PositionSearchResult> position;
  std::optional<WdsDecomposition> wds;
  std::optional<PlaneChoice> plane;
  std::optional<CapacityBound> bound;
  std::string route;  // which candidate produced the bound
  std::optional<VolumeResult> volume;
  std::optional<double> gamma;
  double two_n_baseline = 0.0;
  double log_sq_curve = 0.0;
  std::vector<std::string> stages;
  std::optional<std::string> error;
  std::optional<std::string> failed_stage;

  bool complete() const { return !error.has_value(); }
};

/// Position search, WDS split, K' = S K, corrected plane for K', and the
/// cylinder bound on K' (valid for K since S is symplectic). The deterministic
/// planes on K' and on K are also certified and the smallest bound is kept.
/// A stage failure returns the report filled up to that stage.
PipelineReport main_pipeline(const ConvexBody& body, const PipelineOptions& options);

}  // namespace symcap
