#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netiss/comparison.hpp"
#include "netiss/network.hpp"
#include "netiss/report.hpp"

namespace netiss {

/// Growth envelope of the one-step (or M-step) map.
///   StateNorm:    |f_i| <= C + kappa(|x_i|) + kappa(|xbar_i|) + kappa(|u_i|)
///   SetDistance1: |f_i|_{A_i} <= kappa1(|x_i|_{A_i}) + kappa2(|xbar_i|) + kappa2(|u_i|)
///   SetDistance2: as SetDistance1 with |xbar_i| replaced by max_j |x_j|_{A_j}
struct KBoundEstimate {
  enum class Form { StateNorm, SetDistance1, SetDistance2 };
  Form form = Form::StateNorm;
  double C = 0.0;
  ScalarGain kappa;
  ScalarGain kappa1, kappa2;
};

/// Sampling over indices first..last. Every index gets the 27 corner samples
/// (x, xbar, v) in {-r, 0, r}^3 (r broadcast over components) plus `samples`
/// index-addressed uniform draws. The input is the constant value v on every
/// component of every index. With M > 1, xbar ranges over the dependency cone
/// I_i(M) \ {i} and the map is f^M.
struct SamplePlan {
  Index first = 1;
  Index last = 100;
  double state_radius = 1.0;
  double input_radius = 1.0;
  std::size_t samples = 64;
  std::uint64_t seed = 1;
  long M = 1;
  /// Radii for falsify_uniformity; empty means {state_radius}.
  std::vector<double> radii;
  /// Divergence cap on sup_i kappa_i(r).
  double cap = 100.0;
};

/// Sampled verdict over the index window; never a proof.
CertificateReport check_growth_bound(const NetworkSpec& spec, const KBoundEstimate& est,
                                     const SamplePlan& plan, const Tolerance& tol = {});

struct GrowthProfile {
  std::vector<double> radii;
  std::vector<Index> indices;
  /// gain[k][r] = max over samples at radius radii[r] of |f_i| - |f_i(0, 0, 0)|
  /// for index indices[k]; samples at radius r use r for state and input.
  std::vector<std::vector<double>> gain;
  std::vector<double> sup;        // per radius
  std::vector<Index> sup_index;   // first index attaining sup
  bool divergent = false;
  std::optional<Index> first_exceeding;  // smallest index whose gain exceeds cap
};

GrowthProfile falsify_uniformity(const NetworkSpec& spec, const SamplePlan& plan);

/// State-norm envelope implied by a set-distance estimate and sets of
/// radius <= set_radius: C' = kappa1(2C) + C, kappa' = max{kappa1 o 2id, kappa2}.
/// For SetDistance2 the neighbor distance is further bounded by |xbar| + C,
/// giving C' + kappa'(2C) and kappa' o 2id.
KBoundEstimate derived_envelope(const KBoundEstimate& est, double set_radius);

}  // namespace netiss
