#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netiss/comparison.hpp"
#include "netiss/network.hpp"
#include "netiss/report.hpp"
#include "netiss/sim.hpp"

namespace netiss {

/// Per-class storage function W_i, always a function of the deviation from
/// the class target set A_i.
struct StorageFunction {
  enum class Kind {
    WeightedDistance,  // weight * |x|_{A_i}
    DistancePower,     // weight * |x|_{A_i}^exponent
    Quadratic,         // (x - a)^T P (x - a), a = anchor of A_i
  };
  Kind kind = Kind::WeightedDistance;
  double weight = 1.0;
  double exponent = 1.0;
  std::vector<double> P;  // row-major, Quadratic only
  ScalarGain lower = ScalarGain::linear(1.0);
  ScalarGain upper = ScalarGain::linear(1.0);

  double operator()(std::span<const double> x, const ClosedSet& target, Norm metric) const;
};

struct StorageFamily {
  std::map<std::string, StorageFunction> per_class;  // keyed by class id
  ScalarGain lower = ScalarGain::linear(1.0);        // uniform envelopes
  ScalarGain upper = ScalarGain::linear(1.0);

  /// W_i(x). Throws SpecError if the class of i has no storage function.
  double value(const NetworkSpec& spec, Index i, std::span<const double> x) const;
  const StorageFunction& of(const NetworkSpec& spec, Index i) const;

  /// Same function W = |x|_{A_i} with unit bounds for every class.
  static StorageFamily distance_to_sets(const NetworkSpec& spec);
};

/// Internal gains keyed by (class of i, j - i), with an optional uniform
/// fallback; anything unlisted is Zero.
struct GainTable {
  std::map<std::pair<std::string, Index>, ScalarGain> internal;
  std::optional<ScalarGain> uniform_internal;
  std::map<std::string, ScalarGain> input;
  ScalarGain alpha;
  ScalarGain gamma_u_bar;

  ScalarGain internal_gain(const std::string& class_id, Index offset) const;
  ScalarGain input_gain(const std::string& class_id) const;
};

struct EissConstants {
  double C = 1.0;
  double rho = 0.5;
  double b = 1.0;
  double w_lower = 1.0;
  double w_upper = 1.0;
  double kappa = 0.5;
};

/// State grids around the target-set anchor: each of the d coordinates of the
/// checked window takes L = max(2, ceil(points^{1/d})) levels
/// anchor + linspace(-R, R, L) and the tensor product is used. When
/// L^d > 4 * points the grid falls back to `points` index-addressed uniform
/// samples of the same box.
struct GridPlan {
  double radius = 10.0;
  std::size_t points = 1000;
  std::uint64_t seed = 1;
};

struct RepresentativeOptions {
  Index window = 64;           // smallest index of each class within 1..window
  std::size_t extra_random = 0;  // additional random indices from the window
  std::uint64_t seed = 7;
};

/// Smallest index of each class in 1..window, plus optional random extras.
std::vector<Index> class_representatives(const NetworkSpec& spec, const RepresentativeOptions& opt);

/// Grid over the coordinates of `layout` (see GridPlan).
std::vector<Vec> state_grid(const NetworkSpec& spec, const Layout& layout, const GridPlan& plan);

/// lower_i(|x|_{A_i}) <= W_i(x) <= upper_i(|x|_{A_i}) on the grid, plus the
/// uniform envelope ordering lower <= lower_i <= upper_i <= upper.
CertificateReport check_storage_bounds(const StorageFamily& family, const NetworkSpec& spec,
                                       const GridPlan& grid, const RepresentativeOptions& reps = {},
                                       const Tolerance& tol = {});

/// W_i(x_i(M, xi, u)) <= max{ max_{j in I_i(M) ∪ {i}} gamma_ij(W_j(xi_j)), gamma_iu(|u|) }
/// for each representative i, grid point xi on the cone and constant input
/// u ≡ v for v in input_grid (||u||_inf = |v|).
CertificateReport check_M_step_decrease(const NetworkSpec& spec, const StorageFamily& family,
                                        const GainTable& gains, long M, const GridPlan& grid,
                                        const std::vector<double>& input_grid,
                                        const RepresentativeOptions& reps = {},
                                        const Tolerance& tol = {});

/// Every listed internal gain (and the uniform fallback) <= alpha, alpha < id,
/// every input gain <= gamma_u_bar, all on the grid {R j / grid_n}.
CertificateReport small_gain_check(const GainTable& gains, double radius, int grid_n,
                                   const Tolerance& tol = {});

struct OverallValue {
  double value = 0.0;
  std::vector<Index> argmax;  // every index attaining the max
  Index window_first = 0, window_last = 0;
  bool sup_over_window = true;
};

/// V(xi) = sup_i W_i(xi_i), evaluated over the stored entries of w.
OverallValue overall_V(const StorageFamily& family, const NetworkSpec& spec, const StateWindow& w);
OverallValue overall_V(const StorageFamily& family, const NetworkSpec& spec, const Snapshot& s);

/// V(x((m+1)M)) <= max{alpha(V(x(mM))), gamma_u_bar(||u||)} along the
/// trajectory; V at step k is the sup over that step's window.
CertificateReport check_overall_decay(const NetworkSpec& spec, const Trajectory& traj,
                                      const StorageFamily& family, const ScalarGain& alpha,
                                      const ScalarGain& gamma_u_bar, long M,
                                      const Tolerance& tol = {});

/// Least integer M >= 1 with M >= (1/b) log_rho(kappa w_lower / (C^b w_upper)).
long converse_M(const EissConstants& c);

/// V(x(M)) <= max{kappa V(xi), input_bound(||u||)} with V = sup_i W_i; checked
/// per representative (equivalent to the sup form, since the right side is
/// uniform in i).
CertificateReport check_finite_step_eiss(const NetworkSpec& spec, const StorageFamily& family,
                                         long M, double kappa, const ScalarGain& input_bound,
                                         const GridPlan& grid, const std::vector<double>& input_grid,
                                         const RepresentativeOptions& reps = {},
                                         const Tolerance& tol = {});

/// Storage functions plus gains, checked at horizon M.
struct Certificate {
  StorageFamily family;
  GainTable gains;
  long M = 1;
};

/// W_i = |.|_{A_i}, every internal gain Linear(c), input gains gamma,
/// alpha = Linear(c), gamma_u_bar = gamma. Throws std::domain_error unless 0 < c < 1.
Certificate necessity_construct(const NetworkSpec& spec, double c_decay,
                                         const ScalarGain& gamma, long M);

/// |x(k)|_A <= max{beta(|xi|_A, k / stride), gamma(||u||)} at k = 0, stride, 2 stride, ...
CertificateReport check_iss_estimate(const NetworkSpec& spec, const std::vector<Trajectory>& trajs,
                                     const KLBound& beta, const ScalarGain& gamma, long stride,
                                     const Tolerance& tol = {});

}  // namespace netiss
