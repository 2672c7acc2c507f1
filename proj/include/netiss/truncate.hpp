#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "netiss/certify.hpp"
#include "netiss/comparison.hpp"
#include "netiss/network.hpp"
#include "netiss/report.hpp"
#include "netiss/sim.hpp"

namespace netiss {

/// First n subsystems of a network; states of outside neighbors (the
/// interface set) enter as an extra input x~.
struct TruncatedNetwork {
  const NetworkSpec* spec = nullptr;
  Index n = 0;
  /// I<n> = (union of neighbors(i), i <= n) \ {1..n}, sorted.
  std::vector<Index> interface;
  std::shared_ptr<const Layout> inner;   // 1..n
  std::shared_ptr<const Layout> source;  // 1..n followed by the interface
};

/// `spec` must outlive the result. Throws std::invalid_argument for n < 1.
TruncatedNetwork build_truncation(const NetworkSpec& spec, Index n);

/// x~(k) for k = 0..K on the interface layout.
struct InterfaceSignal {
  std::shared_ptr<const Layout> layout;
  std::vector<Vec> values;
  std::string mode;  // "recorded" or "zero"
};

InterfaceSignal zero_interface(const TruncatedNetwork& tn, long K);

/// Interface components of the full simulation of {1..n} ∪ I<n>.
InterfaceSignal record_interface_signal(const NetworkSpec& spec, Index n, const StateWindow& xi,
                                        const InputSignal& u, long K, const SimOptions& opt = {});

struct TruncatedTrajectory {
  std::shared_ptr<const Layout> layout;  // 1..n
  std::vector<Vec> states;               // k = 0..K
  InterfaceSignal interface;
  double input_sup_norm = 0.0;
  long horizon = 0;

  Snapshot snapshot(long k) const { return {layout, states.at(static_cast<std::size_t>(k))}; }
};

/// Steps the truncation with the given interface signal; the per-index
/// arithmetic is the same kernel the full simulation uses.
TruncatedTrajectory simulate_truncated(const TruncatedNetwork& tn, const StateWindow& xi,
                                       const InputSignal& u, long K, const InterfaceSignal& x_tilde,
                                       const SimOptions& opt = {});

/// V<n>(xi) = max_{1 <= i <= n} W_i(xi_i). Throws IncompleteInitialCondition
/// if w misses an index of 1..n.
double truncated_V(const StorageFamily& family, const NetworkSpec& spec, Index n, const StateWindow& w);

/// V<n>(k+1) <= max{alpha(V<n>(k)), alpha(omega_bar(|x~(k)|_inf)), gamma_u_bar(|u|)}, k = 0..K-1.
CertificateReport check_truncated_decay(const TruncatedNetwork& tn, const StorageFamily& family,
                                        const ScalarGain& alpha, const ScalarGain& omega_bar,
                                        const ScalarGain& gamma_u_bar, const TruncatedTrajectory& traj,
                                        const Tolerance& tol = {});

/// |x~(k)|_A <= max{beta(|xi<n>|_A, k), gamma(|u|)} for the recorded signal.
CertificateReport check_interface_bound(const NetworkSpec& spec, const TruncatedNetwork& tn,
                                        const InterfaceSignal& x_tilde, const StateWindow& xi,
                                        const KLBound& beta, const ScalarGain& gamma,
                                        double input_sup_norm, const Tolerance& tol = {});

struct ConsistencyResult {
  bool passed = false;          // bitwise equality at every step and index
  double max_deviation = 0.0;
  std::size_t compared = 0;     // number of scalar entries compared
  std::optional<std::pair<long, Index>> first_mismatch;
};

/// Runs the truncation driven by the recorded interface signal and compares
/// it with the first n components of the full simulation.
ConsistencyResult consistency_check(const NetworkSpec& spec, Index n, const StateWindow& xi,
                                    const InputSignal& u, long K, const SimOptions& opt = {});

}  // namespace netiss
