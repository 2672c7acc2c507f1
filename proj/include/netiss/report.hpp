#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "netiss/types.hpp"

namespace netiss {

/// Residual tolerance: an inequality lhs <= rhs is violated when
/// lhs - rhs > abs + rel * max(|lhs|, |rhs|).
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;
  bool violated(double lhs, double rhs) const;
};

struct Witness {
  Index index = 0;
  long step = 0;
  std::map<Index, Vec> state;
  Vec input;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

struct InequalityResult {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;  // max over samples of lhs - rhs
  std::size_t checked = 0;
  std::optional<Witness> witness;  // sample attaining worst_residual
};

/// Outcome of a sampled certificate check. Verdicts are sampled, never proofs.
struct CertificateReport {
  std::string title;
  bool passed = true;
  std::deque<InequalityResult> checks;  // stable references for ResidualTracker
  Tolerance tolerance;
  nlohmann::json grid = nlohmann::json::object();
  std::vector<std::string> notes;

  InequalityResult& add(std::string name);
  /// Recomputes `passed` from the individual checks.
  void finalize();
  /// Merges another report's checks (prefixing their names).
  void absorb(const CertificateReport& other, const std::string& prefix);
};

/// Running worst-case tracker for one inequality. The witness is the worst
/// violating sample when any sample violates, else the worst sample overall;
/// ties keep the earlier sample.
class ResidualTracker {
 public:
  ResidualTracker(InequalityResult& slot, const Tolerance& tol) : slot_(slot), tol_(tol) {}
  /// Returns true if this sample violates the tolerance.
  bool record(double lhs, double rhs, const std::function<Witness()>& make_witness);

 private:
  InequalityResult& slot_;
  const Tolerance& tol_;
  bool any_ = false;
  bool witness_bad_ = false;
};

}  // namespace netiss
