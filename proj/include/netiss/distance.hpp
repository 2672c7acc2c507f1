#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "netiss/types.hpp"

namespace netiss {

struct SetNode;

/// Nonempty closed subset of R^n in closed form.
class ClosedSet {
 public:
  static ClosedSet point(Vec a);
  static ClosedSet box(Vec lower, Vec upper);
  static ClosedSet ball(Vec center, double radius, Norm ball_norm = Norm::Sup);
  static ClosedSet finite_union(std::vector<ClosedSet> members);

  std::size_t dim() const;
  bool contains(std::span<const double> x) const;
  /// A representative interior point (point, box midpoint, ball center,
  /// first member of a union). Grids are laid out around it.
  Vec anchor() const;
  /// sup over the set of |y| in the given norm.
  double radius(Norm n = Norm::Sup) const;

  const SetNode& node() const { return *node_; }

 private:
  explicit ClosedSet(std::shared_ptr<const SetNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const SetNode> node_;
};

namespace set {
struct Point {
  Vec a;
};
struct Box {
  Vec lower, upper;
};
struct Ball {
  Vec center;
  double radius;
  Norm norm;
};
struct Union {
  std::vector<ClosedSet> members;
};
}  // namespace set

struct SetNode {
  std::variant<set::Point, set::Box, set::Ball, set::Union> value;
};

struct Projection {
  double distance = 0.0;
  Vec witness;  // y* in A with |x - y*| == distance
};

/// Exact distance and minimizer. Throws std::invalid_argument on dimension
/// mismatch and std::domain_error for a euclidean ball under the sup metric.
Projection project(std::span<const double> x, const ClosedSet& A, Norm metric = Norm::Sup);

inline double dist(std::span<const double> x, const ClosedSet& A, Norm metric = Norm::Sup) {
  return project(x, A, metric).distance;
}

using SetRule = std::function<ClosedSet(Index)>;

class StateWindow;

struct ProductDistance {
  double value = 0.0;
  Index argmax = 0;  // 0 when the window is empty
  Index window_first = 0, window_last = 0;
  bool sup_over_window = true;  // the value is a sup over evaluated indices only
};

/// max over stored indices of dist(w[i], sets(i)).
ProductDistance dist_product(const StateWindow& w, const SetRule& sets, Norm metric = Norm::Sup);

struct UniformBound {
  bool bounded = false;
  double C = 0.0;          // max radius over the sampled window
  double slope = 0.0;      // least-squares radius growth per index
  Index witness_index = 0; // index attaining C
  double witness_radius = 0.0;
};

/// Per-index set radius over 1..sample_n. Bounded iff the fitted slope is
/// negligible (<= 1e-9 (1 + C)); otherwise the growth is the violation witness.
UniformBound uniformly_bounded(const SetRule& sets, Index sample_n, Norm metric = Norm::Sup);

struct MetricValue {
  double partial = 0.0;     // sum over i = 1..terms
  double tail_bound = 0.0;  // 2^{-terms}
};

/// Truncated metric of the extended space, sum 2^{-i} |x_i-y_i| / (1+|x_i-y_i|).
MetricValue extended_metric(const StateWindow& x, const StateWindow& y, Index terms,
                            Norm metric = Norm::Sup);

}  // namespace netiss
