#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace netiss {

struct GainNode;

/// A scalar comparison function R+ -> R+ built from a closed set of
/// variants. Values are immutable and cheap to copy (shared tree), so they
/// can be evaluated concurrently.
class ScalarGain {
 public:
  ScalarGain();  // Zero

  static ScalarGain zero();
  static ScalarGain linear(double slope);
  static ScalarGain power(double coeff, double exponent);
  /// Breakpoints (r, g(r)); r strictly increasing starting at (0, 0), g
  /// nondecreasing. Extrapolates past the last breakpoint with the final slope.
  static ScalarGain piecewise(std::vector<std::pair<double, double>> points);
  static ScalarGain max(std::vector<ScalarGain> terms);
  static ScalarGain sum(std::vector<ScalarGain> terms);
  static ScalarGain compose(ScalarGain outer, ScalarGain inner);

  /// Evaluates g(r). Throws std::domain_error for r < 0 or NaN.
  double operator()(double r) const;

  const GainNode& node() const { return *node_; }
  bool is_zero() const;
  std::string describe() const;

 private:
  explicit ScalarGain(std::shared_ptr<const GainNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const GainNode> node_;
};

namespace gain {
struct Zero {};
struct Linear {
  double slope;
};
struct Power {
  double coeff;
  double exponent;
};
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> points;
};
struct Max {
  std::vector<ScalarGain> terms;
};
struct Sum {
  std::vector<ScalarGain> terms;
};
struct Compose {
  ScalarGain outer;
  ScalarGain inner;
};
}  // namespace gain

struct GainNode {
  std::variant<gain::Zero, gain::Linear, gain::Power, gain::PiecewiseLinear, gain::Max, gain::Sum,
               gain::Compose>
      value;
};

/// Closed-form inverse for Linear (slope > 0) and Power (coeff > 0).
/// Any other variant throws std::invalid_argument.
ScalarGain inverse(const ScalarGain& g);

/// k-fold self composition; iterate(g, 0) is the identity.
ScalarGain iterate(const ScalarGain& g, int k);

struct IdentityComparison {
  bool less_than_identity = false;
  double worst_margin = 0.0;  // min over grid of r - g(r)
  double witness_r = 0.0;
};

/// g(r) < r on the grid {R j / n : j = 1..n}.
IdentityComparison is_less_than_identity(const ScalarGain& g, double radius, int grid_n);

struct Domination {
  bool dominated = false;
  double worst_excess = 0.0;  // max over grid of g(r) - h(r)
  double witness_r = 0.0;
};

/// g(r) <= h(r) + tol on the grid {R j / n : j = 0..n}.
Domination check_dominated(const ScalarGain& g, const ScalarGain& h, double radius, int grid_n,
                           double tol = 0.0);

enum class GainClass { Zero, K, KInfinityCandidate, NotK };

std::string to_string(GainClass c);

/// Sampled verdict only. Strictly increasing means
/// g(r2) - g(r1) > 1e-12 * max(1, g(r2)) between consecutive grid points.
GainClass sampled_class_check(const ScalarGain& g, double radius, int grid_n,
                              double unbounded_threshold = 1.0);

namespace kl {
/// beta(r, k) = C rho^k r
struct Exponential {
  double C;
  double rho;
};
/// beta(r, k) = phi(r) * decay[min(k, size - 1)]
struct Product {
  ScalarGain phi;
  std::vector<double> decay;
};
/// beta(r, k) = lower^{-1}(alpha^k(upper(r)))
struct LyapunovChain {
  ScalarGain lower_inverse;
  ScalarGain alpha;
  ScalarGain upper;
};
}  // namespace kl

class KLBound {
 public:
  using Node = std::variant<kl::Exponential, kl::Product, kl::LyapunovChain>;

  static KLBound exponential(double C, double rho);
  static KLBound product(ScalarGain phi, std::vector<double> decay);
  static KLBound lyapunov_chain(const ScalarGain& lower, ScalarGain alpha, ScalarGain upper);

  double operator()(double r, long k) const;
  const Node& node() const { return node_; }

 private:
  explicit KLBound(Node n) : node_(std::move(n)) {}
  Node node_;
};

}  // namespace netiss
