#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netiss/distance.hpp"
#include "netiss/types.hpp"

namespace netiss {

/// Arguments of one subsystem update x_i^+ = f_i(x_i, xbar_i, u_i).
/// `neighbors` holds the neighbor states concatenated in neighbor-rule order.
struct StepArgs {
  Index index;
  std::span<const double> state;
  std::span<const double> neighbors;
  std::span<const double> input;
  std::span<const double> params;
};

/// Must be deterministic and free of shared mutable state; it is called
/// concurrently for distinct indices.
using Dynamics = std::function<void(const StepArgs&, std::span<double> out)>;

struct SubsystemClass {
  std::string id;
  std::size_t state_dim = 1;
  std::size_t input_dim = 1;
  Dynamics dynamics;
  /// Per-index parameters handed to `dynamics`; empty when unset.
  std::function<Vec(Index)> params_rule;
  SetRule target_set;
  Norm norm = Norm::Sup;
  /// Expected neighbor count, when the dynamics has a fixed arity.
  std::optional<std::size_t> neighbor_arity;
};

/// Class-based description of a countable, locally finite network. All
/// rules are closed-form; nothing is materialized per index.
struct NetworkSpec {
  std::string name;
  std::vector<SubsystemClass> classes;
  std::function<std::size_t(Index)> assign;          // index -> slot in `classes`
  std::function<std::vector<Index>(Index)> neighbors; // finite ordered list
  std::optional<std::size_t> max_out_degree;
  std::optional<std::size_t> max_in_degree;

  /// Class of index i. Throws SpecError for i < 1 or an undefined class slot.
  const SubsystemClass& class_of(Index i) const;
  std::size_t class_slot(Index i) const;
  std::size_t state_dim(Index i) const { return class_of(i).state_dim; }
  /// Neighbor list with index-range and self-loop checks (throws SpecError).
  std::vector<Index> neighbors_of(Index i) const;
  ClosedSet target_set(Index i) const { return class_of(i).target_set(i); }
  Vec params(Index i) const;
};

/// Finite-support view of a (possibly infinite) state sequence.
class StateWindow {
 public:
  StateWindow() = default;

  void set(Index i, Vec x) { entries_[i] = std::move(x); }
  void set_default(std::function<Vec(Index)> rule) { default_rule_ = std::move(rule); }

  bool has(Index i) const { return entries_.count(i) > 0 || static_cast<bool>(default_rule_); }
  /// Stored value, else the default rule; throws IncompleteInitialCondition.
  Vec at(Index i) const;
  const std::map<Index, Vec>& entries() const { return entries_; }
  bool has_default() const { return static_cast<bool>(default_rule_); }

  /// Constant value for every index.
  static StateWindow constant(Vec value);
  /// Index-addressed uniform values on [low, high] from a splitmix64 stream
  /// (see random.hpp); component c of index i depends only on (seed, i, c).
  static StateWindow uniform(std::uint64_t seed, double low, double high, std::size_t dim = 1);

 private:
  std::map<Index, Vec> entries_;
  std::function<Vec(Index)> default_rule_;
};

/// External input u_i(k) with a declared bound on ||u||_inf.
class InputSignal {
 public:
  InputSignal() = default;
  InputSignal(std::function<Vec(Index, long)> rule, double declared_sup_norm)
      : rule_(std::move(rule)), declared_sup_norm_(declared_sup_norm) {}

  /// Throws std::domain_error if the sampled value exceeds the declared bound.
  Vec operator()(Index i, long k) const;
  double declared_sup_norm() const { return declared_sup_norm_; }

  static InputSignal constant(double value, std::size_t dim = 1);
  static InputSignal zero(std::size_t dim = 1) { return constant(0.0, dim); }

 private:
  std::function<Vec(Index, long)> rule_;
  double declared_sup_norm_ = 0.0;
};

struct SpecDiagnostics {
  std::vector<std::string> violations;  // empty == pass
  std::size_t max_out_degree = 0;
  std::size_t max_in_degree = 0;
  Index window = 0;
  bool passed() const { return violations.empty(); }
};

/// Checks self-loops, index range, arity vs. dynamics and degree bounds on
/// 1..sample_window. Throws SpecError if `assign` names an undefined class.
SpecDiagnostics validate_spec(const NetworkSpec& spec, Index sample_window);

/// One application of f_i. Throws std::invalid_argument on dimension mismatch.
Vec subsystem_step(const NetworkSpec& spec, Index i, std::span<const double> x,
                   std::span<const double> xbar, std::span<const double> u);

/// Affine dynamics x+ = A x + sum_k D_k xbar_k + B u + c with fixed matrices
/// (row-major); neighbor slot k has dimension neighbor_dims[k].
struct AffineDynamics {
  std::size_t n = 1, p = 1;
  std::vector<double> A;                     // n x n
  std::vector<std::vector<double>> D;        // per slot: n x neighbor_dims[k]
  std::vector<std::size_t> neighbor_dims;
  std::vector<double> B;                     // n x p
  std::vector<double> c;                     // n
  Dynamics as_dynamics() const;
};

}  // namespace netiss
