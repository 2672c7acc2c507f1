#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "netiss/network.hpp"

namespace netiss {

/// Serial is the reference path; Parallel runs the same per-index
/// arithmetic under OpenMP and must agree bitwise.
enum class Exec { Serial, Parallel };

/// Sorted index set with flat storage offsets.
struct Layout {
  std::vector<Index> indices;
  std::vector<std::size_t> offsets;  // size() == indices.size() + 1

  static std::shared_ptr<const Layout> make(const NetworkSpec& spec, std::vector<Index> sorted);
  std::size_t size() const { return indices.size(); }
  std::size_t width() const { return offsets.back(); }
  std::optional<std::size_t> position(Index i) const;
};

/// States of one time step on a layout.
struct Snapshot {
  std::shared_ptr<const Layout> layout;
  Vec values;

  std::span<const double> state_at(std::size_t pos) const {
    return {values.data() + layout->offsets[pos], layout->offsets[pos + 1] - layout->offsets[pos]};
  }
  /// Throws std::out_of_range when i is not in the layout.
  std::span<const double> state_of(Index i) const;
  StateWindow to_window() const;
};

/// Precomputed gather pattern for advancing `target` from `source`.
struct StepPlan {
  std::shared_ptr<const Layout> target;
  std::shared_ptr<const Layout> source;
  std::vector<const SubsystemClass*> cls;
  std::vector<std::size_t> self_src;
  std::vector<std::size_t> nbr_begin;  // CSR over nbr_src / nbr_len
  std::vector<std::size_t> nbr_src;
  std::vector<std::size_t> nbr_len;
  std::vector<std::size_t> nbr_width;
  std::vector<std::size_t> param_begin;  // CSR over params
  Vec params;
};

/// Every neighbor of every target index must lie in `source`.
StepPlan make_step_plan(const NetworkSpec& spec, std::shared_ptr<const Layout> target,
                        std::shared_ptr<const Layout> source);

/// Reference kernel.
void advance_serial(const StepPlan& plan, std::span<const double> src, std::span<double> dst,
                    long k, const InputSignal& u);
/// OpenMP kernel; all reads come from `src`, so the result equals the serial one bitwise.
void advance_parallel(const StepPlan& plan, std::span<const double> src, std::span<double> dst,
                      long k, const InputSignal& u);
void advance(Exec exec, const StepPlan& plan, std::span<const double> src, std::span<double> dst,
             long k, const InputSignal& u);

/// I_S(M): S closed under "take neighbors" M times, sorted.
std::vector<Index> dependency_cone(const NetworkSpec& spec, const std::vector<Index>& S, long M);
/// Layers I_S(0) ⊆ ... ⊆ I_S(M).
std::vector<std::vector<Index>> cone_layers(const NetworkSpec& spec, const std::vector<Index>& S,
                                            long M);

struct Trajectory {
  std::vector<Index> observed;  // sorted S
  long horizon = 0;
  double input_sup_norm = 0.0;
  /// states[k] lives on I_S(K - k); states[K] on S.
  std::vector<Snapshot> states;

  /// Restriction of states[k] to S.
  StateWindow observed_window(long k) const;
};

struct SimOptions {
  Exec exec = Exec::Parallel;
};

/// Backward-cone simulation of x(k, xi, u) for k = 0..K on the cone of S.
Trajectory simulate(const NetworkSpec& spec, const StateWindow& xi, const InputSignal& u, long K,
                    std::vector<Index> S, const SimOptions& opt = {});

/// Static input value u_k, one per step of iterate_M.
using InputValue = std::function<Vec(Index)>;

/// f^M(xi, (u_0..u_{M-1})) restricted to S, evaluated by demand-driven
/// recursion x_i(m) = f_i(x_i(m-1), xbar_i(m-1), u_{m-1}(i)) with memoization.
/// Independent of simulate()'s layered sweep yet bitwise equal to it.
StateWindow iterate_M(const NetworkSpec& spec, const StateWindow& xi,
                      const std::vector<InputValue>& inputs, std::vector<Index> S);

}  // namespace netiss
