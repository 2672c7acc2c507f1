#include "netiss/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "netiss/random.hpp"

namespace netiss {

std::size_t NetworkSpec::class_slot(Index i) const {
  if (i < 1) throw SpecError("index " + std::to_string(i) + " is outside N = {1, 2, ...}");
  const std::size_t slot = assign(i);
  if (slot >= classes.size())
    throw SpecError("index " + std::to_string(i) + " is assigned to undefined class slot " +
                    std::to_string(slot));
  return slot;
}

const SubsystemClass& NetworkSpec::class_of(Index i) const { return classes[class_slot(i)]; }

std::vector<Index> NetworkSpec::neighbors_of(Index i) const {
  auto nb = neighbors(i);
  for (Index j : nb) {
    if (j == i) throw SpecError("self-loop at " + std::to_string(i));
    if (j < 1)
      throw SpecError("neighbor " + std::to_string(j) + " of " + std::to_string(i) +
                      " is outside N");
  }
  if (max_out_degree && nb.size() > *max_out_degree)
    throw SpecError("degree bound exceeded at " + std::to_string(i) + ": " +
                    std::to_string(nb.size()) + " > " + std::to_string(*max_out_degree));
  return nb;
}

Vec NetworkSpec::params(Index i) const {
  const auto& cls = class_of(i);
  return cls.params_rule ? cls.params_rule(i) : Vec{};
}

Vec StateWindow::at(Index i) const {
  if (auto it = entries_.find(i); it != entries_.end()) return it->second;
  if (default_rule_) return default_rule_(i);
  throw IncompleteInitialCondition(i);
}

StateWindow StateWindow::constant(Vec value) {
  StateWindow w;
  w.set_default([value = std::move(value)](Index) { return value; });
  return w;
}

StateWindow StateWindow::uniform(std::uint64_t seed, double low, double high, std::size_t dim) {
  if (!(low <= high)) throw std::invalid_argument("uniform window: low > high");
  StateWindow w;
  w.set_default([=](Index i) {
    Vec x(dim);
    for (std::size_t c = 0; c < dim; ++c)
      x[c] = low + (high - low) * unit_uniform(seed, pair_stream(static_cast<std::uint64_t>(i), c));
    return x;
  });
  return w;
}

Vec InputSignal::operator()(Index i, long k) const {
  if (!rule_) throw std::logic_error("input signal has no rule");
  Vec u = rule_(i, k);
  if (norm(u) > declared_sup_norm_)
    throw std::domain_error("input at index " + std::to_string(i) + ", time " + std::to_string(k) +
                            " exceeds the declared sup-norm");
  return u;
}

InputSignal InputSignal::constant(double value, std::size_t dim) {
  return InputSignal([value, dim](Index, long) { return Vec(dim, value); }, std::abs(value));
}

SpecDiagnostics validate_spec(const NetworkSpec& spec, Index sample_window) {
  if (sample_window < 1) throw std::invalid_argument("validate_spec: sample_window must be >= 1");
  SpecDiagnostics diag;
  diag.window = sample_window;
  auto violate = [&](std::string msg) { diag.violations.push_back(std::move(msg)); };

  Index reach = 0;
  std::vector<std::vector<Index>> lists(static_cast<std::size_t>(sample_window) + 1);
  for (Index i = 1; i <= sample_window; ++i) {
    const auto& cls = spec.class_of(i);  // throws SpecError on undefined class
    auto nb = spec.neighbors(i);
    diag.max_out_degree = std::max(diag.max_out_degree, nb.size());
    if (spec.max_out_degree && nb.size() > *spec.max_out_degree)
      violate("degree bound exceeded at " + std::to_string(i) + ": " + std::to_string(nb.size()) +
              " > " + std::to_string(*spec.max_out_degree));
    bool range_ok = true;
    std::set<Index> seen;
    for (Index j : nb) {
      if (j == i) violate("self-loop at " + std::to_string(i));
      if (j < 1) {
        violate("neighbor " + std::to_string(j) + " of " + std::to_string(i) + " is outside N");
        range_ok = false;
      }
      if (!seen.insert(j).second)
        violate("duplicate neighbor " + std::to_string(j) + " at " + std::to_string(i));
      reach = std::max(reach, j > i ? j - i : i - j);
    }
    if (cls.neighbor_arity && nb.size() != *cls.neighbor_arity)
      violate("arity mismatch at " + std::to_string(i) + ": class " + cls.id + " expects " +
              std::to_string(*cls.neighbor_arity) + " neighbors, rule gives " +
              std::to_string(nb.size()));
    if (cls.target_set && range_ok) {
      const auto dim = cls.target_set(i).dim();
      if (dim != cls.state_dim)
        violate("target set dimension mismatch at " + std::to_string(i));
    }
    lists[static_cast<std::size_t>(i)] = std::move(nb);
  }

  // In-degree of i in 1..window: scan every j that can reach it.
  std::unordered_map<Index, std::size_t> in_degree;
  // Rules with enormous offsets are scanned only up to a bounded extent.
  const Index scan_cap = 16 * sample_window + 1024;
  const Index scan_last = sample_window + std::min(reach, scan_cap);
  if (reach > scan_cap)
    violate("in-degree scan truncated: neighbor offsets reach " + std::to_string(reach));
  for (Index j = 1; j <= scan_last; ++j) {
    const auto nb = j <= sample_window ? lists[static_cast<std::size_t>(j)] : spec.neighbors(j);
    for (Index i : nb)
      if (i >= 1 && i <= sample_window) ++in_degree[i];
  }
  for (const auto& [i, d] : in_degree) diag.max_in_degree = std::max(diag.max_in_degree, d);
  if (spec.max_in_degree && diag.max_in_degree > *spec.max_in_degree)
    violate("in-degree bound exceeded: " + std::to_string(diag.max_in_degree) + " > " +
            std::to_string(*spec.max_in_degree));
  return diag;
}

Vec subsystem_step(const NetworkSpec& spec, Index i, std::span<const double> x,
                   std::span<const double> xbar, std::span<const double> u) {
  const auto& cls = spec.class_of(i);
  if (x.size() != cls.state_dim)
    throw std::invalid_argument("subsystem_step: state dimension mismatch at " + std::to_string(i));
  if (u.size() != cls.input_dim)
    throw std::invalid_argument("subsystem_step: input dimension mismatch at " + std::to_string(i));
  std::size_t want = 0;
  for (Index j : spec.neighbors_of(i)) want += spec.state_dim(j);
  if (xbar.size() != want)
    throw std::invalid_argument("subsystem_step: neighbor dimension mismatch at " +
                                std::to_string(i));
  const Vec params = spec.params(i);
  Vec out(cls.state_dim);
  cls.dynamics(StepArgs{i, x, xbar, u, params}, out);
  return out;
}

Dynamics AffineDynamics::as_dynamics() const {
  if (A.size() != n * n) throw std::invalid_argument("affine dynamics: A must be n x n");
  if (B.size() != n * p) throw std::invalid_argument("affine dynamics: B must be n x p");
  if (!c.empty() && c.size() != n) throw std::invalid_argument("affine dynamics: c must have n entries");
  if (D.size() != neighbor_dims.size())
    throw std::invalid_argument("affine dynamics: one D block per neighbor slot");
  for (std::size_t k = 0; k < D.size(); ++k)
    if (D[k].size() != n * neighbor_dims[k])
      throw std::invalid_argument("affine dynamics: D block size mismatch");
  // Summation order per row: A x, then neighbor slots in order, then B u, then c.
  return [self = *this](const StepArgs& a, std::span<double> out) {
    std::size_t width = 0;
    for (auto d : self.neighbor_dims) width += d;
    if (a.neighbors.size() != width)
      throw std::invalid_argument("affine dynamics: neighbor arity mismatch at " +
                                  std::to_string(a.index));
    for (std::size_t r = 0; r < self.n; ++r) {
      double acc = 0.0;
      for (std::size_t q = 0; q < self.n; ++q) acc += self.A[r * self.n + q] * a.state[q];
      std::size_t off = 0;
      for (std::size_t k = 0; k < self.D.size(); ++k) {
        const auto w = self.neighbor_dims[k];
        for (std::size_t q = 0; q < w; ++q) acc += self.D[k][r * w + q] * a.neighbors[off + q];
        off += w;
      }
      for (std::size_t q = 0; q < self.p; ++q) acc += self.B[r * self.p + q] * a.input[q];
      if (!self.c.empty()) acc += self.c[r];
      out[r] = acc;
    }
  };
}

}  // namespace netiss
