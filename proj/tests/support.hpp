#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "netiss/network.hpp"
#include "netiss/random.hpp"

namespace testing_support {

using netiss::Index;
using netiss::Vec;

inline netiss::SubsystemClass scalar_class(std::string id, netiss::Dynamics f) {
  netiss::SubsystemClass c;
  c.id = std::move(id);
  c.dynamics = std::move(f);
  c.target_set = [](Index) { return netiss::ClosedSet::point({0.0}); };
  return c;
}

/// x_i+ = a x_i + d x_{i+1} + b u_i
inline netiss::NetworkSpec chain(double a, double d, double b = 0.0) {
  netiss::NetworkSpec s;
  s.name = "chain";
  s.classes = {scalar_class("c", [a, d, b](const netiss::StepArgs& g, std::span<double> out) {
    out[0] = a * g.state[0] + d * g.neighbors[0] + b * g.input[0];
  })};
  s.assign = [](Index) { return std::size_t{0}; };
  s.neighbors = [](Index i) { return std::vector<Index>{i + 1}; };
  return s;
}

inline netiss::NetworkSpec decoupled(double a) {
  netiss::NetworkSpec s;
  s.classes = {scalar_class("d", [a](const netiss::StepArgs& g, std::span<double> out) { out[0] = a * g.state[0]; })};
  s.assign = [](Index) { return std::size_t{0}; };
  s.neighbors = [](Index) { return std::vector<Index>{}; };
  return s;
}

/// Random nonlinear network: 1..3 classes assigned by residue, state
/// dimension 1 or 2, per-class neighbor offsets in [-3, 3] \ {0} (negative
/// targets dropped), x+ = a x + d sum tanh(xbar) + b u.
inline netiss::NetworkSpec random_network(std::uint64_t seed) {
  auto draw = [seed, n = std::uint64_t{0}]() mutable { return netiss::unit_uniform(seed, n++); };
  const std::size_t ncls = 1 + static_cast<std::size_t>(draw() * 3);
  netiss::NetworkSpec s;
  s.name = "random";
  std::vector<std::vector<Index>> offsets(ncls);
  for (std::size_t k = 0; k < ncls; ++k) {
    const double a = 2.0 * draw() - 1.0, d = 2.0 * draw() - 1.0, b = draw();
    const std::size_t dim = draw() < 0.5 ? 1 : 2;
    const std::size_t deg = static_cast<std::size_t>(draw() * 3);
    for (std::size_t q = 0; q < deg; ++q) {
      Index off = static_cast<Index>(draw() * 6) - 3;
      if (off >= 0) ++off;
      if (std::find(offsets[k].begin(), offsets[k].end(), off) == offsets[k].end()) offsets[k].push_back(off);
    }
    netiss::SubsystemClass c;
    c.id = "k" + std::to_string(k);
    c.state_dim = dim;
    c.dynamics = [a, d, b](const netiss::StepArgs& g, std::span<double> out) {
      double coupling = 0.0;
      for (double y : g.neighbors) coupling += std::tanh(y);
      for (std::size_t q = 0; q < out.size(); ++q) out[q] = a * g.state[q] + d * coupling + b * g.input[0];
    };
    c.target_set = [dim](Index) { return netiss::ClosedSet::point(Vec(dim, 0.0)); };
    s.classes.push_back(std::move(c));
  }
  s.assign = [ncls](Index i) { return static_cast<std::size_t>(i % static_cast<Index>(ncls)); };
  s.neighbors = [offsets, ncls](Index i) {
    std::vector<Index> out;
    for (Index off : offsets[static_cast<std::size_t>(i % static_cast<Index>(ncls))])
      if (i + off >= 1) out.push_back(i + off);
    return out;
  };
  return s;
}

/// Uniform initial values on [low, high] with the state dimension of each index.
inline netiss::StateWindow matched_uniform(const netiss::NetworkSpec& spec, std::uint64_t seed, double low,
                                           double high) {
  const auto base = netiss::StateWindow::uniform(seed, low, high, 2);
  netiss::StateWindow w;
  w.set_default([spec, base](Index i) {
    Vec x = base.at(i);
    x.resize(spec.state_dim(i));
    return x;
  });
  return w;
}

/// Dense reference simulation on indices 1..N: every step recomputes every
/// index whose neighbors all lie in the currently valid range. Index i is
/// valid at step k when all of its k-step dependencies are inside 1..N.
inline std::vector<std::map<Index, Vec>> dense_simulation(const netiss::NetworkSpec& spec,
                                                          const netiss::StateWindow& xi,
                                                          const netiss::InputSignal& u, Index N, long K) {
  std::vector<std::map<Index, Vec>> out(static_cast<std::size_t>(K) + 1);
  for (Index i = 1; i <= N; ++i) out[0][i] = xi.at(i);
  for (long k = 0; k < K; ++k) {
    const auto& prev = out[static_cast<std::size_t>(k)];
    auto& next = out[static_cast<std::size_t>(k) + 1];
    for (const auto& [i, x] : prev) {
      Vec xbar;
      bool ok = true;
      for (Index j : spec.neighbors_of(i)) {
        auto it = prev.find(j);
        if (it == prev.end()) {
          ok = false;
          break;
        }
        xbar.insert(xbar.end(), it->second.begin(), it->second.end());
      }
      if (ok) next[i] = netiss::subsystem_step(spec, i, x, xbar, u(i, k));
    }
  }
  return out;
}

/// Brute-force max-norm distance from x to a box by scanning each coordinate
/// of the box on a grid of the given step.
inline double brute_box_distance(const Vec& x, const Vec& lo, const Vec& hi, double step) {
  double worst = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    double best = INFINITY;
    const long n = static_cast<long>(std::ceil((hi[c] - lo[c]) / step));
    for (long t = 0; t <= n; ++t) {
      const double y = std::min(hi[c], lo[c] + static_cast<double>(t) * step);
      best = std::min(best, std::abs(x[c] - y));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

/// Smallest M >= 1 with C^b rho^{bM} w_upper <= kappa w_lower, by scanning.
inline long scan_converse_M(double C, double rho, double b, double wl, double wu, double kappa) {
  for (long M = 1; M < 100000; ++M)
    if (std::pow(C, b) * std::pow(rho, b * static_cast<double>(M)) * wu <= kappa * wl * (1 + 1e-12)) return M;
  return -1;
}

}  // namespace testing_support
