#include "netiss/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "netiss/random.hpp"
#include "parallel_for.hpp"

namespace netiss {

namespace {

std::string offset_label(Index off) { return (off > 0 ? "+" : "") + std::to_string(off); }

std::map<Index, Vec> window_map(const Layout& layout, const Vec& point) {
  std::map<Index, Vec> m;
  for (std::size_t p = 0; p < layout.size(); ++p)
    m.emplace(layout.indices[p], Vec(point.begin() + static_cast<std::ptrdiff_t>(layout.offsets[p]),
                                     point.begin() + static_cast<std::ptrdiff_t>(layout.offsets[p + 1])));
  return m;
}

StateWindow to_window(const std::map<Index, Vec>& m) {
  StateWindow w;
  for (const auto& [i, x] : m) w.set(i, x);
  return w;
}

// Sup over the snapshot of |x_i|_{A_i}, with the first maximizing index.
std::pair<double, Index> snapshot_distance(const NetworkSpec& spec, const Snapshot& s) {
  double d = 0.0;
  Index arg = 0;
  for (std::size_t p = 0; p < s.layout->size(); ++p) {
    const Index i = s.layout->indices[p];
    const double di = dist(s.state_at(p), spec.target_set(i), spec.class_of(i).norm);
    if (arg == 0 || di > d) {
      d = di;
      arg = i;
    }
  }
  return {d, arg};
}

}  // namespace

double StorageFunction::operator()(std::span<const double> x, const ClosedSet& target,
                                   Norm metric) const {
  switch (kind) {
    case Kind::WeightedDistance:
      return weight * dist(x, target, metric);
    case Kind::DistancePower:
      return weight * std::pow(dist(x, target, metric), exponent);
    case Kind::Quadratic: {
      const Vec a = target.anchor();
      const std::size_t n = x.size();
      if (P.size() != n * n) throw std::invalid_argument("quadratic storage: P has wrong size");
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < n; ++c) row += P[r * n + c] * (x[c] - a[c]);
        s += (x[r] - a[r]) * row;
      }
      return s;
    }
  }
  return 0.0;
}

const StorageFunction& StorageFamily::of(const NetworkSpec& spec, Index i) const {
  const auto& id = spec.class_of(i).id;
  auto it = per_class.find(id);
  if (it == per_class.end()) throw SpecError("no storage function for class " + id);
  return it->second;
}

double StorageFamily::value(const NetworkSpec& spec, Index i, std::span<const double> x) const {
  const auto& cls = spec.class_of(i);
  return of(spec, i)(x, cls.target_set(i), cls.norm);
}

StorageFamily StorageFamily::distance_to_sets(const NetworkSpec& spec) {
  StorageFamily f;
  for (const auto& cls : spec.classes) f.per_class[cls.id] = StorageFunction{};
  return f;
}

ScalarGain GainTable::internal_gain(const std::string& class_id, Index offset) const {
  if (auto it = internal.find({class_id, offset}); it != internal.end()) return it->second;
  if (uniform_internal) return *uniform_internal;
  return ScalarGain::zero();
}

ScalarGain GainTable::input_gain(const std::string& class_id) const {
  if (auto it = input.find(class_id); it != input.end()) return it->second;
  return ScalarGain::zero();
}

std::vector<Index> class_representatives(const NetworkSpec& spec, const RepresentativeOptions& opt) {
  if (opt.window < 1) throw std::invalid_argument("representative window must be >= 1");
  std::vector<std::optional<Index>> first(spec.classes.size());
  for (Index i = 1; i <= opt.window; ++i) {
    auto& slot = first[spec.class_slot(i)];
    if (!slot) slot = i;
  }
  std::vector<Index> reps;
  for (const auto& f : first)
    if (f) reps.push_back(*f);
  for (std::size_t q = 0; q < opt.extra_random; ++q) {
    const auto i = 1 + static_cast<Index>(unit_uniform(opt.seed, q) * static_cast<double>(opt.window));
    if (std::find(reps.begin(), reps.end(), i) == reps.end()) reps.push_back(i);
  }
  return reps;
}

std::vector<Vec> state_grid(const NetworkSpec& spec, const Layout& layout, const GridPlan& plan) {
  const std::size_t d = layout.width();
  if (plan.points == 0 || d == 0) return {};
  Vec anchor;
  anchor.reserve(d);
  for (Index i : layout.indices) {
    const Vec a = spec.target_set(i).anchor();
    anchor.insert(anchor.end(), a.begin(), a.end());
  }
  const double R = plan.radius;
  const auto points = static_cast<double>(plan.points);
  const auto L = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(std::pow(points, 1.0 / static_cast<double>(d)) - 1e-9)));
  const double total = std::pow(static_cast<double>(L), static_cast<double>(d));

  std::vector<Vec> grid;
  if (total > 4.0 * points) {
    grid.reserve(plan.points);
    for (std::size_t s = 0; s < plan.points; ++s) {
      Vec x(d);
      for (std::size_t c = 0; c < d; ++c)
        x[c] = anchor[c] + R * (2.0 * unit_uniform(plan.seed, pair_stream(s, c)) - 1.0);
      grid.push_back(std::move(x));
    }
    return grid;
  }
  Vec levels(L);
  for (std::size_t j = 0; j < L; ++j)
    levels[j] = -R + 2.0 * R * static_cast<double>(j) / static_cast<double>(L - 1);
  const auto count = static_cast<std::size_t>(total);
  grid.reserve(count);
  std::vector<std::size_t> digit(d, 0);
  for (std::size_t n = 0; n < count; ++n) {
    Vec x(d);
    for (std::size_t c = 0; c < d; ++c) x[c] = anchor[c] + levels[digit[c]];
    grid.push_back(std::move(x));
    for (std::size_t c = d; c-- > 0;) {
      if (++digit[c] < L) break;
      digit[c] = 0;
    }
  }
  return grid;
}

CertificateReport check_storage_bounds(const StorageFamily& family, const NetworkSpec& spec,
                                       const GridPlan& grid, const RepresentativeOptions& reps,
                                       const Tolerance& tol) {
  CertificateReport rep;
  rep.title = "storage bounds";
  rep.tolerance = tol;
  rep.grid = {{"radius", grid.radius}, {"points", grid.points}, {"seed", grid.seed}};

  auto& lower = rep.add("lower_i(|x|_A) <= W_i(x)");
  auto& upper = rep.add("W_i(x) <= upper_i(|x|_A)");
  ResidualTracker lo(lower, tol), up(upper, tol);
  const auto indices = class_representatives(spec, reps);
  rep.grid["representatives"] = indices;
  for (Index i : indices) {
    const auto layout = Layout::make(spec, {i});
    const auto points = state_grid(spec, *layout, grid);
    if (points.empty()) throw std::invalid_argument("storage bounds: empty grid");
    const auto& W = family.of(spec, i);
    const auto& cls = spec.class_of(i);
    const ClosedSet A = cls.target_set(i);
    for (const Vec& x : points) {
      const double d = dist(x, A, cls.norm);
      const double w = W(x, A, cls.norm);
      auto witness = [&] { return Witness{i, 0, {{i, x}}, {}}; };
      lo.record(W.lower(d), w, witness);
      up.record(w, W.upper(d), witness);
    }
  }

  // Envelope ordering on a radial grid.
  auto& env = rep.add("lower <= lower_i <= upper_i <= upper");
  ResidualTracker et(env, tol);
  constexpr int kRadial = 100;
  for (const auto& [id, W] : family.per_class) {
    for (int j = 0; j <= kRadial; ++j) {
      const double r = grid.radius * j / kRadial;
      auto witness = [&] {
        Witness w;
        w.input = {r};
        return w;
      };
      et.record(family.lower(r), W.lower(r), witness);
      et.record(W.lower(r), W.upper(r), witness);
      et.record(W.upper(r), family.upper(r), witness);
    }
  }
  rep.finalize();
  return rep;
}

CertificateReport check_M_step_decrease(const NetworkSpec& spec, const StorageFamily& family,
                                        const GainTable& gains, long M, const GridPlan& grid,
                                        const std::vector<double>& input_grid,
                                        const RepresentativeOptions& reps, const Tolerance& tol) {
  if (M < 1) throw std::invalid_argument("M-step decrease: M must be >= 1");
  if (input_grid.empty()) throw std::invalid_argument("M-step decrease: empty input grid");
  CertificateReport rep;
  rep.title = "M-step decrease (M = " + std::to_string(M) + ")";
  rep.tolerance = tol;
  rep.grid = {{"radius", grid.radius}, {"points", grid.points}, {"seed", grid.seed},
              {"M", M},           {"inputs", input_grid}};
  const auto indices = class_representatives(spec, reps);
  rep.grid["representatives"] = indices;

  for (Index i : indices) {
    const auto& cls_i = spec.class_of(i);
    const auto cone = dependency_cone(spec, {i}, M);
    const auto layout = Layout::make(spec, cone);
    const auto points = state_grid(spec, *layout, grid);
    if (points.empty()) throw std::invalid_argument("M-step decrease: empty grid");

    std::vector<ScalarGain> gamma;
    gamma.reserve(cone.size());
    for (Index j : cone) gamma.push_back(gains.internal_gain(cls_i.id, j - i));
    const ScalarGain gamma_u = gains.input_gain(cls_i.id);

    const std::size_t nin = input_grid.size();
    std::vector<double> lhs(points.size() * nin), rhs(points.size() * nin);
    detail::parallel_for(points.size() * nin, [&](std::size_t t) {
      const Vec& xi = points[t / nin];
      const double v = input_grid[t % nin];
      const StateWindow w = to_window(window_map(*layout, xi));
      const InputValue u = [&spec, v](Index j) { return Vec(spec.class_of(j).input_dim, v); };
      const auto out = iterate_M(spec, w, std::vector<InputValue>(static_cast<std::size_t>(M), u), {i});
      lhs[t] = family.value(spec, i, out.at(i));
      double r = gamma_u(std::abs(v));
      for (std::size_t p = 0; p < layout->size(); ++p) {
        const Index j = layout->indices[p];
        const std::span<const double> xj{xi.data() + layout->offsets[p],
                                         layout->offsets[p + 1] - layout->offsets[p]};
        r = std::max(r, gamma[p](family.value(spec, j, xj)));
      }
      rhs[t] = r;
    });

    auto& slot = rep.add("W_i(x_i(M)) <= max{gamma_ij(W_j), gamma_iu(|u|)} at i = " +
                         std::to_string(i) + " (" + cls_i.id + ")");
    ResidualTracker tr(slot, tol);
    for (std::size_t t = 0; t < lhs.size(); ++t) {
      tr.record(lhs[t], rhs[t], [&] {
        return Witness{i, M, window_map(*layout, points[t / nin]),
                       Vec(cls_i.input_dim, input_grid[t % nin])};
      });
    }
  }
  rep.finalize();
  return rep;
}

CertificateReport small_gain_check(const GainTable& gains, double radius, int grid_n,
                                   const Tolerance& tol) {
  if (!(radius > 0) || grid_n < 1) throw std::invalid_argument("small-gain check: bad grid");
  CertificateReport rep;
  rep.title = "small-gain uniformity";
  rep.tolerance = tol;
  rep.grid = {{"radius", radius}, {"grid_n", grid_n}};

  auto dominated = [&](const std::string& name, const ScalarGain& g, const ScalarGain& h) {
    auto& slot = rep.add(name);
    ResidualTracker tr(slot, tol);
    for (int j = 0; j <= grid_n; ++j) {
      const double r = radius * j / grid_n;
      tr.record(g(r), h(r), [r] {
        Witness w;
        w.input = {r};
        return w;
      });
    }
  };

  {
    const auto id = is_less_than_identity(gains.alpha, radius, grid_n);
    auto& slot = rep.add("alpha < id");
    slot.passed = id.less_than_identity;
    slot.worst_residual = -id.worst_margin;
    slot.checked = static_cast<std::size_t>(grid_n);
    Witness w;
    w.input = {id.witness_r};
    w.lhs = gains.alpha(id.witness_r);
    w.rhs = id.witness_r;
    w.residual = w.lhs - w.rhs;
    slot.witness = w;
  }
  for (const auto& [key, g] : gains.internal)
    dominated("gamma(" + key.first + ", " + offset_label(key.second) + ") <= alpha", g, gains.alpha);
  if (gains.uniform_internal) dominated("uniform gamma <= alpha", *gains.uniform_internal, gains.alpha);
  for (const auto& [cls, g] : gains.input)
    dominated("gamma_u(" + cls + ") <= gamma_u_bar", g, gains.gamma_u_bar);
  rep.finalize();
  return rep;
}

OverallValue overall_V(const StorageFamily& family, const NetworkSpec& spec, const StateWindow& w) {
  OverallValue v;
  const auto& e = w.entries();
  if (e.empty()) return v;
  v.window_first = e.begin()->first;
  v.window_last = e.rbegin()->first;
  for (const auto& [i, x] : e) {
    const double wi = family.value(spec, i, x);
    if (v.argmax.empty() || wi > v.value) {
      v.value = wi;
      v.argmax = {i};
    } else if (wi == v.value) {
      v.argmax.push_back(i);
    }
  }
  return v;
}

OverallValue overall_V(const StorageFamily& family, const NetworkSpec& spec, const Snapshot& s) {
  OverallValue v;
  const auto& L = *s.layout;
  if (L.size() == 0) return v;
  v.window_first = L.indices.front();
  v.window_last = L.indices.back();
  for (std::size_t p = 0; p < L.size(); ++p) {
    const Index i = L.indices[p];
    const double wi = family.value(spec, i, s.state_at(p));
    if (v.argmax.empty() || wi > v.value) {
      v.value = wi;
      v.argmax = {i};
    } else if (wi == v.value) {
      v.argmax.push_back(i);
    }
  }
  return v;
}

CertificateReport check_overall_decay(const NetworkSpec& spec, const Trajectory& traj,
                                      const StorageFamily& family, const ScalarGain& alpha,
                                      const ScalarGain& gamma_u_bar, long M, const Tolerance& tol) {
  if (M < 1) throw std::invalid_argument("overall decay: M must be >= 1");
  if (traj.horizon < M) throw std::invalid_argument("overall decay: horizon shorter than M");
  CertificateReport rep;
  rep.title = "overall decay";
  rep.tolerance = tol;
  rep.grid = {{"M", M}, {"horizon", traj.horizon}, {"input_sup_norm", traj.input_sup_norm}};
  rep.notes.push_back("V at each step is the sup over that step's simulated window");

  auto& slot = rep.add("V(x((m+1)M)) <= max{alpha(V(x(mM))), gamma_u_bar(|u|)}");
  ResidualTracker tr(slot, tol);
  const double input_term = gamma_u_bar(traj.input_sup_norm);
  std::vector<double> V(traj.states.size());
  for (long k = 0; k <= traj.horizon; k += M)
    V[static_cast<std::size_t>(k)] = overall_V(family, spec, traj.states[static_cast<std::size_t>(k)]).value;
  for (long k = 0; k + M <= traj.horizon; k += M) {
    const double lhs = V[static_cast<std::size_t>(k + M)];
    const double rhs = std::max(alpha(V[static_cast<std::size_t>(k)]), input_term);
    tr.record(lhs, rhs, [&] {
      Witness w;
      const auto v = overall_V(family, spec, traj.states[static_cast<std::size_t>(k + M)]);
      w.index = v.argmax.empty() ? 0 : v.argmax.front();
      w.step = k + M;
      if (w.index != 0) {
        const auto s = traj.states[static_cast<std::size_t>(k + M)].state_of(w.index);
        w.state[w.index] = Vec(s.begin(), s.end());
      }
      return w;
    });
  }
  rep.finalize();
  return rep;
}

long converse_M(const EissConstants& c) {
  if (!(c.rho >= 0.0 && c.rho < 1.0)) throw std::domain_error("converse M: rho must lie in [0, 1)");
  if (c.rho == 0.0) return 1;
  if (!(c.kappa > 0.0 && c.kappa < 1.0)) throw std::domain_error("converse M: kappa must lie in (0, 1)");
  if (!(c.C >= 1.0)) throw std::domain_error("converse M: C must be >= 1");
  if (!(c.b > 0.0 && c.w_lower > 0.0 && c.w_upper >= c.w_lower))
    throw std::domain_error("converse M: need b > 0 and 0 < w_lower <= w_upper");
  const double y = c.kappa * c.w_lower / (std::pow(c.C, c.b) * c.w_upper);
  const double x = std::log(y) / std::log(c.rho) / c.b;
  if (!(x > 1.0)) return 1;
  auto m = static_cast<long>(std::ceil(x));
  // ceil(13.000000000001) should still be 13.
  if (m - 1 >= 1 && static_cast<double>(m - 1) >= x - 1e-12 * x) --m;
  return m;
}

CertificateReport check_finite_step_eiss(const NetworkSpec& spec, const StorageFamily& family,
                                         long M, double kappa, const ScalarGain& input_bound,
                                         const GridPlan& grid, const std::vector<double>& input_grid,
                                         const RepresentativeOptions& reps, const Tolerance& tol) {
  GainTable g;
  g.uniform_internal = ScalarGain::linear(kappa);
  for (const auto& cls : spec.classes) g.input[cls.id] = input_bound;
  g.alpha = ScalarGain::linear(kappa);
  g.gamma_u_bar = input_bound;
  auto rep = check_M_step_decrease(spec, family, g, M, grid, input_grid, reps, tol);
  rep.title = "finite-step eISS decrease (M = " + std::to_string(M) + ", kappa = " +
              std::to_string(kappa) + ")";
  return rep;
}

Certificate necessity_construct(const NetworkSpec& spec, double c_decay,
                                         const ScalarGain& gamma, long M) {
  if (!(c_decay > 0.0 && c_decay < 1.0)) throw std::domain_error("necessity: c must lie in (0, 1)");
  if (M < 1) throw std::invalid_argument("necessity: M must be >= 1");
  Certificate out;
  out.family = StorageFamily::distance_to_sets(spec);
  out.gains.uniform_internal = ScalarGain::linear(c_decay);
  for (const auto& cls : spec.classes) out.gains.input[cls.id] = gamma;
  out.gains.alpha = ScalarGain::linear(c_decay);
  out.gains.gamma_u_bar = gamma;
  out.M = M;
  return out;
}

CertificateReport check_iss_estimate(const NetworkSpec& spec, const std::vector<Trajectory>& trajs,
                                     const KLBound& beta, const ScalarGain& gamma, long stride,
                                     const Tolerance& tol) {
  if (stride < 1) throw std::invalid_argument("ISS estimate: stride must be >= 1");
  CertificateReport rep;
  rep.title = "ISS estimate";
  rep.tolerance = tol;
  rep.grid = {{"stride", stride}, {"trajectories", trajs.size()}};
  rep.notes.push_back("distances are sups over each step's simulated window");
  auto& slot = rep.add("|x(k)|_A <= max{beta(|xi|_A, k / stride), gamma(|u|)}");
  ResidualTracker tr(slot, tol);
  for (const auto& traj : trajs) {
    const double d0 = snapshot_distance(spec, traj.states.front()).first;
    const double input_term = gamma(traj.input_sup_norm);
    for (long k = 0; k <= traj.horizon; k += stride) {
      const auto& snap = traj.states[static_cast<std::size_t>(k)];
      const auto [lhs, arg] = snapshot_distance(spec, snap);
      const double rhs = std::max(beta(d0, k / stride), input_term);
      tr.record(lhs, rhs, [&] {
        Witness w;
        w.index = arg;
        w.step = k;
        if (arg != 0) {
          const auto x = snap.state_of(arg);
          w.state[arg] = Vec(x.begin(), x.end());
        }
        w.input = {traj.input_sup_norm};
        return w;
      });
    }
  }
  rep.finalize();
  return rep;
}

}  // namespace netiss
