#include "netiss/truncate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

namespace netiss {

namespace {

std::vector<Index> first_n(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  for (Index i = 1; i <= n; ++i) v[static_cast<std::size_t>(i - 1)] = i;
  return v;
}

Vec gather(const Snapshot& snap, const Layout& layout) {
  Vec out(layout.width());
  for (std::size_t p = 0; p < layout.size(); ++p) {
    const auto s = snap.state_of(layout.indices[p]);
    std::copy(s.begin(), s.end(), out.begin() + static_cast<std::ptrdiff_t>(layout.offsets[p]));
  }
  return out;
}

InterfaceSignal extract_interface(const Trajectory& full, std::shared_ptr<const Layout> layout) {
  InterfaceSignal sig;
  sig.mode = "recorded";
  sig.values.reserve(full.states.size());
  for (const auto& snap : full.states) sig.values.push_back(gather(snap, *layout));
  sig.layout = std::move(layout);
  return sig;
}

std::vector<Index> observed_set(const TruncatedNetwork& tn) {
  auto S = first_n(tn.n);
  S.insert(S.end(), tn.interface.begin(), tn.interface.end());
  return S;
}

double flat_V(const StorageFamily& family, const NetworkSpec& spec, const Layout& layout, const Vec& x) {
  double v = 0.0;
  for (std::size_t p = 0; p < layout.size(); ++p) {
    const std::span<const double> xi{x.data() + layout.offsets[p], layout.offsets[p + 1] - layout.offsets[p]};
    v = std::max(v, family.value(spec, layout.indices[p], xi));
  }
  return v;
}

}  // namespace

TruncatedNetwork build_truncation(const NetworkSpec& spec, Index n) {
  if (n < 1) throw std::invalid_argument("truncation: n must be >= 1");
  TruncatedNetwork tn;
  tn.spec = &spec;
  tn.n = n;
  std::set<Index> iface;
  for (Index i = 1; i <= n; ++i)
    for (Index j : spec.neighbors_of(i))
      if (j > n) iface.insert(j);
  tn.interface.assign(iface.begin(), iface.end());
  tn.inner = Layout::make(spec, first_n(n));
  tn.source = Layout::make(spec, observed_set(tn));
  return tn;
}

InterfaceSignal zero_interface(const TruncatedNetwork& tn, long K) {
  InterfaceSignal sig;
  sig.mode = "zero";
  sig.layout = Layout::make(*tn.spec, tn.interface);
  sig.values.assign(static_cast<std::size_t>(K) + 1, Vec(sig.layout->width(), 0.0));
  return sig;
}

InterfaceSignal record_interface_signal(const NetworkSpec& spec, Index n, const StateWindow& xi,
                                        const InputSignal& u, long K, const SimOptions& opt) {
  const auto tn = build_truncation(spec, n);
  const auto full = simulate(spec, xi, u, K, observed_set(tn), opt);
  return extract_interface(full, Layout::make(spec, tn.interface));
}

TruncatedTrajectory simulate_truncated(const TruncatedNetwork& tn, const StateWindow& xi,
                                       const InputSignal& u, long K, const InterfaceSignal& x_tilde,
                                       const SimOptions& opt) {
  if (K < 0) throw std::invalid_argument("truncated simulation: negative horizon");
  if (x_tilde.layout->indices != tn.interface)
    throw std::invalid_argument("truncated simulation: interface signal has the wrong index set");
  if (x_tilde.values.size() < static_cast<std::size_t>(K))
    throw std::invalid_argument("truncated simulation: interface signal shorter than the horizon");
  const NetworkSpec& spec = *tn.spec;
  TruncatedTrajectory tr;
  tr.layout = tn.inner;
  tr.interface = x_tilde;
  tr.input_sup_norm = u.declared_sup_norm();
  tr.horizon = K;
  tr.states.reserve(static_cast<std::size_t>(K) + 1);

  Vec x0(tn.inner->width());
  for (std::size_t p = 0; p < tn.inner->size(); ++p) {
    const Index i = tn.inner->indices[p];
    const Vec v = xi.at(i);
    if (v.size() != spec.state_dim(i))
      throw std::invalid_argument("initial condition dimension mismatch at index " + std::to_string(i));
    std::copy(v.begin(), v.end(), x0.begin() + static_cast<std::ptrdiff_t>(tn.inner->offsets[p]));
  }
  tr.states.push_back(std::move(x0));

  const StepPlan plan = make_step_plan(spec, tn.inner, tn.source);
  const std::size_t inner_width = tn.inner->width();
  Vec src(tn.source->width());
  for (long k = 0; k < K; ++k) {
    const Vec& cur = tr.states.back();
    const Vec& iface = x_tilde.values[static_cast<std::size_t>(k)];
    std::copy(cur.begin(), cur.end(), src.begin());
    std::copy(iface.begin(), iface.end(), src.begin() + static_cast<std::ptrdiff_t>(inner_width));
    Vec next(inner_width);
    advance(opt.exec, plan, src, next, k, u);
    tr.states.push_back(std::move(next));
  }
  return tr;
}

double truncated_V(const StorageFamily& family, const NetworkSpec& spec, Index n, const StateWindow& w) {
  double v = 0.0;
  for (Index i = 1; i <= n; ++i) v = std::max(v, family.value(spec, i, w.at(i)));
  return v;
}

CertificateReport check_truncated_decay(const TruncatedNetwork& tn, const StorageFamily& family,
                                        const ScalarGain& alpha, const ScalarGain& omega_bar,
                                        const ScalarGain& gamma_u_bar, const TruncatedTrajectory& traj,
                                        const Tolerance& tol) {
  if (traj.interface.values.size() < static_cast<std::size_t>(traj.horizon))
    throw std::invalid_argument("truncated decay: missing interface values");
  const NetworkSpec& spec = *tn.spec;
  CertificateReport rep;
  rep.title = "truncated decay (n = " + std::to_string(tn.n) + ")";
  rep.tolerance = tol;
  rep.grid = {{"n", tn.n},
              {"horizon", traj.horizon},
              {"interface_size", tn.interface.size()},
              {"interface_mode", traj.interface.mode},
              {"input_sup_norm", traj.input_sup_norm}};
  rep.notes.push_back("interface signal mode: " + traj.interface.mode);

  auto& slot = rep.add("V<n>(k+1) <= max{alpha(V<n>(k)), alpha(omega_bar(|x~(k)|)), gamma_u_bar(|u|)}");
  ResidualTracker tr(slot, tol);
  const double input_term = gamma_u_bar(traj.input_sup_norm);
  double v_prev = flat_V(family, spec, *traj.layout, traj.states[0]);
  for (long k = 0; k < traj.horizon; ++k) {
    const double v_next = flat_V(family, spec, *traj.layout, traj.states[static_cast<std::size_t>(k) + 1]);
    const double xt = norm(traj.interface.values[static_cast<std::size_t>(k)]);
    const double rhs = std::max({alpha(v_prev), alpha(omega_bar(xt)), input_term});
    tr.record(v_next, rhs, [&] {
      Witness w;
      w.step = k + 1;
      w.input = {traj.input_sup_norm};
      return w;
    });
    v_prev = v_next;
  }
  rep.finalize();
  return rep;
}

CertificateReport check_interface_bound(const NetworkSpec& spec, const TruncatedNetwork& tn,
                                        const InterfaceSignal& x_tilde, const StateWindow& xi,
                                        const KLBound& beta, const ScalarGain& gamma,
                                        double input_sup_norm, const Tolerance& tol) {
  CertificateReport rep;
  rep.title = "interface bound (n = " + std::to_string(tn.n) + ")";
  rep.tolerance = tol;
  rep.grid = {{"n", tn.n}, {"steps", x_tilde.values.size()}, {"interface_mode", x_tilde.mode}};
  double d0 = 0.0;
  for (Index i = 1; i <= tn.n; ++i)
    d0 = std::max(d0, dist(xi.at(i), spec.target_set(i), spec.class_of(i).norm));
  auto& slot = rep.add("|x~(k)|_A <= max{beta(|xi<n>|_A, k), gamma(|u|)}");
  ResidualTracker tr(slot, tol);
  const auto& L = *x_tilde.layout;
  const double input_term = gamma(input_sup_norm);
  for (std::size_t k = 0; k < x_tilde.values.size(); ++k) {
    double d = 0.0;
    Index arg = 0;
    for (std::size_t p = 0; p < L.size(); ++p) {
      const Index j = L.indices[p];
      const std::span<const double> xj{x_tilde.values[k].data() + L.offsets[p], L.offsets[p + 1] - L.offsets[p]};
      const double dj = dist(xj, spec.target_set(j), spec.class_of(j).norm);
      if (arg == 0 || dj > d) {
        d = dj;
        arg = j;
      }
    }
    tr.record(d, std::max(beta(d0, static_cast<long>(k)), input_term), [&] {
      Witness w;
      w.index = arg;
      w.step = static_cast<long>(k);
      return w;
    });
  }
  rep.finalize();
  return rep;
}

ConsistencyResult consistency_check(const NetworkSpec& spec, Index n, const StateWindow& xi,
                                    const InputSignal& u, long K, const SimOptions& opt) {
  const auto tn = build_truncation(spec, n);
  const auto full = simulate(spec, xi, u, K, observed_set(tn), opt);
  const auto x_tilde = extract_interface(full, Layout::make(spec, tn.interface));
  const auto trunc = simulate_truncated(tn, xi, u, K, x_tilde, opt);

  ConsistencyResult res;
  res.passed = true;
  for (long k = 0; k <= K; ++k) {
    const Vec ref = gather(full.states[static_cast<std::size_t>(k)], *tn.inner);
    const Vec& got = trunc.states[static_cast<std::size_t>(k)];
    for (std::size_t e = 0; e < ref.size(); ++e) {
      ++res.compared;
      const double dev = std::abs(ref[e] - got[e]);
      if (dev > res.max_deviation || std::isnan(dev)) res.max_deviation = dev;
      if (std::bit_cast<std::uint64_t>(ref[e]) != std::bit_cast<std::uint64_t>(got[e])) {
        res.passed = false;
        if (!res.first_mismatch) {
          const auto& off = tn.inner->offsets;
          const auto pos = static_cast<std::size_t>(std::upper_bound(off.begin(), off.end(), e) - off.begin()) - 1;
          res.first_mismatch = std::make_pair(k, tn.inner->indices[pos]);
        }
      }
    }
  }
  return res;
}

}  // namespace netiss
