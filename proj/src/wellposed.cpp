#include "netiss/wellposed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netiss/random.hpp"
#include "netiss/sim.hpp"
#include "parallel_for.hpp"

namespace netiss {

namespace {

struct Sample {
  Vec x, xbar;
  double v = 0.0;
};

// Local geometry of index i under the M-step map.
struct LocalMap {
  Index i;
  std::vector<Index> others;  // I_i(M) \ {i}, sorted
  std::vector<std::size_t> offsets;
  std::size_t nx = 0;

  LocalMap(const NetworkSpec& spec, Index idx, long M) : i(idx) {
    for (Index j : dependency_cone(spec, {i}, M))
      if (j != i) others.push_back(j);
    offsets.push_back(0);
    for (Index j : others) offsets.push_back(offsets.back() + spec.state_dim(j));
    nx = spec.state_dim(i);
  }

  std::size_t width() const { return offsets.back(); }

  std::span<const double> block(const Vec& xbar, std::size_t k) const {
    return {xbar.data() + offsets[k], offsets[k + 1] - offsets[k]};
  }

  Vec apply(const NetworkSpec& spec, const Sample& s, long M) const {
    StateWindow w;
    w.set(i, s.x);
    for (std::size_t k = 0; k < others.size(); ++k) {
      const auto b = block(s.xbar, k);
      w.set(others[k], Vec(b.begin(), b.end()));
    }
    const double v = s.v;
    const InputValue u = [&spec, v](Index j) { return Vec(spec.class_of(j).input_dim, v); };
    return iterate_M(spec, w, std::vector<InputValue>(static_cast<std::size_t>(M), u), {i}).at(i);
  }

  std::vector<Sample> samples(double rs, double ru, std::size_t extra, std::uint64_t seed) const {
    std::vector<Sample> out;
    const double lv[3] = {-1.0, 0.0, 1.0};
    for (double a : lv)
      for (double b : lv)
        for (double c : lv) out.push_back({Vec(nx, a * rs), Vec(width(), b * rs), c * ru});
    const auto base = static_cast<std::uint64_t>(i);
    for (std::size_t s = 0; s < extra; ++s) {
      const std::uint64_t stream = pair_stream(base, s);
      auto draw = [&](std::size_t c) { return 2.0 * unit_uniform(seed, pair_stream(stream, c)) - 1.0; };
      Sample smp{Vec(nx), Vec(width()), 0.0};
      std::size_t c = 0;
      for (auto& e : smp.x) e = rs * draw(c++);
      for (auto& e : smp.xbar) e = rs * draw(c++);
      smp.v = ru * draw(c);
      out.push_back(std::move(smp));
    }
    return out;
  }
};

double xbar_norm(const NetworkSpec& spec, const LocalMap& lm, const Vec& xbar) {
  double m = 0.0;
  for (std::size_t k = 0; k < lm.others.size(); ++k)
    m = std::max(m, norm(lm.block(xbar, k), spec.class_of(lm.others[k]).norm));
  return m;
}

double xbar_set_distance(const NetworkSpec& spec, const LocalMap& lm, const Vec& xbar) {
  double m = 0.0;
  for (std::size_t k = 0; k < lm.others.size(); ++k) {
    const Index j = lm.others[k];
    m = std::max(m, dist(lm.block(xbar, k), spec.target_set(j), spec.class_of(j).norm));
  }
  return m;
}

void check_plan(const SamplePlan& plan) {
  if (plan.first < 1 || plan.last < plan.first) throw std::invalid_argument("sample plan: bad index window");
  if (plan.M < 1) throw std::invalid_argument("sample plan: M must be >= 1");
  if (!(plan.state_radius >= 0.0) || !(plan.input_radius >= 0.0))
    throw std::invalid_argument("sample plan: radii must be nonnegative");
}

}  // namespace

CertificateReport check_growth_bound(const NetworkSpec& spec, const KBoundEstimate& est,
                                     const SamplePlan& plan, const Tolerance& tol) {
  check_plan(plan);
  CertificateReport rep;
  rep.title = "growth bound";
  rep.tolerance = tol;
  rep.grid = {{"first", plan.first},
              {"last", plan.last},
              {"state_radius", plan.state_radius},
              {"input_radius", plan.input_radius},
              {"samples", plan.samples},
              {"seed", plan.seed},
              {"M", plan.M}};
  rep.notes.push_back("sampled verdict over window [" + std::to_string(plan.first) + ".." +
                      std::to_string(plan.last) + "]");

  const auto n = static_cast<std::size_t>(plan.last - plan.first + 1);
  std::vector<std::vector<Sample>> samples(n);
  std::vector<std::vector<double>> lhs(n), rhs(n);
  std::vector<std::vector<Index>> others(n);
  detail::parallel_for(n, [&](std::size_t t) {
    const Index i = plan.first + static_cast<Index>(t);
    const LocalMap lm(spec, i, plan.M);
    const auto& cls = spec.class_of(i);
    const ClosedSet A = cls.target_set(i);
    samples[t] = lm.samples(plan.state_radius, plan.input_radius, plan.samples, plan.seed);
    others[t] = lm.others;
    for (const auto& s : samples[t]) {
      const Vec f = lm.apply(spec, s, plan.M);
      const double un = std::abs(s.v);
      double l = 0.0, r = 0.0;
      switch (est.form) {
        case KBoundEstimate::Form::StateNorm:
          l = norm(f, cls.norm);
          r = est.C + est.kappa(norm(s.x, cls.norm)) + est.kappa(xbar_norm(spec, lm, s.xbar)) +
              est.kappa(un);
          break;
        case KBoundEstimate::Form::SetDistance1:
          l = dist(f, A, cls.norm);
          r = est.kappa1(dist(s.x, A, cls.norm)) + est.kappa2(xbar_norm(spec, lm, s.xbar)) +
              est.kappa2(un);
          break;
        case KBoundEstimate::Form::SetDistance2:
          l = dist(f, A, cls.norm);
          r = est.kappa1(dist(s.x, A, cls.norm)) + est.kappa2(xbar_set_distance(spec, lm, s.xbar)) +
              est.kappa2(un);
          break;
      }
      lhs[t].push_back(l);
      rhs[t].push_back(r);
    }
  });

  auto& slot = rep.add("growth envelope");
  ResidualTracker tr(slot, tol);
  for (std::size_t t = 0; t < n; ++t) {
    const Index i = plan.first + static_cast<Index>(t);
    for (std::size_t s = 0; s < lhs[t].size(); ++s) {
      tr.record(lhs[t][s], rhs[t][s], [&] {
        Witness w;
        w.index = i;
        w.step = plan.M;
        const auto& smp = samples[t][s];
        w.state[i] = smp.x;
        std::size_t off = 0;
        for (Index j : others[t]) {
          const std::size_t d = spec.state_dim(j);
          w.state[j] = Vec(smp.xbar.begin() + static_cast<std::ptrdiff_t>(off),
                           smp.xbar.begin() + static_cast<std::ptrdiff_t>(off + d));
          off += d;
        }
        w.input = Vec(spec.class_of(i).input_dim, smp.v);
        return w;
      });
    }
  }
  rep.finalize();
  return rep;
}

GrowthProfile falsify_uniformity(const NetworkSpec& spec, const SamplePlan& plan) {
  check_plan(plan);
  GrowthProfile prof;
  prof.radii = plan.radii.empty() ? std::vector<double>{plan.state_radius} : plan.radii;
  const auto n = static_cast<std::size_t>(plan.last - plan.first + 1);
  for (std::size_t t = 0; t < n; ++t) prof.indices.push_back(plan.first + static_cast<Index>(t));
  prof.gain.assign(n, std::vector<double>(prof.radii.size(), 0.0));

  detail::parallel_for(n, [&](std::size_t t) {
    const Index i = prof.indices[t];
    const LocalMap lm(spec, i, plan.M);
    const auto& cls = spec.class_of(i);
    const double f0 = norm(lm.apply(spec, Sample{Vec(lm.nx, 0.0), Vec(lm.width(), 0.0), 0.0}, plan.M), cls.norm);
    for (std::size_t r = 0; r < prof.radii.size(); ++r) {
      const double rad = prof.radii[r];
      double g = 0.0;
      for (const auto& s : lm.samples(rad, rad, plan.samples, plan.seed))
        g = std::max(g, norm(lm.apply(spec, s, plan.M), cls.norm) - f0);
      prof.gain[t][r] = g;
    }
  });

  prof.sup.assign(prof.radii.size(), 0.0);
  prof.sup_index.assign(prof.radii.size(), prof.indices.front());
  for (std::size_t t = 0; t < n; ++t) {
    bool exceeds = false;
    for (std::size_t r = 0; r < prof.radii.size(); ++r) {
      if (prof.gain[t][r] > prof.sup[r]) {
        prof.sup[r] = prof.gain[t][r];
        prof.sup_index[r] = prof.indices[t];
      }
      exceeds = exceeds || prof.gain[t][r] > plan.cap;
    }
    if (exceeds && !prof.first_exceeding) prof.first_exceeding = prof.indices[t];
  }
  prof.divergent = prof.first_exceeding.has_value();
  return prof;
}

KBoundEstimate derived_envelope(const KBoundEstimate& est, double set_radius) {
  if (est.form == KBoundEstimate::Form::StateNorm) return est;
  const ScalarGain two = ScalarGain::linear(2.0);
  KBoundEstimate out;
  out.form = KBoundEstimate::Form::StateNorm;
  out.C = est.kappa1(2.0 * set_radius) + set_radius;
  out.kappa = ScalarGain::max({ScalarGain::compose(est.kappa1, two), est.kappa2});
  if (est.form == KBoundEstimate::Form::SetDistance2) {
    out.C += out.kappa(2.0 * set_radius);
    out.kappa = ScalarGain::compose(out.kappa, two);
  }
  return out;
}

}  // namespace netiss
