#include "netiss/sim.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace netiss {

namespace {

constexpr std::size_t kMaxConeSize = 50'000'000;

void evaluate_one(const StepPlan& plan, std::size_t t, std::span<const double> src,
                  std::span<double> dst, long k, const InputSignal& u, Vec& scratch) {
  const SubsystemClass& cls = *plan.cls[t];
  const Index i = plan.target->indices[t];
  scratch.resize(plan.nbr_width[t]);
  std::size_t w = 0;
  for (std::size_t e = plan.nbr_begin[t]; e < plan.nbr_begin[t + 1]; ++e) {
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(plan.nbr_src[e]), plan.nbr_len[e],
                scratch.begin() + static_cast<std::ptrdiff_t>(w));
    w += plan.nbr_len[e];
  }
  const Vec input = u(i, k);
  if (input.size() != cls.input_dim)
    throw std::invalid_argument("input dimension mismatch at index " + std::to_string(i));
  const std::span<const double> x{src.data() + plan.self_src[t], cls.state_dim};
  const std::span<const double> params{plan.params.data() + plan.param_begin[t],
                                       plan.param_begin[t + 1] - plan.param_begin[t]};
  const auto off = plan.target->offsets[t];
  cls.dynamics(StepArgs{i, x, scratch, input, params}, dst.subspan(off, cls.state_dim));
}

}  // namespace

std::shared_ptr<const Layout> Layout::make(const NetworkSpec& spec, std::vector<Index> sorted) {
  auto l = std::make_shared<Layout>();
  l->offsets.reserve(sorted.size() + 1);
  l->offsets.push_back(0);
  for (Index i : sorted) l->offsets.push_back(l->offsets.back() + spec.state_dim(i));
  l->indices = std::move(sorted);
  return l;
}

std::optional<std::size_t> Layout::position(Index i) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), i);
  if (it == indices.end() || *it != i) return std::nullopt;
  return static_cast<std::size_t>(it - indices.begin());
}

std::span<const double> Snapshot::state_of(Index i) const {
  const auto pos = layout->position(i);
  if (!pos) throw std::out_of_range("index " + std::to_string(i) + " not in snapshot");
  return state_at(*pos);
}

StateWindow Snapshot::to_window() const {
  StateWindow w;
  for (std::size_t p = 0; p < layout->size(); ++p) {
    const auto s = state_at(p);
    w.set(layout->indices[p], Vec(s.begin(), s.end()));
  }
  return w;
}

StepPlan make_step_plan(const NetworkSpec& spec, std::shared_ptr<const Layout> target,
                        std::shared_ptr<const Layout> source) {
  StepPlan plan;
  const std::size_t n = target->size();
  plan.cls.resize(n);
  plan.self_src.resize(n);
  plan.nbr_width.resize(n);
  plan.nbr_begin.reserve(n + 1);
  plan.param_begin.reserve(n + 1);
  plan.nbr_begin.push_back(0);
  plan.param_begin.push_back(0);
  for (std::size_t t = 0; t < n; ++t) {
    const Index i = target->indices[t];
    plan.cls[t] = &spec.class_of(i);
    const auto self = source->position(i);
    if (!self) throw std::logic_error("step plan: target index missing from source");
    plan.self_src[t] = source->offsets[*self];
    std::size_t width = 0;
    for (Index j : spec.neighbors_of(i)) {
      const auto pos = source->position(j);
      if (!pos) throw std::logic_error("step plan: neighbor missing from source");
      const auto len = source->offsets[*pos + 1] - source->offsets[*pos];
      plan.nbr_src.push_back(source->offsets[*pos]);
      plan.nbr_len.push_back(len);
      width += len;
    }
    plan.nbr_width[t] = width;
    plan.nbr_begin.push_back(plan.nbr_src.size());
    if (plan.cls[t]->params_rule) {
      const Vec p = plan.cls[t]->params_rule(i);
      plan.params.insert(plan.params.end(), p.begin(), p.end());
    }
    plan.param_begin.push_back(plan.params.size());
  }
  plan.target = std::move(target);
  plan.source = std::move(source);
  return plan;
}

void advance_serial(const StepPlan& plan, std::span<const double> src, std::span<double> dst,
                    long k, const InputSignal& u) {
  Vec scratch;
  for (std::size_t t = 0; t < plan.target->size(); ++t) evaluate_one(plan, t, src, dst, k, u, scratch);
}

void advance_parallel(const StepPlan& plan, std::span<const double> src, std::span<double> dst,
                      long k, const InputSignal& u) {
  const auto n = static_cast<std::ptrdiff_t>(plan.target->size());
  // Exceptions cannot cross the parallel region; keep the one from the
  // smallest target position so the reported error is order independent.
  std::ptrdiff_t failed_at = n;
  std::exception_ptr failure;
#pragma omp parallel
  {
    Vec scratch;
#pragma omp for schedule(static)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      try {
        evaluate_one(plan, static_cast<std::size_t>(t), src, dst, k, u, scratch);
      } catch (...) {
#pragma omp critical(netiss_advance_failure)
        if (t < failed_at) {
          failed_at = t;
          failure = std::current_exception();
        }
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void advance(Exec exec, const StepPlan& plan, std::span<const double> src, std::span<double> dst,
             long k, const InputSignal& u) {
  if (exec == Exec::Serial)
    advance_serial(plan, src, dst, k, u);
  else
    advance_parallel(plan, src, dst, k, u);
}

std::vector<std::vector<Index>> cone_layers(const NetworkSpec& spec, const std::vector<Index>& S,
                                            long M) {
  if (M < 0) throw std::invalid_argument("dependency cone: negative horizon");
  std::set<Index> current(S.begin(), S.end());
  for (Index i : current)
    if (i < 1) throw SpecError("observed index " + std::to_string(i) + " is outside N");
  std::vector<std::vector<Index>> layers;
  layers.emplace_back(current.begin(), current.end());
  std::vector<Index> frontier = layers.back();
  for (long m = 0; m < M; ++m) {
    std::vector<Index> next;
    for (Index i : frontier)
      for (Index j : spec.neighbors_of(i))
        if (current.insert(j).second) next.push_back(j);
    if (current.size() > kMaxConeSize)
      throw SpecError("dependency cone exceeds " + std::to_string(kMaxConeSize) + " indices");
    frontier = std::move(next);
    layers.emplace_back(current.begin(), current.end());
  }
  return layers;
}

std::vector<Index> dependency_cone(const NetworkSpec& spec, const std::vector<Index>& S, long M) {
  return cone_layers(spec, S, M).back();
}

StateWindow Trajectory::observed_window(long k) const {
  const auto& snap = states.at(static_cast<std::size_t>(k));
  StateWindow w;
  for (Index i : observed) {
    const auto s = snap.state_of(i);
    w.set(i, Vec(s.begin(), s.end()));
  }
  return w;
}

Trajectory simulate(const NetworkSpec& spec, const StateWindow& xi, const InputSignal& u, long K,
                    std::vector<Index> S, const SimOptions& opt) {
  if (K < 0) throw std::invalid_argument("simulate: negative horizon");
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  const auto layers = cone_layers(spec, S, K);

  Trajectory traj;
  traj.observed = S;
  traj.horizon = K;
  traj.input_sup_norm = u.declared_sup_norm();
  traj.states.reserve(static_cast<std::size_t>(K) + 1);

  auto layout0 = Layout::make(spec, layers[static_cast<std::size_t>(K)]);
  Snapshot snap0{layout0, Vec(layout0->width())};
  for (std::size_t p = 0; p < layout0->size(); ++p) {
    const Index i = layout0->indices[p];
    const Vec x = xi.at(i);
    if (x.size() != spec.state_dim(i))
      throw std::invalid_argument("initial condition dimension mismatch at index " +
                                  std::to_string(i));
    std::copy(x.begin(), x.end(), snap0.values.begin() + static_cast<std::ptrdiff_t>(layout0->offsets[p]));
  }
  traj.states.push_back(std::move(snap0));

  for (long k = 0; k < K; ++k) {
    const auto& prev = traj.states.back();
    auto target = Layout::make(spec, layers[static_cast<std::size_t>(K - k - 1)]);
    const StepPlan plan = make_step_plan(spec, target, prev.layout);
    Snapshot next{target, Vec(target->width())};
    advance(opt.exec, plan, prev.values, next.values, k, u);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

namespace {

class PullEvaluator {
 public:
  PullEvaluator(const NetworkSpec& spec, const StateWindow& xi, const std::vector<InputValue>& inputs)
      : spec_(spec), xi_(xi), inputs_(inputs) {}

  const Vec& value(Index i, long m) {
    const auto key = std::make_pair(i, m);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Vec out;
    if (m == 0) {
      out = xi_.at(i);
      if (out.size() != spec_.state_dim(i))
        throw std::invalid_argument("initial condition dimension mismatch at index " +
                                    std::to_string(i));
    } else {
      const auto& cls = spec_.class_of(i);
      Vec xbar;
      for (Index j : spec_.neighbors_of(i)) {
        const Vec& xj = value(j, m - 1);
        xbar.insert(xbar.end(), xj.begin(), xj.end());
      }
      const Vec x = value(i, m - 1);
      const Vec u = inputs_[static_cast<std::size_t>(m - 1)](i);
      if (u.size() != cls.input_dim)
        throw std::invalid_argument("input dimension mismatch at index " + std::to_string(i));
      const Vec params = spec_.params(i);
      out.resize(cls.state_dim);
      cls.dynamics(StepArgs{i, x, xbar, u, params}, out);
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const NetworkSpec& spec_;
  const StateWindow& xi_;
  const std::vector<InputValue>& inputs_;
  std::map<std::pair<Index, long>, Vec> memo_;
};

}  // namespace

StateWindow iterate_M(const NetworkSpec& spec, const StateWindow& xi,
                      const std::vector<InputValue>& inputs, std::vector<Index> S) {
  if (inputs.empty()) throw std::invalid_argument("iterate_M: M must be >= 1");
  const long M = static_cast<long>(inputs.size());
  PullEvaluator eval(spec, xi, inputs);
  StateWindow out;
  for (Index i : S) out.set(i, eval.value(i, M));
  return out;
}

}  // namespace netiss
