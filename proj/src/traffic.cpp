#include "netiss/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "netiss/io.hpp"
#include "netiss/truncate.hpp"

namespace netiss {

namespace {

constexpr Index kMaxPeriod = 10'000'000;

const std::array<std::vector<Index>, 10> kOffsets = {{
    {1},      // S1  = {1}
    {4},      // S2  = {4 + 8j}
    {-4},     // S3  = {5 + 8j}
    {-1, 4},  // S4  = {6 + 8j}
    {-4, 1},  // S5  = {9 + 8j}
    {1, 4},   // S6  = {2 + 8j}
    {-4, -1}, // S7  = {7 + 8j}
    {-1, 4},  // S8  = {8 + 8j}
    {-4, 1},  // S9  = {11 + 8j}
    {1},      // S10 = {3}
}};

double extra_outflow(int k, const TrafficParams& p) {
  if (k == 5) return p.e;
  if (k == 8) return 2.0 * p.e;
  return 0.0;
}

double input_coeff(int k, const TrafficParams& p) {
  if (k == 2) return p.r;
  if (k == 3 || k == 10) return p.r / 2.0;
  return 0.0;
}

double ratio(const TrafficParams& p, Index i) { return p.speed(i) / p.length(i); }

// x+ = a x + sum_k (T D_k) xbar_k + (T B) u, parameters [a, T D_1, .., T D_m, T B].
void traffic_step(const StepArgs& s, std::span<double> out) {
  const std::size_t m = s.neighbors.size();
  if (s.params.size() != m + 2) throw std::invalid_argument("traffic cell: parameter arity mismatch");
  double acc = s.params[0] * s.state[0];
  for (std::size_t k = 0; k < m; ++k) acc += s.params[1 + k] * s.neighbors[k];
  acc += s.params[m + 1] * s.input[0];
  out[0] = acc;
}

Index class_period(const TrafficParams& p) {
  const auto P = std::lcm(std::lcm(Index{8}, static_cast<Index>(p.v.size())), static_cast<Index>(p.l.size()));
  if (P > kMaxPeriod) throw std::invalid_argument("traffic: speed/length cycle too long");
  return P;
}

}  // namespace

double TrafficParams::v_min() const { return *std::min_element(v.begin(), v.end()); }
double TrafficParams::v_max() const { return *std::max_element(v.begin(), v.end()); }
double TrafficParams::l_min() const { return *std::min_element(l.begin(), l.end()); }
double TrafficParams::l_max() const { return *std::max_element(l.begin(), l.end()); }

void TrafficParams::validate() const {
  if (!(T > 0)) throw std::invalid_argument("traffic: T must be positive");
  if (!(c > 0 && c < 0.5)) throw std::invalid_argument("traffic: c must lie in (0, 0.5)");
  if (!(e > 0 && e < 1)) throw std::invalid_argument("traffic: e must lie in (0, 1)");
  if (!(r > 0)) throw std::invalid_argument("traffic: r must be positive");
  if (!(epsilon > 0)) throw std::invalid_argument("traffic: epsilon must be positive");
  if (v.empty() || l.empty()) throw std::invalid_argument("traffic: v and l need at least one value");
  for (double x : v)
    if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("traffic: speeds must be positive");
  for (double x : l)
    if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("traffic: lengths must be positive");
  if (1.0 - T * (v_max() / l_min() + 2.0 * e) < 0.0)
    throw std::invalid_argument("traffic: T too large, 1 - T(v_i/l_i + e_i) must stay nonnegative");
}

json to_json(const TrafficParams& p) {
  return {{"T", p.T}, {"c", p.c}, {"e", p.e}, {"r", p.r}, {"v", p.v}, {"l", p.l}, {"epsilon", p.epsilon}};
}

TrafficParams traffic_params_from_json(const json& j) {
  TrafficParams p;
  JsonObject o(j, "/traffic");
  p.T = o.number("T", p.T);
  p.c = o.number("c", p.c);
  p.e = o.number("e", p.e);
  p.r = o.number("r", p.r);
  p.epsilon = o.number("epsilon", p.epsilon);
  auto list = [&](const std::string& key, std::vector<double>& dst) {
    if (!o.has(key)) return;
    if (o.at(key).is_number())
      dst = {o.number(key)};
    else
      dst = o.numbers(key);
  };
  list("v", p.v);
  list("l", p.l);
  o.finish();
  return p;
}

int traffic_class(Index i) {
  if (i < 1) throw SpecError("index " + std::to_string(i) + " is outside N");
  if (i == 1) return 1;
  if (i == 3) return 10;
  static constexpr int by_residue[8] = {8, 5, 6, 9, 2, 3, 4, 7};
  return by_residue[i % 8];
}

const std::vector<Index>& traffic_offsets(int k) { return kOffsets.at(static_cast<std::size_t>(k - 1)); }

NetworkSpec build_traffic_network(const TrafficParams& p) {
  p.validate();
  NetworkSpec spec;
  spec.name = "traffic";
  for (int k = 1; k <= 10; ++k) {
    SubsystemClass cls;
    cls.id = "S" + std::to_string(k);
    cls.state_dim = 1;
    cls.input_dim = 1;
    cls.dynamics = traffic_step;
    cls.neighbor_arity = traffic_offsets(k).size();
    cls.target_set = [](Index) { return ClosedSet::point({0.0}); };
    cls.params_rule = [p, k](Index i) {
      Vec out;
      out.push_back(1.0 - p.T * (ratio(p, i) + extra_outflow(k, p)));
      for (Index off : traffic_offsets(k)) out.push_back(p.T * (p.c * ratio(p, i + off)));
      out.push_back(p.T * input_coeff(k, p));
      return out;
    };
    spec.classes.push_back(std::move(cls));
  }
  spec.assign = [](Index i) { return static_cast<std::size_t>(traffic_class(i) - 1); };
  spec.neighbors = [](Index i) {
    std::vector<Index> nb;
    for (Index off : traffic_offsets(traffic_class(i))) nb.push_back(i + off);
    return nb;
  };
  spec.max_out_degree = 2;
  return spec;
}

double traffic_alpha(const TrafficParams& p) {
  return 1.0 - p.T * (p.v_min() / p.l_max()) + p.T * p.c * (p.v_max() / p.l_min()) + p.epsilon;
}

TrafficCertificate traffic_certificate(const TrafficParams& p) {
  p.validate();
  TrafficCertificate tc;
  tc.alpha = traffic_alpha(p);
  tc.margin = 1.0 - tc.alpha;
  if (!(tc.alpha < 1.0))
    throw CertificateRefused("traffic: alpha = " + format_double(tc.alpha) + " >= 1 (margin " +
                                 format_double(tc.margin) + ")",
                             tc.margin);
  tc.gamma_u_bar = p.T * p.r / p.epsilon;

  // Per-class gamma over one full period of the speed/length cycles.
  std::array<bool, 10> seen{};
  const Index P = class_period(p);
  for (Index i = 1; i <= P + 16; ++i) {
    const int k = traffic_class(i);
    double nbr = 0.0;
    for (Index off : traffic_offsets(k)) nbr = std::max(nbr, ratio(p, i + off));
    const double g = (1.0 - p.T * (ratio(p, i) + extra_outflow(k, p))) + p.T * p.c * nbr + p.epsilon;
    auto& slot = tc.gamma[static_cast<std::size_t>(k - 1)];
    slot = seen[static_cast<std::size_t>(k - 1)] ? std::max(slot, g) : g;
    seen[static_cast<std::size_t>(k - 1)] = true;
  }

  Certificate& c = tc.cert;
  c.M = 1;
  for (int k = 1; k <= 10; ++k) {
    const std::string id = "S" + std::to_string(k);
    c.family.per_class[id] = StorageFunction{};
    const auto g = ScalarGain::linear(tc.gamma[static_cast<std::size_t>(k - 1)]);
    c.gains.internal[{id, 0}] = g;
    for (Index off : traffic_offsets(k)) c.gains.internal[{id, off}] = g;
    const double b = input_coeff(k, p);
    c.gains.input[id] = b > 0 ? ScalarGain::linear(p.T * b / p.epsilon) : ScalarGain::zero();
  }
  c.gains.alpha = ScalarGain::linear(tc.alpha);
  c.gains.gamma_u_bar = ScalarGain::linear(tc.gamma_u_bar);
  return tc;
}

CertificateReport check_traffic_linear_bound(const NetworkSpec& spec, const TrafficParams& p,
                                             const GridPlan& grid, const std::vector<double>& input_grid,
                                             const Tolerance& tol) {
  CertificateReport rep;
  rep.title = "traffic linear bound";
  rep.tolerance = tol;
  rep.grid = {{"radius", grid.radius}, {"points", grid.points}, {"inputs", input_grid}};
  for (Index i : class_representatives(spec, {})) {
    const int k = traffic_class(i);
    const auto nb = spec.neighbors_of(i);
    std::vector<Index> idx{i};
    idx.insert(idx.end(), nb.begin(), nb.end());
    std::sort(idx.begin(), idx.end());
    const auto layout = Layout::make(spec, idx);
    // Induced sup-norm of the row D_i: the sum of the neighbor ratios.
    double drow = 0.0;
    for (Index j : nb) drow += ratio(p, j);
    const double a = 1.0 - p.T * (ratio(p, i) + extra_outflow(k, p));
    auto& slot = rep.add("|x_i^+| <= a_i|x_i| + Tc|D_i||xbar_i| + TB_i|u_i| at i = " + std::to_string(i));
    ResidualTracker tr(slot, tol);
    for (const Vec& pt : state_grid(spec, *layout, grid)) {
      const auto self = *layout->position(i);
      Vec xbar;
      double xbar_norm = 0.0;
      for (Index j : nb) {
        const double xj = pt[*layout->position(j)];
        xbar.push_back(xj);
        xbar_norm = std::max(xbar_norm, std::abs(xj));
      }
      for (double v : input_grid) {
        const Vec x{pt[self]}, u{v};
        const double lhs = std::abs(subsystem_step(spec, i, x, xbar, u)[0]);
        const double rhs = a * std::abs(x[0]) + p.T * p.c * drow * xbar_norm + p.T * input_coeff(k, p) * std::abs(v);
        tr.record(lhs, rhs, [&] {
          Witness w;
          w.index = i;
          w.step = 1;
          for (std::size_t q = 0; q < layout->size(); ++q) w.state[layout->indices[q]] = {pt[q]};
          w.input = u;
          return w;
        });
      }
    }
  }
  rep.finalize();
  return rep;
}

json ScalingRun::summary() const {
  return {{"n", n},
          {"horizon", horizon},
          {"alpha", alpha},
          {"gamma_u_bar", gamma_u_bar},
          {"input_sup_norm", input_sup_norm},
          {"ultimate_bound", ultimate_bound},
          {"fitted_contraction", fitted_contraction},
          {"fitted_steps", fitted_steps},
          {"V_initial", v_initial},
          {"V_final", v_final},
          {"min_state", v_min},
          {"nonnegative", nonnegative},
          {"decay_check", to_json(decay)}};
}

bool ScalingReport::passed() const {
  return std::all_of(runs.begin(), runs.end(), [](const ScalingRun& r) { return r.decay.passed && r.nonnegative; });
}

ScalingReport run_scaling_experiment(const TrafficParams& p, const std::vector<Index>& sizes, long K,
                                     std::uint64_t seed, const ScalingOptions& opt) {
  const auto tc = traffic_certificate(p);
  const auto spec = build_traffic_network(p);
  const auto xi = StateWindow::uniform(seed, opt.initial_low, opt.initial_high);
  const auto u = InputSignal::constant(opt.input);
  const auto alpha = ScalarGain::linear(tc.alpha);
  const auto gamma_u = ScalarGain::linear(tc.gamma_u_bar);

  ScalingReport report;
  for (Index n : sizes) {
    const auto tn = build_truncation(spec, n);
    const auto traj = simulate_truncated(tn, xi, u, K, zero_interface(tn, K), SimOptions{opt.exec});

    ScalingRun run;
    run.n = n;
    run.horizon = K;
    run.alpha = tc.alpha;
    run.gamma_u_bar = tc.gamma_u_bar;
    run.input_sup_norm = u.declared_sup_norm();
    run.ultimate_bound = tc.gamma_u_bar * run.input_sup_norm;
    run.decay = check_truncated_decay(tn, tc.cert.family, alpha, ScalarGain::linear(1.0), gamma_u, traj, opt.tol);

    std::vector<double> V;
    V.reserve(traj.states.size());
    run.v_min = traj.states.front().empty() ? 0.0 : traj.states.front().front();
    for (const Vec& x : traj.states) {
      double m = 0.0;
      for (double s : x) {
        m = std::max(m, std::abs(s));
        run.v_min = std::min(run.v_min, s);
      }
      V.push_back(m);
    }
    run.nonnegative = run.v_min >= 0.0;
    run.v_initial = V.front();
    run.v_final = V.back();

    // Least-squares slope of log V over steps well above the input-dominated level.
    double sk = 0, sl = 0, skk = 0, skl = 0;
    std::size_t cnt = 0;
    for (std::size_t k = 0; k < V.size(); ++k) {
      if (!(V[k] > 2.0 * run.ultimate_bound)) continue;
      const double kk = static_cast<double>(k), lv = std::log(V[k]);
      sk += kk;
      sl += lv;
      skk += kk * kk;
      skl += kk * lv;
      ++cnt;
    }
    run.fitted_steps = cnt;
    if (cnt >= 2) {
      const double c = static_cast<double>(cnt);
      const double den = c * skk - sk * sk;
      if (den > 0) run.fitted_contraction = std::exp((c * skl - sk * sl) / den);
    }

    if (opt.out_dir) {
      const auto dir = *opt.out_dir / ("n" + std::to_string(n));
      std::filesystem::create_directories(dir);
      std::ofstream csv(dir / "trajectories.csv", std::ios::binary);
      if (!csv) throw std::runtime_error("cannot write " + (dir / "trajectories.csv").string());
      write_csv_header(csv);
      const long ts = std::max(1L, opt.csv_time_stride);
      for (long k = 0; k <= K; ++k)
        if (k % ts == 0 || k == K)
          write_state_rows(csv, k, *traj.layout, traj.states[static_cast<std::size_t>(k)], opt.csv_index_stride);
      if (!csv) throw std::runtime_error("write failed: " + (dir / "trajectories.csv").string());
      write_json_file(dir / "summary.json", run.summary());
    }
    report.runs.push_back(std::move(run));
  }
  return report;
}

}  // namespace netiss
