#include "netiss/library.hpp"

#include <cmath>
#include <stdexcept>

#include "netiss/traffic.hpp"

namespace netiss {

namespace {

SubsystemClass scalar_class(std::string id, Dynamics f, std::size_t arity) {
  SubsystemClass c;
  c.id = std::move(id);
  c.dynamics = std::move(f);
  c.neighbor_arity = arity;
  c.target_set = [](Index) { return ClosedSet::point({0.0}); };
  return c;
}

Dynamics affine_scalar(double a, std::vector<double> d, double b) {
  AffineDynamics f;
  f.A = {a};
  for (double x : d) f.D.push_back({x});
  f.neighbor_dims.assign(d.size(), 1);
  f.B = {b};
  return f.as_dynamics();
}

Certificate uniform_certificate(const NetworkSpec& spec, double gamma, ScalarGain input, long M) {
  Certificate c;
  c.family = StorageFamily::distance_to_sets(spec);
  c.gains.uniform_internal = ScalarGain::linear(gamma);
  for (const auto& cls : spec.classes) c.gains.input[cls.id] = input;
  c.gains.alpha = ScalarGain::linear(gamma);
  c.gains.gamma_u_bar = input;
  c.M = M;
  return c;
}

}  // namespace

double example1_map(Index i, double x) {
  const double di = static_cast<double>(i);
  const double ax = std::abs(x);
  const double s = x < 0 ? -1.0 : 1.0;
  if (ax <= 0.5) return di * x;
  if (ax > di) return s * (ax + di) / 2.0;
  // Segment from (1/2, i/2) to (i, i); for i = 1 both ends lie on y = x.
  return s * (di / 2.0 + (ax - 0.5) * (di / 2.0) / (di - 0.5));
}

Dynamics example1_dynamics() {
  return [](const StepArgs& a, std::span<double> out) { out[0] = example1_map(a.index, a.state[0]); };
}

std::vector<std::string> builtin_names() {
  return {"traffic", "example1", "halving-chain", "doubling", "relaxed-pair", "contraction-scalar"};
}

BuiltinNetwork make_builtin(const std::string& name, const nlohmann::json& options) {
  BuiltinNetwork b;
  NetworkSpec& s = b.spec;
  s.name = name;
  if (name == "traffic") {
    const auto p = traffic_params_from_json(options);
    s = build_traffic_network(p);
    b.certificate = traffic_certificate(p).cert;
    b.description = "urban traffic cells S1..S10";
  } else if (name == "example1") {
    auto c = scalar_class("E", example1_dynamics(), 0);
    c.target_set = [](Index i) {
      const double r = static_cast<double>(i);
      return ClosedSet::box({-r}, {r});
    };
    s.classes = {std::move(c)};
    s.assign = [](Index) { return std::size_t{0}; };
    s.neighbors = [](Index) { return std::vector<Index>{}; };
    b.certificate = uniform_certificate(s, 0.5, ScalarGain::zero(), 1);
    b.description = "decoupled family with unbounded target sets [-i, i]";
  } else if (name == "halving-chain") {
    s.classes = {scalar_class("H", affine_scalar(0.5, {0.0}, 0.0), 1)};
    s.assign = [](Index) { return std::size_t{0}; };
    s.neighbors = [](Index i) { return std::vector<Index>{i + 1}; };
    b.certificate = uniform_certificate(s, 0.5, ScalarGain::zero(), 1);
    b.description = "x_i+ = x_i / 2 with an inactive link to i + 1";
  } else if (name == "doubling") {
    s.classes = {scalar_class("D", affine_scalar(2.0, {}, 0.0), 0)};
    s.assign = [](Index) { return std::size_t{0}; };
    s.neighbors = [](Index) { return std::vector<Index>{}; };
    // Deliberately wrong claim: the storage function doubles each step.
    b.certificate = uniform_certificate(s, 0.5, ScalarGain::zero(), 1);
    b.description = "decoupled x_i+ = 2 x_i with a false contraction claim";
  } else if (name == "relaxed-pair") {
    s.classes = {scalar_class("odd", affine_scalar(0.0, {1.5}, 0.0), 1),
                 scalar_class("even", affine_scalar(0.0, {0.1}, 0.0), 1)};
    s.assign = [](Index i) { return static_cast<std::size_t>(i % 2 == 0 ? 1 : 0); };
    s.neighbors = [](Index i) { return std::vector<Index>{i % 2 == 0 ? i - 1 : i + 1}; };
    b.certificate = uniform_certificate(s, 0.15 + 1e-6, ScalarGain::zero(), 2);
    b.description = "pairs x_odd+ = 1.5 x_even, x_even+ = 0.1 x_odd; contracts only over two steps";
  } else if (name == "contraction-scalar") {
    s.classes = {scalar_class("C", affine_scalar(0.9, {}, 1.0), 0)};
    s.assign = [](Index) { return std::size_t{0}; };
    s.neighbors = [](Index) { return std::vector<Index>{}; };
    // |x(k)| <= max{2 (0.9)^k |xi|, 20 |u|}; converse M for kappa = 1/2 is 14.
    EissConstants c{2.0, 0.9, 1.0, 1.0, 1.0, 0.5};
    b.certificate = uniform_certificate(s, 0.5, ScalarGain::linear(20.0), converse_M(c));
    b.description = "x_i+ = 0.9 x_i + u_i";
  } else {
    throw std::invalid_argument("unknown built-in network '" + name + "'");
  }
  if (name != "traffic" && !options.is_null() && !options.empty())
    throw std::invalid_argument("built-in '" + name + "' takes no options");
  return b;
}

}  // namespace netiss
