#include <gtest/gtest.h>
#include <omp.h>

#include <algorithm>
#include <cstring>

#include "netiss/library.hpp"
#include "netiss/sim.hpp"
#include "netiss/traffic.hpp"
#include "support.hpp"

using namespace netiss;
using testing_support::chain;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!same_bits(a[k], b[k])) return false;
  return true;
}

InputSignal wobbling_input() {
  return InputSignal([](Index i, long k) { return Vec{0.5 * std::sin(static_cast<double>(i + 3 * k))}; }, 0.5);
}

}  // namespace

TEST(Validate, TrafficIsLocallyFinite) {
  const auto spec = build_traffic_network({});
  const auto d = validate_spec(spec, 100);
  EXPECT_TRUE(d.passed()) << (d.violations.empty() ? "" : d.violations.front());
  EXPECT_EQ(d.max_out_degree, 2u);
}

TEST(Validate, SelfLoopAndDegree) {
  auto spec = testing_support::decoupled(0.5);
  spec.classes[0].neighbor_arity.reset();
  spec.neighbors = [](Index i) { return i == 5 ? std::vector<Index>{5} : std::vector<Index>{}; };
  auto d = validate_spec(spec, 10);
  ASSERT_FALSE(d.passed());
  EXPECT_NE(std::find(d.violations.begin(), d.violations.end(), "self-loop at 5"), d.violations.end());

  spec.max_out_degree = 4;
  spec.neighbors = [](Index i) {
    std::vector<Index> v;
    if (i == 1)
      for (Index j = 2; j <= 1000001; ++j) v.push_back(j);
    return v;
  };
  d = validate_spec(spec, 2);
  ASSERT_FALSE(d.passed());
  EXPECT_EQ(d.violations.front().rfind("degree bound exceeded", 0), 0u);
}

TEST(Validate, UndefinedClassThrows) {
  auto spec = testing_support::decoupled(0.5);
  spec.assign = [](Index i) { return i == 3 ? std::size_t{7} : std::size_t{0}; };
  EXPECT_THROW(validate_spec(spec, 5), SpecError);
}

TEST(SubsystemStep, Examples) {
  TrafficParams p;
  p.T = 0.02;
  p.c = 0.25;
  p.v = {1.0};
  p.l = {1.0};
  const auto spec = build_traffic_network(p);
  EXPECT_DOUBLE_EQ(subsystem_step(spec, 1, Vec{1.0}, Vec{2.0}, Vec{0.0})[0], 0.99);

  const auto zero = [] {
    NetworkSpec s = testing_support::decoupled(0.0);
    s.classes[0].dynamics = [](const StepArgs&, std::span<double> out) { out[0] = 0.0; };
    return s;
  }();
  EXPECT_EQ(subsystem_step(zero, 9, Vec{5.0}, Vec{}, Vec{-3.0})[0], 0.0);

  const auto ex1 = make_builtin("example1").spec;
  EXPECT_DOUBLE_EQ(subsystem_step(ex1, 3, Vec{0.25}, Vec{}, Vec{0.0})[0], 0.75);
  EXPECT_THROW(subsystem_step(ex1, 3, Vec{0.25, 1.0}, Vec{}, Vec{0.0}), std::invalid_argument);
}

TEST(Cone, Examples) {
  const auto c = chain(0.5, 0.1);
  EXPECT_EQ(dependency_cone(c, {1}, 3), (std::vector<Index>{1, 2, 3, 4}));
  EXPECT_EQ(dependency_cone(c, {7, 2}, 0), (std::vector<Index>{2, 7}));
  const auto t = build_traffic_network({});
  EXPECT_EQ(dependency_cone(t, {6}, 1), (std::vector<Index>{5, 6, 10}));
}

TEST(Cone, MonotoneInHorizonAndSet) {
  const auto t = build_traffic_network({});
  for (long M = 0; M < 6; ++M) {
    const auto a = dependency_cone(t, {6, 13}, M), b = dependency_cone(t, {6, 13}, M + 1);
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    const auto c = dependency_cone(t, {6, 13, 40}, M);
    EXPECT_TRUE(std::includes(c.begin(), c.end(), a.begin(), a.end()));
  }
  const auto layers = cone_layers(t, {6}, 4);
  ASSERT_EQ(layers.size(), 5u);
  for (std::size_t k = 0; k + 1 < layers.size(); ++k)
    EXPECT_TRUE(std::includes(layers[k + 1].begin(), layers[k + 1].end(), layers[k].begin(), layers[k].end()));
}

TEST(Simulate, HalvingChain) {
  const auto spec = chain(0.5, 0.0);
  const auto tr = simulate(spec, StateWindow::constant({1.0}), InputSignal::zero(), 3, {1});
  ASSERT_EQ(tr.states.size(), 4u);
  const double expect[] = {1.0, 0.5, 0.25, 0.125};
  for (long k = 0; k <= 3; ++k) EXPECT_EQ(tr.observed_window(k).at(1)[0], expect[k]);
  EXPECT_EQ(tr.states[0].layout->indices, (std::vector<Index>{1, 2, 3, 4}));
}

TEST(Simulate, Example1QuarterState) {
  const auto spec = make_builtin("example1").spec;
  std::vector<Index> S(50);
  for (Index i = 0; i < 50; ++i) S[static_cast<std::size_t>(i)] = i + 1;
  const auto tr = simulate(spec, StateWindow::constant({0.25}), InputSignal::zero(), 1, S);
  for (Index i : S) EXPECT_EQ(tr.observed_window(1).at(i)[0], static_cast<double>(i) / 4.0);
}

TEST(Simulate, MissingInitialConditionThrows) {
  StateWindow w;
  w.set(1, {1.0});
  EXPECT_THROW(simulate(chain(0.5, 0.1), w, InputSignal::zero(), 1, {1}), IncompleteInitialCondition);
  EXPECT_NO_THROW(simulate(chain(0.5, 0.1), w, InputSignal::zero(), 0, {1}));
}

TEST(Simulate, InputBoundEnforced) {
  InputSignal u([](Index, long) { return Vec{2.0}; }, 1.0);
  EXPECT_THROW(simulate(chain(0.5, 0.1, 1.0), StateWindow::constant({0.0}), u, 2, {1}), std::domain_error);
}

TEST(Simulate, MatchesDenseReference) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto spec = testing_support::random_network(seed);
    const auto w = testing_support::matched_uniform(spec, seed, -2, 2);
    const auto u = wobbling_input();
    const long K = 6;
    const auto dense = testing_support::dense_simulation(spec, w, u, 80, K);
    std::vector<Index> S;
    for (const auto& [i, _] : dense[static_cast<std::size_t>(K)])
      if (i <= 30) S.push_back(i);
    const auto tr = simulate(spec, w, u, K, S, {Exec::Serial});
    for (long k = 0; k <= K; ++k)
      for (Index i : S)
        EXPECT_TRUE(same_bits(tr.observed_window(k).at(i), dense[static_cast<std::size_t>(k)].at(i)))
            << "seed " << seed << " k " << k << " i " << i;
  }
}

TEST(Simulate, SerialEqualsParallelBitwise) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  const auto spec = build_traffic_network({});
  std::vector<Index> S;
  for (Index i = 1; i <= 500; ++i) S.push_back(i);
  const auto xi = StateWindow::uniform(3, 0, 20);
  const auto u = InputSignal::constant(1.0);
  const auto a = simulate(spec, xi, u, 40, S, {Exec::Serial});
  const auto b = simulate(spec, xi, u, 40, S, {Exec::Parallel});
  omp_set_num_threads(saved);
  for (long k = 0; k <= 40; ++k)
    EXPECT_TRUE(same_bits(a.states[static_cast<std::size_t>(k)].values, b.states[static_cast<std::size_t>(k)].values));
}

TEST(Simulate, Determinism) {
  const auto spec = testing_support::random_network(5);
  const auto a = simulate(spec, testing_support::matched_uniform(spec, 9, -1, 1), InputSignal::constant(0.3), 8, {2, 3, 4});
  const auto b = simulate(spec, testing_support::matched_uniform(spec, 9, -1, 1), InputSignal::constant(0.3), 8, {2, 3, 4});
  for (std::size_t k = 0; k < a.states.size(); ++k) EXPECT_TRUE(same_bits(a.states[k].values, b.states[k].values));
}

TEST(Simulate, CocycleProperty) {
  const auto spec = build_traffic_network({});
  const auto xi = StateWindow::uniform(11, 0, 20);
  const auto u = InputSignal::constant(1.0);
  const std::vector<Index> S{1, 6, 17};
  const long K1 = 3, K2 = 4;
  const auto whole = simulate(spec, xi, u, K1 + K2, S);
  const auto second = simulate(spec, whole.states[K1].to_window(), u, K2, S);
  for (Index i : S) EXPECT_TRUE(same_bits(whole.observed_window(K1 + K2).at(i), second.observed_window(K2).at(i)));
}

TEST(IterateM, MatchesSimulate) {
  const auto spec = build_traffic_network({});
  const auto xi = StateWindow::uniform(2, 0, 20);
  const auto u = InputSignal::constant(1.0);
  const auto tr = simulate(spec, xi, u, 2, {6});
  const InputValue one = [](Index) { return Vec{1.0}; };
  EXPECT_TRUE(same_bits(iterate_M(spec, xi, {one, one}, {6}).at(6), tr.observed_window(2).at(6)));

  const auto ch = chain(0.5, 0.0);
  const InputValue zero = [](Index) { return Vec{0.0}; };
  EXPECT_EQ(iterate_M(ch, StateWindow::constant({1.0}), {zero, zero, zero}, {1}).at(1)[0], 0.125);
}

TEST(IterateM, RandomSpecsAndTimeVaryingInput) {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const auto spec = testing_support::random_network(seed);
    const auto xi = testing_support::matched_uniform(spec, seed, -1, 1);
    const auto u = wobbling_input();
    for (long M : {1L, 2L, 5L}) {
      const std::vector<Index> S{1, 2, 5};
      const auto tr = simulate(spec, xi, u, M, S);
      std::vector<InputValue> in;
      for (long m = 0; m < M; ++m) in.push_back([u, m](Index i) { return u(i, m); });
      const auto it = iterate_M(spec, xi, in, S);
      for (Index i : S) EXPECT_TRUE(same_bits(it.at(i), tr.observed_window(M).at(i)));
    }
  }
}
