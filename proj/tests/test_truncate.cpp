#include <gtest/gtest.h>

#include <cstring>
#include <set>

#include "netiss/traffic.hpp"
#include "netiss/truncate.hpp"
#include "support.hpp"

using namespace netiss;

TEST(Truncation, InterfaceSets) {
  const auto ch = testing_support::chain(0.5, 0.1);
  EXPECT_EQ(build_truncation(ch, 5).interface, (std::vector<Index>{6}));
  EXPECT_TRUE(build_truncation(testing_support::decoupled(0.5), 5).interface.empty());
  EXPECT_THROW(build_truncation(ch, 0), std::invalid_argument);

  const auto t = build_traffic_network({});
  std::set<Index> expect;
  for (Index i = 1; i <= 8; ++i)
    for (Index j : t.neighbors_of(i))
      if (j > 8) expect.insert(j);
  const auto tn = build_truncation(t, 8);
  EXPECT_EQ(tn.interface, std::vector<Index>(expect.begin(), expect.end()));
  EXPECT_EQ(tn.interface, (std::vector<Index>{10, 12}));
}

TEST(TruncatedV, Examples) {
  const auto spec = testing_support::decoupled(0.5);
  const auto fam = StorageFamily::distance_to_sets(spec);
  StateWindow w;
  for (Index i = 1; i <= 6; ++i) w.set(i, {static_cast<double>(i % 4) - 1.5});
  EXPECT_EQ(truncated_V(fam, spec, 1, w), 0.5);
  StateWindow first4;
  for (Index i = 1; i <= 4; ++i) first4.set(i, w.at(i));
  EXPECT_EQ(truncated_V(fam, spec, 4, w), overall_V(fam, spec, first4).value);
  EXPECT_EQ(truncated_V(fam, spec, 3, StateWindow::constant({0.0})), 0.0);
  StateWindow partial;
  partial.set(1, {1.0});
  EXPECT_THROW(truncated_V(fam, spec, 2, partial), IncompleteInitialCondition);
}

TEST(TruncatedDecay, TrafficZeroInterface) {
  const auto spec = build_traffic_network({});
  const auto tc = traffic_certificate({});
  const auto tn = build_truncation(spec, 100);
  const auto traj = simulate_truncated(tn, StateWindow::uniform(1, 0, 20), InputSignal::constant(1.0), 200,
                                       zero_interface(tn, 200));
  const auto rep = check_truncated_decay(tn, tc.cert.family, ScalarGain::linear(tc.alpha), ScalarGain::linear(1),
                                         ScalarGain::linear(tc.gamma_u_bar), traj);
  EXPECT_TRUE(rep.passed);
}

TEST(TruncatedDecay, LargeInterfaceDominates) {
  const auto spec = build_traffic_network({});
  const auto tc = traffic_certificate({});
  const auto tn = build_truncation(spec, 50);
  auto sig = zero_interface(tn, 30);
  for (auto& v : sig.values) std::fill(v.begin(), v.end(), 1000.0);
  const auto traj = simulate_truncated(tn, StateWindow::uniform(1, 0, 1), InputSignal::constant(1.0), 30, sig);
  EXPECT_TRUE(check_truncated_decay(tn, tc.cert.family, ScalarGain::linear(tc.alpha), ScalarGain::linear(1),
                                    ScalarGain::linear(tc.gamma_u_bar), traj)
                  .passed);
}

TEST(TruncatedDecay, UnstableFamilyFails) {
  const auto spec = testing_support::chain(1.5, 0.2);
  const auto tn = build_truncation(spec, 10);
  const auto traj = simulate_truncated(tn, StateWindow::constant({1.0}), InputSignal::zero(), 5, zero_interface(tn, 5));
  EXPECT_FALSE(check_truncated_decay(tn, StorageFamily::distance_to_sets(spec), ScalarGain::linear(0.9),
                                     ScalarGain::linear(1), ScalarGain::zero(), traj)
                   .passed);
}

TEST(InterfaceSignal, DecoupledTailEvolvesAlone) {
  const auto spec = testing_support::chain(0.5, 0.0);
  const auto sig = record_interface_signal(spec, 5, StateWindow::constant({8.0}), InputSignal::zero(), 4);
  ASSERT_EQ(sig.layout->indices, (std::vector<Index>{6}));
  double x = 8.0;
  for (const auto& v : sig.values) {
    EXPECT_EQ(v[0], x);
    x *= 0.5;
  }
  EXPECT_EQ(sig.mode, "recorded");
}

TEST(InterfaceSignal, StaysInSetsWhenStartedThere) {
  const auto spec = build_traffic_network({});
  const auto tn = build_truncation(spec, 40);
  const auto sig = record_interface_signal(spec, 40, StateWindow::constant({0.0}), InputSignal::zero(), 25);
  for (const auto& v : sig.values)
    for (double x : v) EXPECT_EQ(x, 0.0);
  const auto rep = check_interface_bound(spec, tn, sig, StateWindow::constant({0.0}), KLBound::exponential(1, 0.5),
                                         ScalarGain::zero(), 0.0);
  EXPECT_TRUE(rep.passed);
}

TEST(InterfaceSignal, BoundByIssEstimate) {
  const auto spec = build_traffic_network({});
  const auto tc = traffic_certificate({});
  const auto tn = build_truncation(spec, 30);
  const auto xi = StateWindow::uniform(5, 0, 20);
  const auto sig = record_interface_signal(spec, 30, xi, InputSignal::constant(1.0), 60);
  // Interface states depend on initial values outside 1..n, which the estimate
  // only sees through |xi<n>|; they share the [0, 20] range here.
  EXPECT_TRUE(check_interface_bound(spec, tn, sig, xi, KLBound::exponential(1.1, tc.alpha),
                                    ScalarGain::linear(tc.gamma_u_bar), 1.0)
                  .passed);
}

TEST(Consistency, ZeroHorizonAndChains) {
  const auto t = build_traffic_network({});
  const auto r0 = consistency_check(t, 10, StateWindow::uniform(1, 0, 20), InputSignal::constant(1.0), 0);
  EXPECT_TRUE(r0.passed);
  EXPECT_EQ(r0.compared, 10u);

  const auto r = consistency_check(testing_support::chain(0.7, 0.3, 1.0), 5, StateWindow::uniform(2, -1, 1),
                                   InputSignal::constant(0.5), 10);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.max_deviation, 0.0);
  EXPECT_EQ(r.compared, 55u);
}

TEST(Consistency, NestedTruncationsAgree) {
  const auto spec = build_traffic_network({});
  const auto xi = StateWindow::uniform(3, 0, 20);
  const auto u = InputSignal::constant(1.0);
  const long K = 40;
  const auto small = build_truncation(spec, 20), big = build_truncation(spec, 60);
  const auto a = simulate_truncated(small, xi, u, K, record_interface_signal(spec, 20, xi, u, K));
  const auto b = simulate_truncated(big, xi, u, K, record_interface_signal(spec, 60, xi, u, K));
  for (long k = 0; k <= K; ++k) {
    const auto& x = a.states[static_cast<std::size_t>(k)];
    const auto& y = b.states[static_cast<std::size_t>(k)];
    EXPECT_EQ(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)), 0) << "k = " << k;
  }
}
