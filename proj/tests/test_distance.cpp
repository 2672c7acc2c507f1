#include <gtest/gtest.h>

#include "netiss/distance.hpp"
#include "netiss/io.hpp"
#include "netiss/network.hpp"
#include "support.hpp"

using namespace netiss;

TEST(Project, Examples) {
  EXPECT_DOUBLE_EQ(dist(Vec{3.0}, ClosedSet::box({-1}, {1})), 2.0);
  EXPECT_EQ(dist(Vec{0.5}, ClosedSet::box({-1}, {1})), 0.0);
  EXPECT_DOUBLE_EQ(dist(Vec{3.0, 4.0}, ClosedSet::point({0, 0}), Norm::Euclidean), 5.0);
  EXPECT_DOUBLE_EQ(dist(Vec{3.0, 4.0}, ClosedSet::point({0, 0}), Norm::Sup), 4.0);
}

TEST(Project, WitnessAttainsDistance) {
  const auto A = ClosedSet::finite_union({ClosedSet::box({0, 0}, {1, 1}), ClosedSet::ball({5, 5}, 1, Norm::Euclidean)});
  const Vec x{4.0, 3.0};
  const auto p = project(x, A, Norm::Euclidean);
  EXPECT_TRUE(A.contains(p.witness) || dist(p.witness, A, Norm::Euclidean) < 1e-12);
  EXPECT_NEAR(norm(Vec{x[0] - p.witness[0], x[1] - p.witness[1]}, Norm::Euclidean), p.distance, 1e-12);
  EXPECT_THROW(project(Vec{1.0}, A), std::invalid_argument);
  EXPECT_THROW(project(x, ClosedSet::ball({0, 0}, 1, Norm::Euclidean), Norm::Sup), std::domain_error);
}

TEST(Project, SupBallAndBoxAgree) {
  const auto ball = ClosedSet::ball({1, 2}, 0.5, Norm::Sup);
  const auto box = ClosedSet::box({0.5, 1.5}, {1.5, 2.5});
  for (double a = -3; a <= 3; a += 0.7)
    for (double b = -3; b <= 3; b += 0.9) EXPECT_DOUBLE_EQ(dist(Vec{a, b}, ball), dist(Vec{a, b}, box));
}

TEST(DistProduct, Examples) {
  StateWindow w;
  w.set(1, {0.5});
  w.set(2, {3.0});
  const SetRule box = [](Index) { return ClosedSet::box({-1}, {1}); };
  const auto d = dist_product(w, box);
  EXPECT_DOUBLE_EQ(d.value, 2.0);
  EXPECT_EQ(d.argmax, 2);
  EXPECT_TRUE(d.sup_over_window);

  StateWindow in;
  for (Index i = 1; i <= 5; ++i) in.set(i, {0.1 * static_cast<double>(i)});
  EXPECT_EQ(dist_product(in, box).value, 0.0);
}

TEST(DistProduct, MatchesBruteForceOracle) {
  using testing_support::brute_box_distance;
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    auto u = [inst, n = std::uint64_t{0}]() mutable { return unit_uniform(inst + 1000, n++); };
    const std::size_t comps = 1 + static_cast<std::size_t>(u() * 4);
    StateWindow w;
    std::vector<ClosedSet> sets;
    double oracle = 0.0;
    for (std::size_t i = 0; i < comps; ++i) {
      const double lo = 4 * u() - 2, width = u() < 0.3 ? 0.0 : 0.04 * u();
      const double x = 6 * u() - 3;
      const auto A = width == 0.0 ? ClosedSet::point({lo}) : ClosedSet::box({lo}, {lo + width});
      sets.push_back(A);
      w.set(static_cast<Index>(i + 1), {x});
      oracle = std::max(oracle, brute_box_distance({x}, {lo}, {lo + width}, 1e-3));
    }
    const auto d = dist_product(w, [&sets](Index i) { return sets[static_cast<std::size_t>(i - 1)]; });
    EXPECT_NEAR(d.value, oracle, 1e-3) << "instance " << inst;
    EXPECT_LE(d.value, oracle + 1e-12);
  }
}

TEST(UniformBound, Examples) {
  const auto b1 = uniformly_bounded([](Index) { return ClosedSet::box({-1}, {1}); }, 100);
  EXPECT_TRUE(b1.bounded);
  EXPECT_DOUBLE_EQ(b1.C, 1.0);
  const auto b0 = uniformly_bounded([](Index) { return ClosedSet::point({0}); }, 100);
  EXPECT_TRUE(b0.bounded);
  EXPECT_EQ(b0.C, 0.0);
  const auto grow = uniformly_bounded(
      [](Index i) { return ClosedSet::box({-static_cast<double>(i)}, {static_cast<double>(i)}); }, 100);
  EXPECT_FALSE(grow.bounded);
  EXPECT_NEAR(grow.slope, 1.0, 1e-9);
  EXPECT_EQ(grow.witness_index, 100);
}

TEST(ExtendedMetric, Examples) {
  StateWindow x = StateWindow::constant({0.0});
  StateWindow y = StateWindow::constant({0.0});
  const auto same = extended_metric(x, y, 10);
  EXPECT_EQ(same.partial, 0.0);
  EXPECT_DOUBLE_EQ(same.tail_bound, std::ldexp(1.0, -10));

  StateWindow z = StateWindow::constant({0.0});
  z.set(1, {1.0});
  EXPECT_DOUBLE_EQ(extended_metric(z, x, 10).partial, 0.25);
  EXPECT_EQ(extended_metric(z, x, 10).partial, extended_metric(x, z, 10).partial);
}

TEST(SetJson, RoundTrip) {
  const auto A = ClosedSet::finite_union({ClosedSet::point({1, 2}), ClosedSet::box({0, 0}, {1, 1}),
                                          ClosedSet::ball({3, 3}, 2, Norm::Euclidean)});
  const auto B = set_from_json(to_json(A));
  EXPECT_EQ(to_json(A), to_json(B));
  EXPECT_THROW(set_from_json(json::parse(R"({"kind":"box","lower":[1],"upper":[0]})")), ConfigError);
}
