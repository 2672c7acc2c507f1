#include <gtest/gtest.h>

#include <cmath>

#include "netiss/comparison.hpp"
#include "netiss/io.hpp"

using namespace netiss;

TEST(ScalarGain, Evaluation) {
  EXPECT_DOUBLE_EQ(ScalarGain::linear(0.5)(2.0), 1.0);
  EXPECT_EQ(ScalarGain::zero()(7.3), 0.0);
  EXPECT_DOUBLE_EQ(ScalarGain::compose(ScalarGain::linear(2), ScalarGain::power(1, 2))(3.0), 18.0);
  EXPECT_THROW(ScalarGain::linear(1)(-1.0), std::domain_error);
  EXPECT_THROW(ScalarGain::linear(1)(NAN), std::domain_error);
}

TEST(ScalarGain, PiecewiseExtrapolatesWithFinalSlope) {
  auto g = ScalarGain::piecewise({{0, 0}, {1, 0.5}, {2, 2.5}});
  EXPECT_DOUBLE_EQ(g(0.5), 0.25);
  EXPECT_DOUBLE_EQ(g(1.5), 1.5);
  EXPECT_DOUBLE_EQ(g(3.0), 4.5);
  EXPECT_THROW(ScalarGain::piecewise({{0, 1}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(ScalarGain::piecewise({{0, 0}, {1, 2}, {1, 3}}), std::invalid_argument);
}

TEST(ScalarGain, MaxWithZeroIsIdentityOperation) {
  const auto g = ScalarGain::power(0.7, 1.3);
  const auto m = ScalarGain::max({g, ScalarGain::zero()});
  for (double r = 0; r <= 10; r += 0.37) EXPECT_EQ(m(r), g(r));
}

TEST(ScalarGain, ComposeIsAssociative) {
  const auto a = ScalarGain::linear(1.7), b = ScalarGain::power(0.3, 2.0), c = ScalarGain::piecewise({{0, 0}, {2, 1}});
  const auto left = ScalarGain::compose(ScalarGain::compose(a, b), c);
  const auto right = ScalarGain::compose(a, ScalarGain::compose(b, c));
  for (double r = 0; r <= 20; r += 0.5) EXPECT_EQ(left(r), right(r));
}

TEST(ScalarGain, InverseAndIterate) {
  const auto p = ScalarGain::power(2.0, 3.0);
  const auto pi = inverse(p);
  for (double r : {0.1, 1.0, 5.0}) EXPECT_NEAR(pi(p(r)), r, 1e-12 * r);
  EXPECT_THROW(inverse(ScalarGain::max({p})), std::invalid_argument);
  EXPECT_DOUBLE_EQ(iterate(ScalarGain::linear(0.5), 3)(8.0), 1.0);
  EXPECT_DOUBLE_EQ(iterate(ScalarGain::linear(0.5), 0)(8.0), 8.0);
}

TEST(IdentityComparison, Examples) {
  auto a = is_less_than_identity(ScalarGain::linear(0.9), 10, 100);
  EXPECT_TRUE(a.less_than_identity);
  EXPECT_NEAR(a.worst_margin, 0.01, 1e-15);
  EXPECT_DOUBLE_EQ(a.witness_r, 0.1);
  EXPECT_FALSE(is_less_than_identity(ScalarGain::linear(1.0), 1, 10).less_than_identity);

  auto c = is_less_than_identity(ScalarGain::piecewise({{0, 0}, {1, 0.5}, {2, 2.5}}), 2, 200);
  EXPECT_FALSE(c.less_than_identity);
  // g(r) = 2r - 1.5 on [1, 2]; r - g(r) = 1.5 - r is smallest at r = 2.
  EXPECT_DOUBLE_EQ(c.witness_r, 2.0);
  EXPECT_DOUBLE_EQ(c.worst_margin, -0.5);
}

TEST(Domination, FindsWorstExcess) {
  auto d = check_dominated(ScalarGain::linear(2), ScalarGain::linear(1), 5, 50);
  EXPECT_FALSE(d.dominated);
  EXPECT_DOUBLE_EQ(d.witness_r, 5.0);
  EXPECT_TRUE(check_dominated(ScalarGain::linear(0.9), ScalarGain::linear(0.95), 5, 50).dominated);
}

TEST(SampledClass, Verdicts) {
  EXPECT_EQ(sampled_class_check(ScalarGain::linear(2), 10, 100), GainClass::KInfinityCandidate);
  EXPECT_EQ(sampled_class_check(ScalarGain::zero(), 10, 100), GainClass::Zero);
  EXPECT_EQ(sampled_class_check(ScalarGain::piecewise({{0, 0}, {1, 1}, {2, 1}, {3, 2}}), 3, 30), GainClass::NotK);
  EXPECT_EQ(sampled_class_check(ScalarGain::linear(1e-3), 10, 100, 1.0), GainClass::K);
}

TEST(KLBound, Forms) {
  const auto e = KLBound::exponential(2.0, 0.5);
  EXPECT_DOUBLE_EQ(e(3.0, 2), 1.5);
  const auto p = KLBound::product(ScalarGain::linear(2), {1.0, 0.5, 0.25});
  EXPECT_DOUBLE_EQ(p(1.0, 10), 0.5);
  const auto l = KLBound::lyapunov_chain(ScalarGain::linear(2), ScalarGain::linear(0.5), ScalarGain::linear(4));
  EXPECT_DOUBLE_EQ(l(1.0, 2), 0.5);  // (1/2) 0.25 * 4
  EXPECT_THROW(KLBound::exponential(0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(KLBound::product(ScalarGain::linear(1), {0.5, 1.0}), std::invalid_argument);
}

TEST(GainJson, RoundTrip) {
  const auto g = ScalarGain::max({ScalarGain::linear(0.9), ScalarGain::compose(ScalarGain::power(1, 2), ScalarGain::zero()),
                                  ScalarGain::sum({ScalarGain::piecewise({{0, 0}, {1, 0.5}})})});
  const auto back = gain_from_json(to_json(g));
  EXPECT_EQ(to_json(back), to_json(g));
  for (double r = 0; r < 4; r += 0.25) EXPECT_EQ(back(r), g(r));
  EXPECT_EQ(to_json(ScalarGain::linear(0.9)), json::parse(R"({"kind":"linear","slope":0.9})"));
}

TEST(GainJson, UnknownFieldNamesPointer) {
  try {
    gain_from_json(json::parse(R"({"kind":"max","terms":[{"kind":"linear","slope":1,"slop":2}]})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer, "/terms/0/slop");
  }
}
