#include "netiss/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace netiss {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::shared_ptr<const GainNode> make_node(GainNode n) {
  return std::make_shared<const GainNode>(std::move(n));
}

double eval_piecewise(const gain::PiecewiseLinear& p, double r) {
  const auto& pts = p.points;
  if (pts.size() == 1) return 0.0;
  auto it = std::upper_bound(pts.begin(), pts.end(), r,
                             [](double v, const auto& pt) { return v < pt.first; });
  std::size_t hi = static_cast<std::size_t>(it - pts.begin());
  if (hi == 0) hi = 1;
  if (hi >= pts.size()) hi = pts.size() - 1;  // extrapolate with last slope
  const auto& [r0, g0] = pts[hi - 1];
  const auto& [r1, g1] = pts[hi];
  return g0 + (r - r0) * (g1 - g0) / (r1 - r0);
}

}  // namespace

ScalarGain::ScalarGain() : node_(make_node({gain::Zero{}})) {}

ScalarGain ScalarGain::zero() { return ScalarGain(); }

ScalarGain ScalarGain::linear(double slope) {
  if (!(slope >= 0.0) || !std::isfinite(slope))
    throw std::invalid_argument("linear gain: slope must be finite and >= 0");
  return ScalarGain(make_node({gain::Linear{slope}}));
}

ScalarGain ScalarGain::power(double coeff, double exponent) {
  if (!(coeff >= 0.0) || !std::isfinite(coeff))
    throw std::invalid_argument("power gain: coeff must be finite and >= 0");
  if (!(exponent > 0.0) || !std::isfinite(exponent))
    throw std::invalid_argument("power gain: exponent must be > 0");
  return ScalarGain(make_node({gain::Power{coeff, exponent}}));
}

ScalarGain ScalarGain::piecewise(std::vector<std::pair<double, double>> points) {
  if (points.empty() || points.front().first != 0.0 || points.front().second != 0.0)
    throw std::invalid_argument("piecewise gain: first breakpoint must be (0, 0)");
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (!(points[k].first > points[k - 1].first))
      throw std::invalid_argument("piecewise gain: breakpoints must be strictly increasing");
    if (!(points[k].second >= points[k - 1].second))
      throw std::invalid_argument("piecewise gain: values must be nondecreasing");
    if (!std::isfinite(points[k].first) || !std::isfinite(points[k].second))
      throw std::invalid_argument("piecewise gain: non-finite breakpoint");
  }
  return ScalarGain(make_node({gain::PiecewiseLinear{std::move(points)}}));
}

ScalarGain ScalarGain::max(std::vector<ScalarGain> terms) {
  if (terms.empty()) return zero();
  return ScalarGain(make_node({gain::Max{std::move(terms)}}));
}

ScalarGain ScalarGain::sum(std::vector<ScalarGain> terms) {
  if (terms.empty()) return zero();
  return ScalarGain(make_node({gain::Sum{std::move(terms)}}));
}

ScalarGain ScalarGain::compose(ScalarGain outer, ScalarGain inner) {
  return ScalarGain(make_node({gain::Compose{std::move(outer), std::move(inner)}}));
}

double ScalarGain::operator()(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("gain evaluated at negative or NaN argument");
  return std::visit(overloaded{
                        [](const gain::Zero&) { return 0.0; },
                        [r](const gain::Linear& g) { return g.slope * r; },
                        [r](const gain::Power& g) { return g.coeff * std::pow(r, g.exponent); },
                        [r](const gain::PiecewiseLinear& g) { return eval_piecewise(g, r); },
                        [r](const gain::Max& g) {
                          double m = 0.0;
                          for (const auto& t : g.terms) m = std::max(m, t(r));
                          return m;
                        },
                        [r](const gain::Sum& g) {
                          double s = 0.0;
                          for (const auto& t : g.terms) s += t(r);
                          return s;
                        },
                        [r](const gain::Compose& g) { return g.outer(g.inner(r)); },
                    },
                    node_->value);
}

bool ScalarGain::is_zero() const {
  return std::visit(overloaded{
                        [](const gain::Zero&) { return true; },
                        [](const gain::Linear& g) { return g.slope == 0.0; },
                        [](const gain::Power& g) { return g.coeff == 0.0; },
                        [](const gain::PiecewiseLinear& g) {
                          return std::all_of(g.points.begin(), g.points.end(),
                                             [](const auto& p) { return p.second == 0.0; });
                        },
                        [](const gain::Max& g) {
                          return std::all_of(g.terms.begin(), g.terms.end(),
                                             [](const auto& t) { return t.is_zero(); });
                        },
                        [](const gain::Sum& g) {
                          return std::all_of(g.terms.begin(), g.terms.end(),
                                             [](const auto& t) { return t.is_zero(); });
                        },
                        [](const gain::Compose& g) { return g.outer.is_zero() || g.inner.is_zero(); },
                    },
                    node_->value);
}

std::string ScalarGain::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const gain::Zero&) { os << "zero"; },
                 [&](const gain::Linear& g) { os << "linear(" << g.slope << ")"; },
                 [&](const gain::Power& g) { os << "power(" << g.coeff << ", " << g.exponent << ")"; },
                 [&](const gain::PiecewiseLinear& g) { os << "piecewise[" << g.points.size() << "]"; },
                 [&](const gain::Max& g) {
                   os << "max(";
                   for (std::size_t k = 0; k < g.terms.size(); ++k)
                     os << (k ? ", " : "") << g.terms[k].describe();
                   os << ")";
                 },
                 [&](const gain::Sum& g) {
                   os << "sum(";
                   for (std::size_t k = 0; k < g.terms.size(); ++k)
                     os << (k ? ", " : "") << g.terms[k].describe();
                   os << ")";
                 },
                 [&](const gain::Compose& g) {
                   os << g.outer.describe() << " o " << g.inner.describe();
                 },
             },
             node_->value);
  return os.str();
}

ScalarGain inverse(const ScalarGain& g) {
  if (const auto* lin = std::get_if<gain::Linear>(&g.node().value)) {
    if (lin->slope <= 0.0) throw std::invalid_argument("inverse: zero-slope linear gain");
    return ScalarGain::linear(1.0 / lin->slope);
  }
  if (const auto* pw = std::get_if<gain::Power>(&g.node().value)) {
    if (pw->coeff <= 0.0) throw std::invalid_argument("inverse: zero-coefficient power gain");
    // (r / c)^{1/p} = c^{-1/p} r^{1/p}
    return ScalarGain::power(std::pow(pw->coeff, -1.0 / pw->exponent), 1.0 / pw->exponent);
  }
  throw std::invalid_argument("inverse: only linear and power gains have closed-form inverses");
}

ScalarGain iterate(const ScalarGain& g, int k) {
  if (k < 0) throw std::invalid_argument("iterate: negative count");
  if (k == 0) return ScalarGain::linear(1.0);
  ScalarGain out = g;
  for (int j = 1; j < k; ++j) out = ScalarGain::compose(g, out);
  return out;
}

IdentityComparison is_less_than_identity(const ScalarGain& g, double radius, int grid_n) {
  if (!(radius > 0.0)) throw std::invalid_argument("is_less_than_identity: radius must be > 0");
  if (grid_n < 2) throw std::invalid_argument("is_less_than_identity: grid_n must be >= 2");
  IdentityComparison out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  out.less_than_identity = true;
  for (int j = 1; j <= grid_n; ++j) {
    const double r = radius * j / grid_n;
    const double margin = r - g(r);
    if (!(margin > 0.0)) out.less_than_identity = false;
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.witness_r = r;
    }
  }
  return out;
}

Domination check_dominated(const ScalarGain& g, const ScalarGain& h, double radius, int grid_n,
                           double tol) {
  if (!(radius > 0.0)) throw std::invalid_argument("check_dominated: radius must be > 0");
  if (grid_n < 1) throw std::invalid_argument("check_dominated: grid_n must be >= 1");
  Domination out;
  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= grid_n; ++j) {
    const double r = radius * j / grid_n;
    const double excess = g(r) - h(r);
    if (excess > out.worst_excess) {
      out.worst_excess = excess;
      out.witness_r = r;
    }
  }
  out.dominated = out.worst_excess <= tol;
  return out;
}

std::string to_string(GainClass c) {
  switch (c) {
    case GainClass::Zero: return "zero";
    case GainClass::K: return "K";
    case GainClass::KInfinityCandidate: return "K-infinity-candidate";
    case GainClass::NotK: return "not-K";
  }
  return "unknown";
}

GainClass sampled_class_check(const ScalarGain& g, double radius, int grid_n,
                              double unbounded_threshold) {
  if (!(radius > 0.0)) throw std::invalid_argument("sampled_class_check: radius must be > 0");
  if (grid_n < 2) throw std::invalid_argument("sampled_class_check: grid_n must be >= 2");
  if (g(0.0) != 0.0) return GainClass::NotK;
  bool all_zero = true;
  bool strictly_increasing = true;
  double prev = 0.0;
  for (int j = 1; j <= grid_n; ++j) {
    const double v = g(radius * j / grid_n);
    if (v != 0.0) all_zero = false;
    if (!(v - prev > 1e-12 * std::max(1.0, v))) strictly_increasing = false;
    prev = v;
  }
  if (all_zero) return GainClass::Zero;
  if (!strictly_increasing) return GainClass::NotK;
  return prev >= unbounded_threshold ? GainClass::KInfinityCandidate : GainClass::K;
}

KLBound KLBound::exponential(double C, double rho) {
  if (!(C >= 1.0)) throw std::invalid_argument("exponential KL bound: C must be >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("exponential KL bound: rho in [0,1)");
  return KLBound(kl::Exponential{C, rho});
}

KLBound KLBound::product(ScalarGain phi, std::vector<double> decay) {
  if (decay.empty()) throw std::invalid_argument("product KL bound: empty decay samples");
  for (std::size_t k = 1; k < decay.size(); ++k)
    if (decay[k] > decay[k - 1])
      throw std::invalid_argument("product KL bound: decay samples must be nonincreasing");
  return KLBound(kl::Product{std::move(phi), std::move(decay)});
}

KLBound KLBound::lyapunov_chain(const ScalarGain& lower, ScalarGain alpha, ScalarGain upper) {
  return KLBound(kl::LyapunovChain{inverse(lower), std::move(alpha), std::move(upper)});
}

double KLBound::operator()(double r, long k) const {
  if (!(r >= 0.0)) throw std::domain_error("KL bound evaluated at negative r");
  if (k < 0) throw std::domain_error("KL bound evaluated at negative k");
  return std::visit(overloaded{
                        [&](const kl::Exponential& b) {
                          return b.C * std::pow(b.rho, static_cast<double>(k)) * r;
                        },
                        [&](const kl::Product& b) {
                          const auto idx = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                                 b.decay.size() - 1);
                          return b.phi(r) * b.decay[idx];
                        },
                        [&](const kl::LyapunovChain& b) {
                          double v = b.upper(r);
                          for (long j = 0; j < k; ++j) v = b.alpha(v);
                          return b.lower_inverse(v);
                        },
                    },
                    node_);
}

}  // namespace netiss
