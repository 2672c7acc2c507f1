#include "netiss/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netiss/network.hpp"

namespace netiss {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(std::size_t got, std::size_t want) {
  if (got != want)
    throw std::invalid_argument("dimension mismatch: got " + std::to_string(got) + ", expected " +
                                std::to_string(want));
}

Vec diff(std::span<const double> x, std::span<const double> y) {
  Vec d(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) d[k] = x[k] - y[k];
  return d;
}

Projection project_box(std::span<const double> x, const Vec& lo, const Vec& hi, Norm metric) {
  Projection p;
  p.witness.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) p.witness[k] = std::clamp(x[k], lo[k], hi[k]);
  p.distance = norm(diff(x, p.witness), metric);
  return p;
}

}  // namespace

double norm(std::span<const double> x, Norm n) {
  double acc = 0.0;
  if (n == Norm::Sup) {
    for (double v : x) acc = std::max(acc, std::abs(v));
    return acc;
  }
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

ClosedSet ClosedSet::point(Vec a) {
  if (a.empty()) throw std::invalid_argument("point set: empty vector");
  return ClosedSet(std::make_shared<const SetNode>(SetNode{set::Point{std::move(a)}}));
}

ClosedSet ClosedSet::box(Vec lower, Vec upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("box set: bounds must be nonempty and of equal size");
  for (std::size_t k = 0; k < lower.size(); ++k)
    if (!(lower[k] <= upper[k])) throw std::invalid_argument("box set: lower > upper");
  return ClosedSet(
      std::make_shared<const SetNode>(SetNode{set::Box{std::move(lower), std::move(upper)}}));
}

ClosedSet ClosedSet::ball(Vec center, double radius, Norm ball_norm) {
  if (center.empty()) throw std::invalid_argument("ball set: empty center");
  if (!(radius >= 0.0)) throw std::invalid_argument("ball set: radius must be >= 0");
  return ClosedSet(
      std::make_shared<const SetNode>(SetNode{set::Ball{std::move(center), radius, ball_norm}}));
}

ClosedSet ClosedSet::finite_union(std::vector<ClosedSet> members) {
  if (members.empty()) throw std::invalid_argument("union set: no members");
  const auto d = members.front().dim();
  for (const auto& m : members) require_dim(m.dim(), d);
  return ClosedSet(std::make_shared<const SetNode>(SetNode{set::Union{std::move(members)}}));
}

std::size_t ClosedSet::dim() const {
  return std::visit(overloaded{
                        [](const set::Point& s) { return s.a.size(); },
                        [](const set::Box& s) { return s.lower.size(); },
                        [](const set::Ball& s) { return s.center.size(); },
                        [](const set::Union& s) { return s.members.front().dim(); },
                    },
                    node_->value);
}

bool ClosedSet::contains(std::span<const double> x) const {
  require_dim(x.size(), dim());
  return std::visit(
      overloaded{
          [&](const set::Point& s) { return std::equal(x.begin(), x.end(), s.a.begin()); },
          [&](const set::Box& s) {
            for (std::size_t k = 0; k < x.size(); ++k)
              if (x[k] < s.lower[k] || x[k] > s.upper[k]) return false;
            return true;
          },
          [&](const set::Ball& s) { return norm(diff(x, s.center), s.norm) <= s.radius; },
          [&](const set::Union& s) {
            return std::any_of(s.members.begin(), s.members.end(),
                               [&](const ClosedSet& m) { return m.contains(x); });
          },
      },
      node_->value);
}

Vec ClosedSet::anchor() const {
  return std::visit(overloaded{
                        [](const set::Point& s) { return s.a; },
                        [](const set::Box& s) {
                          Vec m(s.lower.size());
                          for (std::size_t k = 0; k < m.size(); ++k)
                            m[k] = 0.5 * (s.lower[k] + s.upper[k]);
                          return m;
                        },
                        [](const set::Ball& s) { return s.center; },
                        [](const set::Union& s) { return s.members.front().anchor(); },
                    },
                    node_->value);
}

double ClosedSet::radius(Norm n) const {
  return std::visit(overloaded{
                        [&](const set::Point& s) { return norm(s.a, n); },
                        [&](const set::Box& s) {
                          Vec corner(s.lower.size());
                          for (std::size_t k = 0; k < corner.size(); ++k)
                            corner[k] = std::max(std::abs(s.lower[k]), std::abs(s.upper[k]));
                          return norm(corner, n);
                        },
                        [&](const set::Ball& s) {
                          if (s.norm == Norm::Sup) {
                            Vec corner(s.center.size());
                            for (std::size_t k = 0; k < corner.size(); ++k)
                              corner[k] = std::abs(s.center[k]) + s.radius;
                            return norm(corner, n);
                          }
                          // euclidean ball: |c| + r bounds every member in either norm
                          return norm(s.center, n) + s.radius;
                        },
                        [&](const set::Union& s) {
                          double r = 0.0;
                          for (const auto& m : s.members) r = std::max(r, m.radius(n));
                          return r;
                        },
                    },
                    node_->value);
}

Projection project(std::span<const double> x, const ClosedSet& A, Norm metric) {
  require_dim(x.size(), A.dim());
  return std::visit(
      overloaded{
          [&](const set::Point& s) {
            return Projection{norm(diff(x, s.a), metric), s.a};
          },
          [&](const set::Box& s) { return project_box(x, s.lower, s.upper, metric); },
          [&](const set::Ball& s) {
            if (s.norm == Norm::Sup) {
              Vec lo(s.center.size()), hi(s.center.size());
              for (std::size_t k = 0; k < lo.size(); ++k) {
                lo[k] = s.center[k] - s.radius;
                hi[k] = s.center[k] + s.radius;
              }
              return project_box(x, lo, hi, metric);
            }
            if (metric != Norm::Euclidean)
              throw std::domain_error("distance to a euclidean ball under the sup metric is not supported");
            const Vec d = diff(x, s.center);
            const double len = norm(d, Norm::Euclidean);
            if (len <= s.radius) return Projection{0.0, Vec(x.begin(), x.end())};
            Projection p;
            p.witness.resize(d.size());
            for (std::size_t k = 0; k < d.size(); ++k)
              p.witness[k] = s.center[k] + d[k] * (s.radius / len);
            p.distance = len - s.radius;
            return p;
          },
          [&](const set::Union& s) {
            Projection best;
            best.distance = std::numeric_limits<double>::infinity();
            for (const auto& m : s.members) {
              auto p = project(x, m, metric);
              if (p.distance < best.distance) best = std::move(p);
            }
            return best;
          },
      },
      A.node().value);
}

ProductDistance dist_product(const StateWindow& w, const SetRule& sets, Norm metric) {
  ProductDistance out;
  const auto& entries = w.entries();
  if (entries.empty()) return out;
  out.window_first = entries.begin()->first;
  out.window_last = entries.rbegin()->first;
  out.value = -1.0;
  for (const auto& [i, x] : entries) {
    const double d = dist(x, sets(i), metric);
    if (d > out.value) {
      out.value = d;
      out.argmax = i;
    }
  }
  return out;
}

UniformBound uniformly_bounded(const SetRule& sets, Index sample_n, Norm metric) {
  if (sample_n < 1) throw std::invalid_argument("uniformly_bounded: sample_n must be >= 1");
  UniformBound out;
  out.C = -1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Index i = 1; i <= sample_n; ++i) {
    const double r = sets(i).radius(metric);
    if (r > out.C) {
      out.C = r;
      out.witness_index = i;
      out.witness_radius = r;
    }
    const double x = static_cast<double>(i);
    sx += x;
    sy += r;
    sxx += x * x;
    sxy += x * r;
  }
  const double n = static_cast<double>(sample_n);
  const double denom = n * sxx - sx * sx;
  out.slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  out.bounded = out.slope <= 1e-9 * (1.0 + out.C);
  return out;
}

MetricValue extended_metric(const StateWindow& x, const StateWindow& y, Index terms, Norm metric) {
  if (terms < 1) throw std::invalid_argument("extended_metric: terms must be >= 1");
  MetricValue out;
  double weight = 1.0;
  for (Index i = 1; i <= terms; ++i) {
    weight *= 0.5;
    const Vec xi = x.at(i);
    const Vec yi = y.at(i);
    require_dim(xi.size(), yi.size());
    const double d = norm(diff(xi, yi), metric);
    out.partial += weight * d / (1.0 + d);
  }
  out.tail_bound = weight;
  return out;
}

}  // namespace netiss
