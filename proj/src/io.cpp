#include "netiss/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "netiss/library.hpp"

namespace netiss {

JsonObject::JsonObject(const json& j, std::string pointer) : j_(j), ptr_(std::move(pointer)) {
  if (!j_.is_object()) throw ConfigError(ptr_, "expected an object");
}

const json& JsonObject::at(const std::string& key) {
  if (!j_.contains(key)) throw ConfigError(pointer(key), "missing required field");
  used_.insert(key);
  return j_.at(key);
}

double JsonObject::number(const std::string& key) {
  const json& v = at(key);
  if (!v.is_number()) throw ConfigError(pointer(key), "expected a number");
  return v.get<double>();
}

double JsonObject::number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

long JsonObject::integer(const std::string& key) {
  const json& v = at(key);
  if (!v.is_number_integer()) throw ConfigError(pointer(key), "expected an integer");
  return v.get<long>();
}

long JsonObject::integer(const std::string& key, long fallback) { return has(key) ? integer(key) : fallback; }

std::string JsonObject::string(const std::string& key) {
  const json& v = at(key);
  if (!v.is_string()) throw ConfigError(pointer(key), "expected a string");
  return v.get<std::string>();
}

std::string JsonObject::string(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

bool JsonObject::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) throw ConfigError(pointer(key), "expected true or false");
  return v.get<bool>();
}

Vec JsonObject::numbers(const std::string& key) {
  const json& v = at(key);
  if (!v.is_array()) throw ConfigError(pointer(key), "expected an array of numbers");
  Vec out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) throw ConfigError(pointer(key) + "/" + std::to_string(k), "expected a number");
    out.push_back(v[k].get<double>());
  }
  return out;
}

Vec JsonObject::numbers(const std::string& key, const Vec& fallback) { return has(key) ? numbers(key) : fallback; }

void JsonObject::finish() const {
  for (const auto& [key, _] : j_.items())
    if (!used_.count(key)) throw ConfigError(ptr_ + "/" + key, "unknown field '" + key + "'");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------- gains

json to_json(const ScalarGain& g) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, gain::Zero>) {
          return {{"kind", "zero"}};
        } else if constexpr (std::is_same_v<T, gain::Linear>) {
          return {{"kind", "linear"}, {"slope", v.slope}};
        } else if constexpr (std::is_same_v<T, gain::Power>) {
          return {{"kind", "power"}, {"coeff", v.coeff}, {"exponent", v.exponent}};
        } else if constexpr (std::is_same_v<T, gain::PiecewiseLinear>) {
          json pts = json::array();
          for (const auto& [r, y] : v.points) pts.push_back({r, y});
          return {{"kind", "piecewise"}, {"points", pts}};
        } else if constexpr (std::is_same_v<T, gain::Max> || std::is_same_v<T, gain::Sum>) {
          json terms = json::array();
          for (const auto& t : v.terms) terms.push_back(to_json(t));
          return {{"kind", std::is_same_v<T, gain::Max> ? "max" : "sum"}, {"terms", terms}};
        } else {
          return {{"kind", "compose"}, {"outer", to_json(v.outer)}, {"inner", to_json(v.inner)}};
        }
      },
      g.node().value);
}

ScalarGain gain_from_json(const json& j, const std::string& ptr) {
  JsonObject o(j, ptr);
  const std::string kind = o.string("kind");
  ScalarGain g;
  try {
    if (kind == "zero") {
      g = ScalarGain::zero();
    } else if (kind == "linear") {
      g = ScalarGain::linear(o.number("slope"));
    } else if (kind == "power") {
      g = ScalarGain::power(o.number("coeff"), o.number("exponent"));
    } else if (kind == "piecewise") {
      const json& pts = o.at("points");
      if (!pts.is_array()) throw ConfigError(o.pointer("points"), "expected an array of [r, g] pairs");
      std::vector<std::pair<double, double>> v;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const json& p = pts[k];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw ConfigError(o.pointer("points") + "/" + std::to_string(k), "expected [r, g]");
        v.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      g = ScalarGain::piecewise(std::move(v));
    } else if (kind == "max" || kind == "sum") {
      const json& terms = o.at("terms");
      if (!terms.is_array()) throw ConfigError(o.pointer("terms"), "expected an array of gains");
      std::vector<ScalarGain> v;
      for (std::size_t k = 0; k < terms.size(); ++k)
        v.push_back(gain_from_json(terms[k], o.pointer("terms") + "/" + std::to_string(k)));
      g = kind == "max" ? ScalarGain::max(std::move(v)) : ScalarGain::sum(std::move(v));
    } else if (kind == "compose") {
      auto outer = gain_from_json(o.at("outer"), o.pointer("outer"));
      auto inner = gain_from_json(o.at("inner"), o.pointer("inner"));
      g = ScalarGain::compose(std::move(outer), std::move(inner));
    } else {
      throw ConfigError(o.pointer("kind"), "unknown gain kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ptr, e.what());
  }
  o.finish();
  return g;
}

// ----------------------------------------------------------------- sets

namespace {

Norm norm_from_string(const std::string& s, const std::string& ptr) {
  if (s == "sup") return Norm::Sup;
  if (s == "euclidean") return Norm::Euclidean;
  throw ConfigError(ptr, "norm must be \"sup\" or \"euclidean\"");
}

const char* to_string(Norm n) { return n == Norm::Sup ? "sup" : "euclidean"; }

}  // namespace

json to_json(const ClosedSet& s) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, set::Point>) {
          return {{"kind", "point"}, {"a", v.a}};
        } else if constexpr (std::is_same_v<T, set::Box>) {
          return {{"kind", "box"}, {"lower", v.lower}, {"upper", v.upper}};
        } else if constexpr (std::is_same_v<T, set::Ball>) {
          return {{"kind", "ball"}, {"center", v.center}, {"radius", v.radius}, {"norm", to_string(v.norm)}};
        } else {
          json m = json::array();
          for (const auto& x : v.members) m.push_back(to_json(x));
          return {{"kind", "union"}, {"members", m}};
        }
      },
      s.node().value);
}

ClosedSet set_from_json(const json& j, const std::string& ptr) {
  JsonObject o(j, ptr);
  const std::string kind = o.string("kind");
  std::optional<ClosedSet> s;
  try {
    if (kind == "point") {
      s = ClosedSet::point(o.numbers("a"));
    } else if (kind == "box") {
      s = ClosedSet::box(o.numbers("lower"), o.numbers("upper"));
    } else if (kind == "ball") {
      s = ClosedSet::ball(o.numbers("center"), o.number("radius"),
                          norm_from_string(o.string("norm", "sup"), o.pointer("norm")));
    } else if (kind == "union") {
      const json& m = o.at("members");
      if (!m.is_array()) throw ConfigError(o.pointer("members"), "expected an array of sets");
      std::vector<ClosedSet> v;
      for (std::size_t k = 0; k < m.size(); ++k)
        v.push_back(set_from_json(m[k], o.pointer("members") + "/" + std::to_string(k)));
      s = ClosedSet::finite_union(std::move(v));
    } else {
      throw ConfigError(o.pointer("kind"), "unknown set kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ptr, e.what());
  }
  o.finish();
  return *s;
}

json to_json(const KLBound& b) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, kl::Exponential>) {
          return {{"kind", "exponential"}, {"C", v.C}, {"rho", v.rho}};
        } else if constexpr (std::is_same_v<T, kl::Product>) {
          return {{"kind", "product"}, {"phi", to_json(v.phi)}, {"decay", v.decay}};
        } else {
          return {{"kind", "lyapunov-chain"},
                  {"lower_inverse", to_json(v.lower_inverse)},
                  {"alpha", to_json(v.alpha)},
                  {"upper", to_json(v.upper)}};
        }
      },
      b.node());
}

KLBound kl_from_json(const json& j, const std::string& ptr) {
  JsonObject o(j, ptr);
  const std::string kind = o.string("kind");
  std::optional<KLBound> b;
  try {
    if (kind == "exponential") {
      b = KLBound::exponential(o.number("C"), o.number("rho"));
    } else if (kind == "product") {
      b = KLBound::product(gain_from_json(o.at("phi"), o.pointer("phi")), o.numbers("decay"));
    } else if (kind == "lyapunov-chain") {
      if (o.has("lower_inverse") == o.has("lower"))
        throw ConfigError(ptr, "give exactly one of \"lower\" and \"lower_inverse\"");
      const ScalarGain lower = o.has("lower") ? gain_from_json(o.at("lower"), o.pointer("lower"))
                                              : inverse(gain_from_json(o.at("lower_inverse"), o.pointer("lower_inverse")));
      b = KLBound::lyapunov_chain(lower, gain_from_json(o.at("alpha"), o.pointer("alpha")),
                                  gain_from_json(o.at("upper"), o.pointer("upper")));
    } else {
      throw ConfigError(o.pointer("kind"), "unknown KL bound kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ptr, e.what());
  }
  o.finish();
  return *b;
}

// -------------------------------------------------------------- reports

json to_json(const Witness& w) {
  json state = json::array();
  for (const auto& [i, x] : w.state) state.push_back({{"index", i}, {"value", x}});
  return {{"index", w.index}, {"step", w.step},  {"state", state},      {"input", w.input},
          {"lhs", w.lhs},     {"rhs", w.rhs},    {"residual", w.residual}};
}

json to_json(const CertificateReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e = {{"name", c.name}, {"passed", c.passed}, {"worst_residual", c.worst_residual}, {"checked", c.checked}};
    if (c.witness) e["witness"] = to_json(*c.witness);
    checks.push_back(std::move(e));
  }
  return {{"title", r.title},
          {"verdict", r.passed ? "pass" : "fail"},
          {"sampled", true},
          {"tolerance", {{"abs", r.tolerance.abs}, {"rel", r.tolerance.rel}}},
          {"grid", r.grid},
          {"notes", r.notes},
          {"checks", checks}};
}

json to_json(const GrowthProfile& p) {
  json first = p.first_exceeding ? json(*p.first_exceeding) : json(nullptr);
  return {{"radii", p.radii},
          {"window", {p.indices.empty() ? 0 : p.indices.front(), p.indices.empty() ? 0 : p.indices.back()}},
          {"sup", p.sup},
          {"sup_index", p.sup_index},
          {"divergent", p.divergent},
          {"first_exceeding", first}};
}

json to_json(const ConsistencyResult& c) {
  json m = c.first_mismatch ? json{{"step", c.first_mismatch->first}, {"index", c.first_mismatch->second}}
                            : json(nullptr);
  return {{"passed", c.passed}, {"max_deviation", c.max_deviation}, {"compared", c.compared}, {"first_mismatch", m}};
}

namespace {

json storage_to_json(const StorageFunction& f) {
  json j;
  switch (f.kind) {
    case StorageFunction::Kind::WeightedDistance:
      j = {{"kind", "weighted-distance"}, {"weight", f.weight}};
      break;
    case StorageFunction::Kind::DistancePower:
      j = {{"kind", "distance-power"}, {"weight", f.weight}, {"exponent", f.exponent}};
      break;
    case StorageFunction::Kind::Quadratic:
      j = {{"kind", "quadratic"}, {"P", f.P}};
      break;
  }
  j["lower"] = to_json(f.lower);
  j["upper"] = to_json(f.upper);
  return j;
}

StorageFunction storage_from_json(const json& j, const std::string& ptr) {
  JsonObject o(j, ptr);
  StorageFunction f;
  const std::string kind = o.string("kind");
  if (kind == "weighted-distance") {
    f.kind = StorageFunction::Kind::WeightedDistance;
    f.weight = o.number("weight", 1.0);
  } else if (kind == "distance-power") {
    f.kind = StorageFunction::Kind::DistancePower;
    f.weight = o.number("weight", 1.0);
    f.exponent = o.number("exponent");
  } else if (kind == "quadratic") {
    f.kind = StorageFunction::Kind::Quadratic;
    f.P = o.numbers("P");
  } else {
    throw ConfigError(o.pointer("kind"), "unknown storage kind '" + kind + "'");
  }
  if (o.has("lower")) f.lower = gain_from_json(o.at("lower"), o.pointer("lower"));
  if (o.has("upper")) f.upper = gain_from_json(o.at("upper"), o.pointer("upper"));
  o.finish();
  return f;
}

}  // namespace

json to_json(const Certificate& c) {
  json per_class = json::object();
  for (const auto& [id, f] : c.family.per_class) per_class[id] = storage_to_json(f);
  json internal = json::array();
  for (const auto& [key, g] : c.gains.internal)
    internal.push_back({{"class", key.first}, {"offset", key.second}, {"gain", to_json(g)}});
  json input = json::object();
  for (const auto& [id, g] : c.gains.input) input[id] = to_json(g);
  json gains = {{"internal", internal},
                {"input", input},
                {"alpha", to_json(c.gains.alpha)},
                {"gamma_u_bar", to_json(c.gains.gamma_u_bar)}};
  if (c.gains.uniform_internal) gains["uniform_internal"] = to_json(*c.gains.uniform_internal);
  return {{"M", c.M},
          {"storage", {{"per_class", per_class}, {"lower", to_json(c.family.lower)}, {"upper", to_json(c.family.upper)}}},
          {"gains", gains}};
}

Certificate certificate_from_json(const json& j, const std::string& ptr) {
  JsonObject o(j, ptr);
  Certificate c;
  c.M = o.integer("M", 1);
  if (c.M < 1) throw ConfigError(o.pointer("M"), "M must be >= 1");

  JsonObject st(o.at("storage"), o.pointer("storage"));
  const json& pc = st.at("per_class");
  if (!pc.is_object()) throw ConfigError(st.pointer("per_class"), "expected an object keyed by class id");
  for (const auto& [id, f] : pc.items())
    c.family.per_class[id] = storage_from_json(f, st.pointer("per_class") + "/" + id);
  if (st.has("lower")) c.family.lower = gain_from_json(st.at("lower"), st.pointer("lower"));
  if (st.has("upper")) c.family.upper = gain_from_json(st.at("upper"), st.pointer("upper"));
  st.finish();

  JsonObject g(o.at("gains"), o.pointer("gains"));
  if (g.has("internal")) {
    const json& arr = g.at("internal");
    if (!arr.is_array()) throw ConfigError(g.pointer("internal"), "expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      JsonObject e(arr[k], g.pointer("internal") + "/" + std::to_string(k));
      const std::string cls = e.string("class");
      const long off = e.integer("offset");
      c.gains.internal[{cls, off}] = gain_from_json(e.at("gain"), e.pointer("gain"));
      e.finish();
    }
  }
  if (g.has("uniform_internal"))
    c.gains.uniform_internal = gain_from_json(g.at("uniform_internal"), g.pointer("uniform_internal"));
  if (g.has("input")) {
    const json& in = g.at("input");
    if (!in.is_object()) throw ConfigError(g.pointer("input"), "expected an object keyed by class id");
    for (const auto& [id, v] : in.items()) c.gains.input[id] = gain_from_json(v, g.pointer("input") + "/" + id);
  }
  c.gains.alpha = gain_from_json(g.at("alpha"), g.pointer("alpha"));
  c.gains.gamma_u_bar = g.has("gamma_u_bar") ? gain_from_json(g.at("gamma_u_bar"), g.pointer("gamma_u_bar"))
                                             : ScalarGain::zero();
  g.finish();
  o.finish();
  return c;
}

// -------------------------------------------------------------- networks

namespace {

Dynamics dynamics_from_json(const json& j, const std::string& ptr, std::size_t n, std::size_t p,
                            std::optional<std::size_t>& arity) {
  JsonObject o(j, ptr);
  const std::string kind = o.string("kind");
  Dynamics f;
  if (kind == "affine") {
    AffineDynamics a;
    a.n = n;
    a.p = p;
    a.A = o.numbers("A");
    a.B = o.numbers("B", Vec(n * p, 0.0));
    a.c = o.numbers("c", {});
    if (o.has("D")) {
      const json& D = o.at("D");
      if (!D.is_array()) throw ConfigError(o.pointer("D"), "expected one array per neighbor slot");
      for (std::size_t k = 0; k < D.size(); ++k) {
        const std::string pk = o.pointer("D") + "/" + std::to_string(k);
        if (!D[k].is_array()) throw ConfigError(pk, "expected an array of numbers");
        Vec blk;
        for (const auto& x : D[k]) {
          if (!x.is_number()) throw ConfigError(pk, "expected numbers");
          blk.push_back(x.get<double>());
        }
        if (blk.size() % n != 0) throw ConfigError(pk, "block size must be a multiple of state_dim");
        a.neighbor_dims.push_back(blk.size() / n);
        a.D.push_back(std::move(blk));
      }
    }
    arity = a.D.size();
    try {
      f = a.as_dynamics();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(ptr, e.what());
    }
  } else if (kind == "example1") {
    if (n != 1) throw ConfigError(ptr, "example1 dynamics are scalar");
    f = example1_dynamics();
    arity = 0;
  } else if (kind == "zero") {
    f = [](const StepArgs&, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  } else {
    throw ConfigError(o.pointer("kind"), "unknown dynamics kind '" + kind + "'");
  }
  o.finish();
  return f;
}

SetRule target_rule_from_json(const json& j, const std::string& ptr, std::size_t n) {
  if (j.is_object() && j.value("kind", "") == "index-box") {
    JsonObject o(j, ptr);
    o.string("kind");
    const double s = o.number("scale", 1.0);
    if (!(s >= 0)) throw ConfigError(o.pointer("scale"), "scale must be nonnegative");
    o.finish();
    return [s, n](Index i) {
      const double r = s * static_cast<double>(i);
      return ClosedSet::box(Vec(n, -r), Vec(n, r));
    };
  }
  const ClosedSet A = set_from_json(j, ptr);
  if (A.dim() != n) throw ConfigError(ptr, "target set dimension differs from state_dim");
  return [A](Index) { return A; };
}

Index parse_index_key(const std::string& key, const std::string& ptr) {
  Index v = 0;
  const auto res = std::from_chars(key.data(), key.data() + key.size(), v);
  if (res.ec != std::errc() || res.ptr != key.data() + key.size())
    throw ConfigError(ptr, "key '" + key + "' is not an integer");
  return v;
}

}  // namespace

NetworkSpec network_from_json(const json& j, const std::string& ptr) {
  JsonObject o(j, ptr);
  NetworkSpec spec;
  spec.name = o.string("name", "network");

  const json& classes = o.at("classes");
  if (!classes.is_array() || classes.empty()) throw ConfigError(o.pointer("classes"), "expected a nonempty array");
  std::map<std::string, std::size_t> slot_of;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const std::string pk = o.pointer("classes") + "/" + std::to_string(k);
    JsonObject c(classes[k], pk);
    SubsystemClass cls;
    cls.id = c.string("id");
    if (slot_of.count(cls.id)) throw ConfigError(c.pointer("id"), "duplicate class id '" + cls.id + "'");
    const long n = c.integer("state_dim", 1), p = c.integer("input_dim", 1);
    if (n < 1 || p < 1) throw ConfigError(pk, "state_dim and input_dim must be >= 1");
    cls.state_dim = static_cast<std::size_t>(n);
    cls.input_dim = static_cast<std::size_t>(p);
    cls.dynamics = dynamics_from_json(c.at("dynamics"), c.pointer("dynamics"), cls.state_dim, cls.input_dim,
                                      cls.neighbor_arity);
    cls.target_set = c.has("target_set") ? target_rule_from_json(c.at("target_set"), c.pointer("target_set"), cls.state_dim)
                                         : target_rule_from_json(json{{"kind", "point"}, {"a", Vec(cls.state_dim, 0.0)}},
                                                                 c.pointer("target_set"), cls.state_dim);
    cls.norm = norm_from_string(c.string("norm", "sup"), c.pointer("norm"));
    c.finish();
    slot_of[cls.id] = k;
    spec.classes.push_back(std::move(cls));
  }
  auto slot = [&](const std::string& id, const std::string& p) {
    auto it = slot_of.find(id);
    if (it == slot_of.end()) throw ConfigError(p, "undefined class '" + id + "'");
    return it->second;
  };

  {
    JsonObject a(o.at("assign"), o.pointer("assign"));
    const std::string kind = a.string("kind");
    if (kind == "constant") {
      const std::size_t s = slot(a.string("class"), a.pointer("class"));
      spec.assign = [s](Index) { return s; };
    } else if (kind == "residue") {
      const long m = a.integer("modulus");
      if (m < 1) throw ConfigError(a.pointer("modulus"), "modulus must be >= 1");
      const json& map = a.at("map");
      if (!map.is_object()) throw ConfigError(a.pointer("map"), "expected an object residue -> class");
      std::vector<std::size_t> by_res(static_cast<std::size_t>(m), spec.classes.size());
      for (const auto& [key, v] : map.items()) {
        const std::string pk = a.pointer("map") + "/" + key;
        const Index r = parse_index_key(key, pk);
        if (r < 0 || r >= m) throw ConfigError(pk, "residue out of range");
        if (!v.is_string()) throw ConfigError(pk, "expected a class id");
        by_res[static_cast<std::size_t>(r)] = slot(v.get<std::string>(), pk);
      }
      std::map<Index, std::size_t> overrides;
      if (a.has("overrides")) {
        const json& ov = a.at("overrides");
        if (!ov.is_object()) throw ConfigError(a.pointer("overrides"), "expected an object index -> class");
        for (const auto& [key, v] : ov.items()) {
          const std::string pk = a.pointer("overrides") + "/" + key;
          if (!v.is_string()) throw ConfigError(pk, "expected a class id");
          overrides[parse_index_key(key, pk)] = slot(v.get<std::string>(), pk);
        }
      }
      // Unmapped residues yield an out-of-range slot, reported by class_of as a SpecError.
      spec.assign = [m, by_res, overrides](Index i) {
        if (auto it = overrides.find(i); it != overrides.end()) return it->second;
        return by_res[static_cast<std::size_t>(((i % m) + m) % m)];
      };
    } else {
      throw ConfigError(a.pointer("kind"), "unknown assign kind '" + kind + "'");
    }
    a.finish();
  }

  {
    JsonObject nb(o.at("neighbors"), o.pointer("neighbors"));
    const std::string kind = nb.string("kind");
    if (kind == "none") {
      spec.neighbors = [](Index) { return std::vector<Index>{}; };
    } else if (kind == "offset-list") {
      auto parse_offsets = [](const json& arr, const std::string& p) {
        if (!arr.is_array()) throw ConfigError(p, "expected an array of integer offsets");
        std::vector<Index> v;
        for (const auto& x : arr) {
          if (!x.is_number_integer()) throw ConfigError(p, "expected integer offsets");
          v.push_back(x.get<Index>());
        }
        return v;
      };
      std::vector<std::vector<Index>> by_slot(spec.classes.size());
      if (nb.has("offsets") == nb.has("by_class"))
        throw ConfigError(nb.pointer(), "give exactly one of \"offsets\" and \"by_class\"");
      if (nb.has("offsets")) {
        const auto v = parse_offsets(nb.at("offsets"), nb.pointer("offsets"));
        by_slot.assign(spec.classes.size(), v);
      } else {
        const json& bc = nb.at("by_class");
        if (!bc.is_object()) throw ConfigError(nb.pointer("by_class"), "expected an object class -> offsets");
        for (const auto& [id, v] : bc.items())
          by_slot[slot(id, nb.pointer("by_class") + "/" + id)] = parse_offsets(v, nb.pointer("by_class") + "/" + id);
      }
      const bool clip = nb.boolean("clip", false);
      auto assign = spec.assign;
      const std::size_t nclasses = spec.classes.size();
      spec.neighbors = [by_slot, clip, assign, nclasses](Index i) {
        const std::size_t s = assign(i);
        std::vector<Index> out;
        if (s >= nclasses) return out;
        for (Index off : by_slot[s]) {
          const Index j = i + off;
          if (clip && j < 1) continue;
          out.push_back(j);
        }
        return out;
      };
    } else {
      throw ConfigError(nb.pointer("kind"), "unknown neighbors kind '" + kind + "'");
    }
    nb.finish();
  }
  if (o.has("max_out_degree")) spec.max_out_degree = static_cast<std::size_t>(o.integer("max_out_degree"));
  if (o.has("max_in_degree")) spec.max_in_degree = static_cast<std::size_t>(o.integer("max_in_degree"));
  o.finish();
  return spec;
}

// ------------------------------------------------------------------- CSV

void write_csv_header(std::ostream& os) { os << "k,index,component,value\n"; }

void write_state_rows(std::ostream& os, long k, const Layout& layout, std::span<const double> values,
                      Index index_stride) {
  const Index stride = std::max<Index>(1, index_stride);
  std::string line;
  for (std::size_t p = 0; p < layout.size(); ++p) {
    const Index i = layout.indices[p];
    if ((i - 1) % stride != 0) continue;
    for (std::size_t c = layout.offsets[p]; c < layout.offsets[p + 1]; ++c) {
      line.clear();
      line += std::to_string(k);
      line += ',';
      line += std::to_string(i);
      line += ',';
      line += std::to_string(c - layout.offsets[p]);
      line += ',';
      line += format_double(values[c]);
      line += '\n';
      os << line;
    }
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  write_csv_header(os);
  for (long k = 0; k <= t.horizon; ++k) {
    const auto& snap = t.states[static_cast<std::size_t>(k)];
    for (Index i : t.observed) {
      const auto x = snap.state_of(i);
      for (std::size_t c = 0; c < x.size(); ++c)
        os << k << ',' << i << ',' << c << ',' << format_double(x[c]) << '\n';
    }
  }
}

void write_interface_csv(std::ostream& os, const InterfaceSignal& s) {
  write_csv_header(os);
  for (std::size_t k = 0; k < s.values.size(); ++k)
    write_state_rows(os, static_cast<long>(k), *s.layout, s.values[k]);
}

void write_growth_csv(std::ostream& os, const GrowthProfile& p) {
  os << "index,radius,gain\n";
  for (std::size_t t = 0; t < p.indices.size(); ++t)
    for (std::size_t r = 0; r < p.radii.size(); ++r)
      os << p.indices[t] << ',' << format_double(p.radii[r]) << ',' << format_double(p.gain[t][r]) << '\n';
}

void write_witness_csv(std::ostream& os, const CertificateReport& r) {
  os << "check,index,step,component,value\n";
  for (const auto& c : r.checks) {
    if (!c.witness) continue;
    std::string name = c.name;
    for (char& ch : name)
      if (ch == ',' || ch == '"') ch = ';';
    for (const auto& [i, x] : c.witness->state)
      for (std::size_t q = 0; q < x.size(); ++q)
        os << '"' << name << "\"," << i << ',' << c.witness->step << ',' << q << ',' << format_double(x[q]) << '\n';
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
}

}  // namespace netiss
