#include "netiss/cli.hpp"

#include <algorithm>
#include <fstream>

#include "netiss/io.hpp"
#include "netiss/library.hpp"
#include "netiss/traffic.hpp"
#include "netiss/truncate.hpp"

namespace netiss {

namespace fs = std::filesystem;

std::vector<std::string> command_names() { return {"simulate", "certify", "wellposed", "truncate", "traffic-demo"}; }

namespace {

std::vector<Index> index_list(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array of indices");
  std::vector<Index> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer() || j[k].get<Index>() < 1)
      throw ConfigError(ptr + "/" + std::to_string(k), "expected an integer >= 1");
    out.push_back(j[k].get<Index>());
  }
  return out;
}

long nonnegative(JsonObject& o, const std::string& key, long fallback) {
  const long v = o.integer(key, fallback);
  if (v < 0) throw ConfigError(o.pointer(key), "must be >= 0");
  return v;
}

long positive(JsonObject& o, const std::string& key, long fallback) {
  const long v = o.integer(key, fallback);
  if (v < 1) throw ConfigError(o.pointer(key), "must be >= 1");
  return v;
}

InitialConfig parse_initial(const json& j, const std::string& ptr, InitialConfig c) {
  JsonObject o(j, ptr);
  c.kind = o.string("kind", c.kind);
  if (c.kind == "uniform") {
    c.low = o.number("low", c.low);
    c.high = o.number("high", c.high);
    if (!(c.low <= c.high)) throw ConfigError(ptr, "low must not exceed high");
    c.dim = static_cast<std::size_t>(positive(o, "dim", static_cast<long>(c.dim)));
  } else if (c.kind == "constant") {
    c.value = o.numbers("value", c.value);
    if (c.value.empty()) throw ConfigError(o.pointer("value"), "must be nonempty");
  } else {
    throw ConfigError(o.pointer("kind"), "expected \"uniform\" or \"constant\"");
  }
  o.finish();
  return c;
}

json initial_json(const InitialConfig& c) {
  if (c.kind == "constant") return {{"kind", "constant"}, {"value", c.value}};
  return {{"kind", "uniform"}, {"low", c.low}, {"high", c.high}, {"dim", c.dim}};
}

InputConfig parse_input(const json& j, const std::string& ptr, InputConfig c) {
  JsonObject o(j, ptr);
  c.value = o.number("value", c.value);
  c.dim = static_cast<std::size_t>(positive(o, "dim", static_cast<long>(c.dim)));
  o.finish();
  return c;
}

json input_json(const InputConfig& c) { return {{"value", c.value}, {"dim", c.dim}}; }

StateWindow make_initial(const InitialConfig& c, std::uint64_t seed) {
  if (c.kind == "constant") return StateWindow::constant(c.value);
  return StateWindow::uniform(seed, c.low, c.high, c.dim);
}

const char* form_name(KBoundEstimate::Form f) {
  switch (f) {
    case KBoundEstimate::Form::StateNorm: return "state-norm";
    case KBoundEstimate::Form::SetDistance1: return "set-distance-1";
    case KBoundEstimate::Form::SetDistance2: return "set-distance-2";
  }
  return "state-norm";
}

KBoundEstimate parse_estimate(const json& j, const std::string& ptr) {
  JsonObject o(j, ptr);
  KBoundEstimate e;
  const std::string form = o.string("form");
  if (form == "state-norm") {
    e.form = KBoundEstimate::Form::StateNorm;
    e.C = o.number("C", 0.0);
    e.kappa = gain_from_json(o.at("kappa"), o.pointer("kappa"));
  } else if (form == "set-distance-1" || form == "set-distance-2") {
    e.form = form == "set-distance-1" ? KBoundEstimate::Form::SetDistance1 : KBoundEstimate::Form::SetDistance2;
    e.kappa1 = gain_from_json(o.at("kappa1"), o.pointer("kappa1"));
    e.kappa2 = gain_from_json(o.at("kappa2"), o.pointer("kappa2"));
  } else {
    throw ConfigError(o.pointer("form"), "expected state-norm, set-distance-1 or set-distance-2");
  }
  o.finish();
  return e;
}

json estimate_json(const KBoundEstimate& e) {
  if (e.form == KBoundEstimate::Form::StateNorm)
    return {{"form", form_name(e.form)}, {"C", e.C}, {"kappa", to_json(e.kappa)}};
  return {{"form", form_name(e.form)}, {"kappa1", to_json(e.kappa1)}, {"kappa2", to_json(e.kappa2)}};
}

json resolve_network(const json& j, const std::string& ptr, const fs::path& base) {
  if (j.is_string()) return resolve_network(json{{"builtin", j.get<std::string>()}}, ptr, base);
  JsonObject o(j, ptr);
  const int given = o.has("builtin") + o.has("path") + o.has("spec");
  if (given != 1) throw ConfigError(ptr, "give exactly one of \"builtin\", \"path\" and \"spec\"");
  json out;
  if (o.has("builtin")) {
    const std::string name = o.string("builtin");
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw ConfigError(o.pointer("builtin"), "unknown built-in network '" + name + "'");
    json opts = o.has("options") ? o.at("options") : json::object();
    if (!opts.is_object()) throw ConfigError(o.pointer("options"), "expected an object");
    if (name == "traffic") opts = to_json(traffic_params_from_json(opts));
    out = {{"builtin", name}, {"options", opts}};
  } else if (o.has("path")) {
    const fs::path p = base / o.string("path");
    out = {{"spec", read_json_file(p)}};
  } else {
    out = {{"spec", o.at("spec")}};
  }
  o.finish();
  // Validate the inline document now so schema errors surface at parse time.
  if (out.contains("spec")) network_from_json(out["spec"], ptr + "/spec");
  return out;
}

struct Loaded {
  NetworkSpec spec;
  std::optional<Certificate> certificate;
  std::optional<TrafficParams> traffic;
};

Loaded load_network(const RunConfig& c) {
  Loaded l;
  if (c.network.contains("builtin")) {
    const std::string name = c.network["builtin"];
    auto b = make_builtin(name, c.network["options"]);
    l.spec = std::move(b.spec);
    l.certificate = std::move(b.certificate);
    if (name == "traffic") l.traffic = traffic_params_from_json(c.network["options"]);
  } else {
    l.spec = network_from_json(c.network["spec"], "/network/spec");
  }
  if (c.certificate) l.certificate = certificate_from_json(*c.certificate, "/certificate");
  return l;
}

template <class Fn>
void write_stream(const fs::path& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  fn(f);
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

json verdict(bool passed) { return passed ? "pass" : "fail"; }

// --------------------------------------------------------------- commands

RunResult run_simulate(const RunConfig& c, const Loaded& net, std::ostream& log) {
  const auto& s = c.simulate;
  const auto xi = make_initial(s.initial, c.seed);
  const auto u = InputSignal::constant(s.input.value, s.input.dim);
  const auto traj = simulate(net.spec, xi, u, s.horizon, s.observed, SimOptions{c.exec});
  log << "simulated " << traj.observed.size() << " observed indices for " << s.horizon << " steps\n";

  json dist = json::array();
  const SetRule sets = [&net](Index i) { return net.spec.target_set(i); };
  for (long k = 0; k <= s.horizon; ++k) dist.push_back(dist_product(traj.observed_window(k), sets).value);
  if (c.out) write_stream(*c.out / "trajectories.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); });
  return {0, {{"title", "simulate"},
              {"verdict", "pass"},
              {"horizon", s.horizon},
              {"observed", traj.observed},
              {"input_sup_norm", traj.input_sup_norm},
              {"distance_to_target", dist}}};
}

RunResult run_certify(const RunConfig& c, const Loaded& net, std::ostream& log) {
  if (!net.certificate) throw ConfigError("/certificate", "certify needs a certificate for this network");
  const Certificate& cert = *net.certificate;
  const auto& cc = c.certify;
  GridPlan grid = cc.grid;
  grid.seed = c.seed;
  RepresentativeOptions reps = cc.representatives;
  reps.seed = c.seed;

  CertificateReport rep;
  rep.title = "certify " + net.spec.name;
  rep.tolerance = c.tolerance;
  rep.absorb(check_storage_bounds(cert.family, net.spec, grid, reps, c.tolerance), "storage: ");
  rep.absorb(small_gain_check(cert.gains, cc.gain_radius, cc.gain_grid, c.tolerance), "small-gain: ");
  rep.absorb(check_M_step_decrease(net.spec, cert.family, cert.gains, cert.M, grid, cc.inputs, reps, c.tolerance),
             "decrease: ");
  if (net.traffic)
    rep.absorb(check_traffic_linear_bound(net.spec, *net.traffic, grid, cc.inputs, c.tolerance), "traffic-bound: ");
  rep.grid = {{"radius", grid.radius}, {"points", grid.points}, {"seed", grid.seed}, {"inputs", cc.inputs},
              {"representative_window", reps.window}, {"M", cert.M}};
  rep.finalize();
  for (const auto& chk : rep.checks)
    log << (chk.passed ? "  ok    " : "  FAIL  ") << chk.name << "  (worst residual "
        << format_double(chk.worst_residual) << ")\n";

  if (c.out) write_stream(*c.out / "witnesses.csv", [&](std::ostream& os) { write_witness_csv(os, rep); });
  json j = to_json(rep);
  j["certificate"] = to_json(cert);
  return {rep.passed ? 0 : 2, j};
}

RunResult run_wellposed(const RunConfig& c, const Loaded& net, std::ostream& log) {
  SamplePlan plan = c.wellposed.plan;
  plan.seed = c.seed;
  json j = {{"title", "wellposed " + net.spec.name}};
  bool passed = true;
  if (c.wellposed.estimate) {
    auto rep = check_growth_bound(net.spec, *c.wellposed.estimate, plan, c.tolerance);
    passed = passed && rep.passed;
    j["growth_bound"] = to_json(rep);
    log << "growth bound: " << (rep.passed ? "pass" : "fail") << "\n";
  }
  const auto prof = falsify_uniformity(net.spec, plan);
  passed = passed && !prof.divergent;
  j["uniformity"] = to_json(prof);
  log << "uniformity: " << (prof.divergent ? "divergent" : "bounded") << " on [" << plan.first << ", " << plan.last
      << "]\n";
  if (c.out) write_stream(*c.out / "growth.csv", [&](std::ostream& os) { write_growth_csv(os, prof); });
  j["verdict"] = verdict(passed);
  j["sampled"] = true;
  return {passed ? 0 : 2, j};
}

RunResult run_truncate(const RunConfig& c, const Loaded& net, std::ostream& log) {
  const auto& t = c.truncate;
  const auto xi = make_initial(t.initial, c.seed);
  const auto u = InputSignal::constant(t.input.value, t.input.dim);
  const SimOptions opt{c.exec};
  bool passed = true;
  json runs = json::array();
  for (Index n : t.sizes) {
    const auto cons = consistency_check(net.spec, n, xi, u, t.horizon, opt);
    const auto tn = build_truncation(net.spec, n);
    const auto sig = record_interface_signal(net.spec, n, xi, u, t.horizon, opt);
    const auto traj = simulate_truncated(tn, xi, u, t.horizon, sig, opt);
    json r = {{"n", n}, {"interface", tn.interface}, {"consistency", to_json(cons)}};
    passed = passed && cons.passed;
    if (t.check_decay && net.certificate) {
      const auto& g = net.certificate->gains;
      auto rep = check_truncated_decay(tn, net.certificate->family, g.alpha, t.omega_bar, g.gamma_u_bar, traj,
                                       c.tolerance);
      passed = passed && rep.passed;
      r["decay"] = to_json(rep);
    }
    log << "n = " << n << ": consistency " << (cons.passed ? "bitwise" : "MISMATCH") << "\n";
    if (c.out) {
      const fs::path dir = *c.out / ("n" + std::to_string(n));
      fs::create_directories(dir);
      write_stream(dir / "trajectories.csv", [&](std::ostream& os) {
        write_csv_header(os);
        for (long k = 0; k <= t.horizon; ++k)
          write_state_rows(os, k, *traj.layout, traj.states[static_cast<std::size_t>(k)]);
      });
      write_stream(dir / "interface.csv", [&](std::ostream& os) { write_interface_csv(os, sig); });
    }
    runs.push_back(std::move(r));
  }
  return {passed ? 0 : 2, {{"title", "truncate " + net.spec.name}, {"verdict", verdict(passed)}, {"runs", runs}}};
}

RunResult run_traffic_demo(const RunConfig& c, const Loaded& net, std::ostream& log) {
  if (!net.traffic) throw ConfigError("/network", "traffic-demo needs the built-in traffic network");
  const auto& d = c.traffic_demo;
  ScalingOptions opt;
  opt.exec = c.exec;
  opt.initial_low = d.initial_low;
  opt.initial_high = d.initial_high;
  opt.input = d.input;
  opt.out_dir = c.out;
  opt.csv_time_stride = d.csv_time_stride;
  opt.csv_index_stride = d.csv_index_stride;
  opt.tol = c.tolerance;
  const auto rep = run_scaling_experiment(*net.traffic, d.sizes, d.horizon, c.seed, opt);
  json runs = json::array();
  for (const auto& r : rep.runs) {
    log << "n = " << r.n << ": V " << format_double(r.v_initial) << " -> " << format_double(r.v_final)
        << ", decay check " << (r.decay.passed ? "pass" : "fail") << "\n";
    runs.push_back(r.summary());
  }
  const auto tc = traffic_certificate(*net.traffic);
  return {rep.passed() ? 0 : 2,
          {{"title", "traffic-demo"},
           {"verdict", verdict(rep.passed())},
           {"alpha", tc.alpha},
           {"gamma_u_bar", tc.gamma_u_bar},
           {"runs", runs}}};
}

}  // namespace

RunConfig parse_config(const std::string& command, const json& doc, const FlagOverrides& flags,
                       const fs::path& base_dir) {
  const auto cmds = command_names();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
    throw std::invalid_argument("unknown command '" + command + "'");
  if (flags.builtin && flags.network) throw std::invalid_argument("--builtin and --network are mutually exclusive");

  RunConfig c;
  c.command = command;
  const json root = doc.is_null() ? json::object() : doc;
  JsonObject o(root, "");
  if (o.has("command") && o.string("command") != command)
    throw ConfigError("/command", "config is for '" + doc["command"].get<std::string>() + "', not '" + command + "'");

  if (flags.builtin) {
    const json j = json::object({{"builtin", *flags.builtin}});
    c.network = resolve_network(j, "/network", base_dir);
    if (o.has("network")) o.at("network");  // overridden by the flag
  } else if (flags.network) {
    c.network = {{"spec", read_json_file(*flags.network)}};
    network_from_json(c.network["spec"], "/network/spec");
    if (o.has("network")) o.at("network");
  } else if (o.has("network")) {
    c.network = resolve_network(o.at("network"), "/network", base_dir);
  } else if (command == "traffic-demo") {
    c.network = resolve_network("traffic", "/network", base_dir);
  } else {
    throw ConfigError("/network", "missing required field (or pass --builtin / --network)");
  }

  if (o.has("certificate")) {
    const json& cj = o.at("certificate");
    json resolved = cj;
    if (cj.is_object() && cj.size() == 1 && cj.contains("path"))
      resolved = read_json_file(base_dir / cj["path"].get<std::string>());
    certificate_from_json(resolved, "/certificate");
    c.certificate = resolved;
  }

  if (o.has("seed")) {
    const json& s = o.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      throw ConfigError("/seed", "expected a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (o.has("tolerance")) {
    JsonObject t(o.at("tolerance"), "/tolerance");
    c.tolerance.abs = t.number("abs", c.tolerance.abs);
    c.tolerance.rel = t.number("rel", c.tolerance.rel);
    t.finish();
  }
  if (o.has("exec")) {
    const std::string e = o.string("exec");
    if (e != "serial" && e != "parallel") throw ConfigError("/exec", "expected \"serial\" or \"parallel\"");
    c.exec = e == "serial" ? Exec::Serial : Exec::Parallel;
  }
  if (o.has("out")) c.out = base_dir / o.string("out");

  if (o.has("simulate")) {
    JsonObject s(o.at("simulate"), "/simulate");
    c.simulate.horizon = nonnegative(s, "horizon", c.simulate.horizon);
    if (s.has("observed")) c.simulate.observed = index_list(s.at("observed"), s.pointer("observed"));
    if (s.has("initial")) c.simulate.initial = parse_initial(s.at("initial"), s.pointer("initial"), c.simulate.initial);
    if (s.has("input")) c.simulate.input = parse_input(s.at("input"), s.pointer("input"), c.simulate.input);
    s.finish();
  }
  if (o.has("certify")) {
    JsonObject s(o.at("certify"), "/certify");
    auto& cc = c.certify;
    if (s.has("grid")) {
      JsonObject g(s.at("grid"), s.pointer("grid"));
      cc.grid.radius = g.number("radius", cc.grid.radius);
      cc.grid.points = static_cast<std::size_t>(positive(g, "points", static_cast<long>(cc.grid.points)));
      g.finish();
    }
    cc.inputs = s.numbers("inputs", cc.inputs);
    if (s.has("representatives")) {
      JsonObject r(s.at("representatives"), s.pointer("representatives"));
      cc.representatives.window = positive(r, "window", cc.representatives.window);
      cc.representatives.extra_random =
          static_cast<std::size_t>(nonnegative(r, "extra_random", static_cast<long>(cc.representatives.extra_random)));
      r.finish();
    }
    cc.gain_radius = s.number("gain_radius", cc.gain_radius);
    cc.gain_grid = static_cast<int>(positive(s, "gain_grid", cc.gain_grid));
    s.finish();
  }
  if (o.has("wellposed")) {
    JsonObject s(o.at("wellposed"), "/wellposed");
    auto& p = c.wellposed.plan;
    p.first = positive(s, "first", p.first);
    p.last = positive(s, "last", p.last);
    if (p.last < p.first) throw ConfigError(s.pointer("last"), "must be >= first");
    p.state_radius = s.number("state_radius", p.state_radius);
    p.input_radius = s.number("input_radius", p.input_radius);
    p.samples = static_cast<std::size_t>(nonnegative(s, "samples", static_cast<long>(p.samples)));
    p.M = positive(s, "M", p.M);
    p.radii = s.numbers("radii", p.radii);
    p.cap = s.number("cap", p.cap);
    if (s.has("estimate")) c.wellposed.estimate = parse_estimate(s.at("estimate"), s.pointer("estimate"));
    s.finish();
  }
  if (o.has("truncate")) {
    JsonObject s(o.at("truncate"), "/truncate");
    auto& t = c.truncate;
    if (s.has("sizes")) t.sizes = index_list(s.at("sizes"), s.pointer("sizes"));
    t.horizon = nonnegative(s, "horizon", t.horizon);
    if (s.has("initial")) t.initial = parse_initial(s.at("initial"), s.pointer("initial"), t.initial);
    if (s.has("input")) t.input = parse_input(s.at("input"), s.pointer("input"), t.input);
    if (s.has("omega_bar")) t.omega_bar = gain_from_json(s.at("omega_bar"), s.pointer("omega_bar"));
    t.check_decay = s.boolean("check_decay", t.check_decay);
    s.finish();
  }
  if (o.has("traffic_demo")) {
    JsonObject s(o.at("traffic_demo"), "/traffic_demo");
    auto& d = c.traffic_demo;
    if (s.has("sizes")) d.sizes = index_list(s.at("sizes"), s.pointer("sizes"));
    d.horizon = nonnegative(s, "horizon", d.horizon);
    d.csv_time_stride = positive(s, "csv_time_stride", d.csv_time_stride);
    d.csv_index_stride = positive(s, "csv_index_stride", d.csv_index_stride);
    d.initial_low = s.number("initial_low", d.initial_low);
    d.initial_high = s.number("initial_high", d.initial_high);
    d.input = s.number("input", d.input);
    s.finish();
  }
  o.finish();

  // Flags win over the document.
  if (flags.out) c.out = *flags.out;
  if (flags.seed) c.seed = *flags.seed;
  if (flags.tolerance) c.tolerance = {*flags.tolerance, *flags.tolerance};
  if (flags.serial) c.exec = *flags.serial ? Exec::Serial : Exec::Parallel;
  if (flags.sizes) {
    if (command == "truncate") c.truncate.sizes = *flags.sizes;
    else if (command == "traffic-demo") c.traffic_demo.sizes = *flags.sizes;
    else throw std::invalid_argument("--sizes applies to truncate and traffic-demo only");
  }
  if (flags.horizon) {
    if (*flags.horizon < 0) throw std::invalid_argument("--horizon must be >= 0");
    if (command == "simulate") c.simulate.horizon = *flags.horizon;
    else if (command == "truncate") c.truncate.horizon = *flags.horizon;
    else if (command == "traffic-demo") c.traffic_demo.horizon = *flags.horizon;
    else throw std::invalid_argument("--horizon applies to simulate, truncate and traffic-demo only");
  }
  if (!(c.tolerance.abs > 0) || !(c.tolerance.rel > 0)) throw ConfigError("/tolerance", "tolerances must be positive");
  return c;
}

RunConfig parse_config(const std::string& command, const FlagOverrides& flags) {
  if (!flags.config) return parse_config(command, json::object(), flags, fs::current_path());
  const json doc = read_json_file(*flags.config);
  return parse_config(command, doc, flags, flags.config->parent_path());
}

json to_json(const RunConfig& c) {
  json j = {{"command", c.command},
            {"network", c.network},
            {"seed", c.seed},
            {"tolerance", {{"abs", c.tolerance.abs}, {"rel", c.tolerance.rel}}},
            {"exec", c.exec == Exec::Serial ? "serial" : "parallel"}};
  if (c.certificate) j["certificate"] = *c.certificate;
  if (c.command == "simulate") {
    const auto& s = c.simulate;
    j["simulate"] = {{"horizon", s.horizon}, {"observed", s.observed}, {"initial", initial_json(s.initial)},
                     {"input", input_json(s.input)}};
  } else if (c.command == "certify") {
    const auto& s = c.certify;
    j["certify"] = {{"grid", {{"radius", s.grid.radius}, {"points", s.grid.points}}},
                    {"inputs", s.inputs},
                    {"representatives",
                     {{"window", s.representatives.window}, {"extra_random", s.representatives.extra_random}}},
                    {"gain_radius", s.gain_radius},
                    {"gain_grid", s.gain_grid}};
  } else if (c.command == "wellposed") {
    const auto& p = c.wellposed.plan;
    json w = {{"first", p.first},   {"last", p.last},       {"state_radius", p.state_radius},
              {"input_radius", p.input_radius}, {"samples", p.samples}, {"M", p.M},
              {"radii", p.radii},   {"cap", p.cap}};
    if (c.wellposed.estimate) w["estimate"] = estimate_json(*c.wellposed.estimate);
    j["wellposed"] = w;
  } else if (c.command == "truncate") {
    const auto& t = c.truncate;
    j["truncate"] = {{"sizes", t.sizes},
                     {"horizon", t.horizon},
                     {"initial", initial_json(t.initial)},
                     {"input", input_json(t.input)},
                     {"omega_bar", to_json(t.omega_bar)},
                     {"check_decay", t.check_decay}};
  } else {
    const auto& d = c.traffic_demo;
    j["traffic_demo"] = {{"sizes", d.sizes},
                         {"horizon", d.horizon},
                         {"csv_time_stride", d.csv_time_stride},
                         {"csv_index_stride", d.csv_index_stride},
                         {"initial_low", d.initial_low},
                         {"initial_high", d.initial_high},
                         {"input", d.input}};
  }
  return j;
}

RunResult run(const RunConfig& c, std::ostream& log) {
  if (c.out) {
    fs::create_directories(*c.out);
    write_json_file(*c.out / "config.json", to_json(c));
  }
  RunResult res;
  try {
    const Loaded net = load_network(c);
    if (c.command == "simulate") res = run_simulate(c, net, log);
    else if (c.command == "certify") res = run_certify(c, net, log);
    else if (c.command == "wellposed") res = run_wellposed(c, net, log);
    else if (c.command == "truncate") res = run_truncate(c, net, log);
    else res = run_traffic_demo(c, net, log);
  } catch (const CertificateRefused& e) {
    res.exit_code = 2;
    res.report = {{"title", c.command}, {"verdict", "fail"}, {"refused", e.what()}, {"margin", e.margin}};
    log << "certificate refused: " << e.what() << "\n";
  }
  if (c.out) write_json_file(*c.out / "report.json", res.report);
  log << "verdict: " << res.report.value("verdict", "pass") << "\n";
  return res;
}

}  // namespace netiss
