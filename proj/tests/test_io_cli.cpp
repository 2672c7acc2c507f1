#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "netiss/cli.hpp"
#include "netiss/io.hpp"
#include "netiss/library.hpp"
#include "netiss/traffic.hpp"

using namespace netiss;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("netiss_test_" + name);
  fs::remove_all(p);
  return p;
}

const char* kTrafficJson = R"({
  "name": "traffic-json",
  "classes": [
    {"id": "a", "dynamics": {"kind": "affine", "A": [0.5], "D": [[0.25]], "B": [1]}},
    {"id": "b", "dynamics": {"kind": "affine", "A": [0.2], "D": [[0.1], [0.1]], "B": [0]},
     "target_set": {"kind": "index-box", "scale": 0.5}}
  ],
  "assign": {"kind": "residue", "modulus": 2, "map": {"0": "b", "1": "a"}, "overrides": {"2": "a"}},
  "neighbors": {"kind": "offset-list", "by_class": {"a": [1], "b": [-1, 1]}},
  "max_out_degree": 2
})";

}  // namespace

TEST(NetworkJson, BuildsClassesAndRules) {
  const auto spec = network_from_json(json::parse(kTrafficJson));
  EXPECT_EQ(spec.class_of(1).id, "a");
  EXPECT_EQ(spec.class_of(2).id, "a");
  EXPECT_EQ(spec.class_of(4).id, "b");
  EXPECT_EQ(spec.neighbors_of(4), (std::vector<Index>{3, 5}));
  EXPECT_DOUBLE_EQ(subsystem_step(spec, 4, Vec{1}, Vec{2, 3}, Vec{9})[0], 0.2 + 0.2 + 0.3);
  EXPECT_DOUBLE_EQ(spec.target_set(4).radius(), 2.0);
  EXPECT_TRUE(validate_spec(spec, 50).passed());
}

TEST(NetworkJson, EquivalentToBuiltinChain) {
  const auto j = json::parse(R"({"classes":[{"id":"H","dynamics":{"kind":"affine","A":[0.5],"D":[[0]],"B":[0]}}],
    "assign":{"kind":"constant","class":"H"},"neighbors":{"kind":"offset-list","offsets":[1]}})");
  const auto a = network_from_json(j), b = make_builtin("halving-chain").spec;
  const auto xi = StateWindow::uniform(4, -3, 3);
  const auto ta = simulate(a, xi, InputSignal::zero(), 6, {1, 2}), tb = simulate(b, xi, InputSignal::zero(), 6, {1, 2});
  for (std::size_t k = 0; k < ta.states.size(); ++k) EXPECT_EQ(ta.states[k].values, tb.states[k].values);
}

TEST(NetworkJson, ErrorsCarryPointers) {
  auto expect_pointer = [](const char* doc, const std::string& ptr) {
    try {
      network_from_json(json::parse(doc));
      ADD_FAILURE() << "no error for " << doc;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.pointer, ptr) << e.what();
    }
  };
  expect_pointer(R"({"classes":[{"id":"x","dynamics":{"kind":"zero"},"colour":1}],
    "assign":{"kind":"constant","class":"x"},"neighbors":{"kind":"none"}})",
                 "/classes/0/colour");
  expect_pointer(R"({"classes":[{"id":"x","dynamics":{"kind":"zero"}}],
    "assign":{"kind":"constant","class":"y"},"neighbors":{"kind":"none"}})",
                 "/assign/class");
  expect_pointer(R"({"classes":[{"id":"x","dynamics":{"kind":"warp"}}],
    "assign":{"kind":"constant","class":"x"},"neighbors":{"kind":"none"}})",
                 "/classes/0/dynamics/kind");
}

TEST(CertificateJson, RoundTrip) {
  const auto c = traffic_certificate({}).cert;
  const auto back = certificate_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(back.M, 1);
}

TEST(KLJson, RoundTrip) {
  const auto b = KLBound::lyapunov_chain(ScalarGain::linear(2), ScalarGain::linear(0.5), ScalarGain::linear(3));
  const auto back = kl_from_json(to_json(b));
  EXPECT_EQ(back(1.5, 3), b(1.5, 3));
  const auto e = kl_from_json(json::parse(R"({"kind":"exponential","C":2,"rho":0.5})"));
  EXPECT_EQ(e(1, 1), 1.0);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(std::stod(format_double(5.555555555555556e-06)), 5.555555555555556e-06);
}

TEST(Config, MinimalTrafficDemoDefaults) {
  const auto c = parse_config("traffic-demo", json::object());
  const json expect = json::parse(R"({
    "command": "traffic-demo",
    "exec": "parallel",
    "network": {"builtin": "traffic", "options": {"T": 5.555555555555556e-06, "c": 0.1, "e": 0.1,
                "epsilon": 0.0001, "l": [1.0], "r": 1.0, "v": [50.0]}},
    "seed": 1,
    "tolerance": {"abs": 1e-09, "rel": 1e-09},
    "traffic_demo": {"csv_index_stride": 1, "csv_time_stride": 10, "horizon": 500, "initial_high": 20.0,
                     "initial_low": 0.0, "input": 1.0, "sizes": [100, 1000, 10000]}
  })");
  EXPECT_EQ(to_json(c), expect);
  EXPECT_EQ(to_json(parse_config("traffic-demo", to_json(c))), expect);
}

TEST(Config, UnknownFieldNamed) {
  try {
    parse_config("simulate", json::parse(R"({"network":"halving-chain","simulate":{"horizn":3}})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer, "/simulate/horizn");
    EXPECT_NE(std::string(e.what()).find("horizn"), std::string::npos);
  }
}

TEST(Config, ConflictingNetworkSources) {
  FlagOverrides f;
  f.builtin = "traffic";
  f.network = "x.json";
  EXPECT_THROW(parse_config("simulate", json::object(), f), std::invalid_argument);
  EXPECT_THROW(parse_config("simulate", json::parse(R"({"network":{"builtin":"traffic","path":"x.json"}})")),
               ConfigError);
  EXPECT_THROW(parse_config("certify", json::object()), ConfigError);
  EXPECT_THROW(parse_config("certify", json::parse(R"({"command":"simulate","network":"traffic"})")), ConfigError);
}

TEST(Config, FlagsOverrideDocument) {
  FlagOverrides f;
  f.seed = 42;
  f.horizon = 7;
  f.tolerance = 1e-6;
  const auto c = parse_config("simulate", json::parse(R"({"network":"traffic","seed":3,"simulate":{"horizon":2}})"), f);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.simulate.horizon, 7);
  EXPECT_EQ(c.tolerance.abs, 1e-6);
  f = {};
  f.sizes = std::vector<Index>{5};
  EXPECT_THROW(parse_config("certify", json::parse(R"({"network":"traffic"})"), f), std::invalid_argument);
}

TEST(Run, CertifyTrafficPasses) {
  auto c = parse_config("certify", json::parse(R"({"network":"traffic"})"));
  c.out = scratch("certify_traffic");
  std::ostringstream log;
  const auto r = run(c, log);
  EXPECT_EQ(r.exit_code, 0) << log.str();
  EXPECT_EQ(read_json_file(*c.out / "report.json")["verdict"], "pass");
  EXPECT_TRUE(fs::exists(*c.out / "config.json"));
  fs::remove_all(*c.out);
}

TEST(Run, CertifyDoublingFailsWithWitness) {
  auto c = parse_config("certify", json::parse(R"({"network":"doubling"})"));
  c.out = scratch("certify_doubling");
  std::ostringstream log;
  EXPECT_EQ(run(c, log).exit_code, 2);
  const auto rep = read_json_file(*c.out / "report.json");
  EXPECT_EQ(rep["verdict"], "fail");
  bool witness = false;
  for (const auto& chk : rep["checks"])
    if (!chk["passed"].get<bool>()) witness = witness || chk.contains("witness");
  EXPECT_TRUE(witness);
  EXPECT_NE(slurp(*c.out / "witnesses.csv").find("\"decrease"), std::string::npos);
  fs::remove_all(*c.out);
}

TEST(Run, SimulateZeroHorizonHasOnlyInitialRows) {
  auto c = parse_config("simulate", json::parse(R"({"network":"traffic","simulate":{"horizon":0}})"));
  c.out = scratch("simulate_k0");
  std::ostringstream log;
  EXPECT_EQ(run(c, log).exit_code, 0);
  std::istringstream csv(slurp(*c.out / "trajectories.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "k,index,component,value");
  int rows = 0;
  while (std::getline(csv, line)) {
    EXPECT_EQ(line.rfind("0,", 0), 0u);
    ++rows;
  }
  EXPECT_EQ(rows, 10);
  fs::remove_all(*c.out);
}

TEST(Run, RefusedCertificateExitsTwo) {
  auto c = parse_config("traffic-demo", json::parse(R"({"network":{"builtin":"traffic","options":{"epsilon":0.001}}})"));
  c.out = scratch("refused");
  std::ostringstream log;
  EXPECT_EQ(run(c, log).exit_code, 2);
  EXPECT_TRUE(read_json_file(*c.out / "report.json").contains("refused"));
  fs::remove_all(*c.out);
}

TEST(Run, EchoedConfigReproducesArtifacts) {
  auto c = parse_config("truncate", json::parse(R"({"network":"traffic","truncate":{"sizes":[30],"horizon":20}})"));
  c.out = scratch("echo_a");
  std::ostringstream log;
  ASSERT_EQ(run(c, log).exit_code, 0) << log.str();
  FlagOverrides f;
  f.config = *c.out / "config.json";
  f.out = scratch("echo_b");
  const auto again = parse_config("truncate", f);
  ASSERT_EQ(run(again, log).exit_code, 0);
  for (const char* name : {"config.json", "report.json", "n30/trajectories.csv", "n30/interface.csv"})
    EXPECT_EQ(slurp(*c.out / name), slurp(*f.out / name)) << name;
  fs::remove_all(*c.out);
  fs::remove_all(*f.out);
}
