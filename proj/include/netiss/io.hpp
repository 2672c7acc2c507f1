#pragma once

#include <filesystem>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "netiss/certify.hpp"
#include "netiss/comparison.hpp"
#include "netiss/distance.hpp"
#include "netiss/network.hpp"
#include "netiss/report.hpp"
#include "netiss/sim.hpp"
#include "netiss/truncate.hpp"
#include "netiss/wellposed.hpp"

namespace netiss {

using nlohmann::json;

/// Schema violation in a JSON document; `pointer` is the JSON pointer of the
/// offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& pointer, const std::string& msg)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + msg), pointer(pointer) {}
  std::string pointer;
};

/// Strict reader for one JSON object: every key must be consumed before
/// finish(), otherwise the first unknown key is reported.
class JsonObject {
 public:
  JsonObject(const json& j, std::string pointer);

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& at(const std::string& key);
  std::string pointer(const std::string& key) const { return ptr_ + "/" + key; }
  const std::string& pointer() const { return ptr_; }

  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  long integer(const std::string& key);
  long integer(const std::string& key, long fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  bool boolean(const std::string& key, bool fallback);
  Vec numbers(const std::string& key);
  Vec numbers(const std::string& key, const Vec& fallback);

  /// Throws ConfigError naming the first key not read.
  void finish() const;

 private:
  const json& j_;
  std::string ptr_;
  std::set<std::string> used_;
};

// Numbers are printed in shortest round-trip form, so CSV and JSON files
// reproduce bitwise across runs.
std::string format_double(double x);

json to_json(const ScalarGain& g);
ScalarGain gain_from_json(const json& j, const std::string& pointer = "");
json to_json(const ClosedSet& s);
ClosedSet set_from_json(const json& j, const std::string& pointer = "");
json to_json(const KLBound& b);
KLBound kl_from_json(const json& j, const std::string& pointer = "");

json to_json(const Witness& w);
json to_json(const CertificateReport& r);
json to_json(const GrowthProfile& p);
json to_json(const ConsistencyResult& c);
json to_json(const Certificate& c);

/// Storage and gains against an already built network.
Certificate certificate_from_json(const json& j, const std::string& pointer = "");

/// Network description (classes, assign rule, neighbor rule); see
/// docs/config-schema.md.
NetworkSpec network_from_json(const json& j, const std::string& pointer = "");

/// Header "k,index,component,value".
void write_csv_header(std::ostream& os);
void write_state_rows(std::ostream& os, long k, const Layout& layout, std::span<const double> values,
                      Index index_stride = 1);
/// Rows for the observed indices at every step.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
void write_interface_csv(std::ostream& os, const InterfaceSignal& s);
/// Header "index,radius,gain".
void write_growth_csv(std::ostream& os, const GrowthProfile& p);
/// Header "check,index,step,component,value" for every witness state.
void write_witness_csv(std::ostream& os, const CertificateReport& r);

void write_json_file(const std::filesystem::path& path, const json& j);
json read_json_file(const std::filesystem::path& path);

}  // namespace netiss
