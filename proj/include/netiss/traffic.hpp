#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "netiss/certify.hpp"
#include "netiss/network.hpp"
#include "netiss/report.hpp"
#include "netiss/sim.hpp"

namespace netiss {

/// Urban traffic cells x_i^+ = (1 - T(v_i/l_i + e_i)) x_i + T D_i xbar_i + T B_i u_i
/// with ten structural classes S1..S10. Speeds and lengths are cycled
/// lists: v_i = v[(i - 1) % v.size()].
struct TrafficParams {
  double T = 1.0 / 180000.0;  // 20 ms in hours
  double c = 0.1;
  double e = 0.1;
  double r = 1.0;
  std::vector<double> v = {50.0};  // km/h
  std::vector<double> l = {1.0};   // km
  double epsilon = 1e-4;

  double v_min() const;
  double v_max() const;
  double l_min() const;
  double l_max() const;
  double speed(Index i) const { return v[static_cast<std::size_t>((i - 1) % static_cast<Index>(v.size()))]; }
  double length(Index i) const { return l[static_cast<std::size_t>((i - 1) % static_cast<Index>(l.size()))]; }

  /// Throws std::invalid_argument naming the violated range.
  void validate() const;
};

nlohmann::json to_json(const TrafficParams& p);
/// Missing keys keep their defaults; unknown keys throw ConfigError (io.hpp).
TrafficParams traffic_params_from_json(const nlohmann::json& j);

/// Class number 1..10 of cell i.
int traffic_class(Index i);
/// Neighbor offsets of class k (1..10), in x̄ order.
const std::vector<Index>& traffic_offsets(int k);

NetworkSpec build_traffic_network(const TrafficParams& p);

/// 1 - T v_min / l_max + T c v_max / l_min + epsilon.
double traffic_alpha(const TrafficParams& p);

class CertificateRefused : public std::runtime_error {
 public:
  CertificateRefused(const std::string& what, double margin) : std::runtime_error(what), margin(margin) {}
  double margin;  // 1 - alpha (<= 0 when refused)
};

struct TrafficCertificate {
  Certificate cert;           // W_i = |x_i|, A_i = {0}, M = 1
  double alpha = 0.0;
  double gamma_u_bar = 0.0;   // T r / epsilon
  std::array<double, 10> gamma{};  // per class: max_i (1 - T(v_i/l_i + e_i)) + T c max_j v_j/l_j + epsilon
  double margin = 0.0;        // 1 - alpha
};

/// Throws CertificateRefused when alpha >= 1.
TrafficCertificate traffic_certificate(const TrafficParams& p);

/// Intermediate bound |x_i^+| <= a_i |x_i| + T c ||D_i|| |xbar_i|_inf + T B_i |u_i| on a grid,
/// reported separately from the max-form certificate. Here ||D_i|| is the
/// induced sup-norm (row sum of v_j/l_j), not the max ratio used in gamma.
CertificateReport check_traffic_linear_bound(const NetworkSpec& spec, const TrafficParams& p,
                                             const GridPlan& grid, const std::vector<double>& input_grid,
                                             const Tolerance& tol = {});

struct ScalingOptions {
  Exec exec = Exec::Parallel;
  double initial_low = 0.0, initial_high = 20.0;
  double input = 1.0;
  /// When set, writes <out_dir>/n<size>/trajectories.csv and summary.json.
  std::optional<std::filesystem::path> out_dir;
  long csv_time_stride = 1;
  Index csv_index_stride = 1;
  Tolerance tol;
};

struct ScalingRun {
  Index n = 0;
  long horizon = 0;
  double alpha = 0.0;          // read from the certificate
  double gamma_u_bar = 0.0;
  double input_sup_norm = 0.0;
  double ultimate_bound = 0.0;  // gamma_u_bar * ||u||
  double fitted_contraction = 0.0;  // geometric fit of V over the state-dominated steps, 0 if none
  std::size_t fitted_steps = 0;
  double v_initial = 0.0, v_final = 0.0, v_min = 0.0;
  bool nonnegative = true;
  CertificateReport decay;

  nlohmann::json summary() const;
};

struct ScalingReport {
  std::vector<ScalingRun> runs;
  bool passed() const;
};

/// For each n: zero-interface truncation, u ≡ input, xi uniform on
/// [initial_low, initial_high] from `seed`, checked stepwise against
/// V(k+1) <= max{alpha V(k), gamma_u_bar |u|}.
ScalingReport run_scaling_experiment(const TrafficParams& p, const std::vector<Index>& sizes, long K,
                                     std::uint64_t seed, const ScalingOptions& opt = {});

}  // namespace netiss
