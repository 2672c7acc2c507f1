#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "netiss/certify.hpp"
#include "netiss/network.hpp"

namespace netiss {

/// Ill-posed family with A_i = [-i, i]:
///   f_i(x) = i x                     on [-1/2, 1/2]
///   f_i(x) = sgn(x) (|x| + i) / 2    outside A_i
///   linear from (1/2, i/2) to (i, i) in between (odd extension),
/// so A_i is invariant and |f_i(x)|_{A_i} = |x|_{A_i} / 2.
double example1_map(Index i, double x);
Dynamics example1_dynamics();

struct BuiltinNetwork {
  NetworkSpec spec;
  std::optional<Certificate> certificate;
  std::string description;
};

/// traffic, example1, halving-chain, doubling, relaxed-pair, contraction-scalar
std::vector<std::string> builtin_names();

/// `options` is only read by "traffic" (TrafficParams fields). Throws
/// std::invalid_argument for unknown names.
BuiltinNetwork make_builtin(const std::string& name, const nlohmann::json& options = nlohmann::json::object());

}  // namespace netiss
