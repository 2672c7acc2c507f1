#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace netiss {

/// Subsystem index; the network is indexed by 1, 2, 3, ...
using Index = std::int64_t;
using Vec = std::vector<double>;

enum class Norm { Sup, Euclidean };

double norm(std::span<const double> x, Norm n = Norm::Sup);

/// Malformed network description (undefined class, bad neighbor rule, ...).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial condition does not cover an index the simulation needs.
class IncompleteInitialCondition : public std::runtime_error {
 public:
  explicit IncompleteInitialCondition(Index i)
      : std::runtime_error("initial condition missing at index " + std::to_string(i)), index(i) {}
  Index index;
};

}  // namespace netiss
