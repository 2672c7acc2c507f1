#include "netiss/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace netiss {

bool Tolerance::violated(double lhs, double rhs) const {
  if (std::isnan(lhs) || std::isnan(rhs)) return true;
  return lhs - rhs > abs + rel * std::max(std::abs(lhs), std::abs(rhs));
}

InequalityResult& CertificateReport::add(std::string name) {
  auto& c = checks.emplace_back();
  c.name = std::move(name);
  return c;
}

void CertificateReport::finalize() {
  passed = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

void CertificateReport::absorb(const CertificateReport& other, const std::string& prefix) {
  for (auto c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(std::move(c));
  }
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  finalize();
}

bool ResidualTracker::record(double lhs, double rhs, const std::function<Witness()>& make_witness) {
  const double residual = lhs - rhs;
  const bool bad = tol_.violated(lhs, rhs);
  ++slot_.checked;
  if (bad) slot_.passed = false;
  const bool first = !any_;
  if (first || residual > slot_.worst_residual || std::isnan(residual)) slot_.worst_residual = residual;
  any_ = true;
  const bool replace = first || (bad && !witness_bad_) ||
                       (bad == witness_bad_ && (residual > slot_.witness->residual || std::isnan(residual)));
  if (replace) {
    witness_bad_ = bad;
    Witness w = make_witness();
    w.lhs = lhs;
    w.rhs = rhs;
    w.residual = residual;
    slot_.witness = std::move(w);
  }
  return bad;
}

}  // namespace netiss
