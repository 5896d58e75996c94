#include "morse/verification.hpp"

#include <algorithm>

namespace morse {

void VerificationReport::add(std::string name, bool passed, std::optional<int> degree,
                             std::string detail) {
  checks_.push_back({std::move(name), degree, passed, std::move(detail)});
}

void VerificationReport::merge(const VerificationReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool VerificationReport::passed() const noexcept {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

bool VerificationReport::failed(const std::string& name) const noexcept {
  return std::any_of(checks_.begin(), checks_.end(),
                     [&](const Check& c) { return !c.passed && c.name == name; });
}

std::vector<Check> VerificationReport::failures() const {
  std::vector<Check> out;
  std::copy_if(checks_.begin(), checks_.end(), std::back_inserter(out),
               [](const Check& c) { return !c.passed; });
  return out;
}

std::string VerificationReport::summary() const {
  std::string out;
  for (const Check& c : checks_) {
    if (c.passed) continue;
    out += "FAILED " + c.name;
    if (c.degree) out += " [degree " + std::to_string(*c.degree) + "]";
    if (!c.detail.empty()) out += ": " + c.detail;
    out += '\n';
  }
  return out;
}

}  // namespace morse
