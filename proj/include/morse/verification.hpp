#pragma once

#include <optional>
#include <string>
#include <vector>

namespace morse {

/// Outcome of a single runtime identity check.
struct Check {
  std::string name;
  std::optional<int> degree;
  bool passed = false;
  std::string detail;
};

/// Ordered collection of named checks. Failures are recorded, never thrown.
class VerificationReport {
 public:
  void add(std::string name, bool passed, std::optional<int> degree = std::nullopt,
           std::string detail = {});
  void merge(const VerificationReport& other);

  bool passed() const noexcept;
  /// True if some check with this name failed.
  bool failed(const std::string& name) const noexcept;
  const std::vector<Check>& checks() const noexcept { return checks_; }
  std::vector<Check> failures() const;
  /// One line per failed check, for diagnostics.
  std::string summary() const;

 private:
  std::vector<Check> checks_;
};

}  // namespace morse
