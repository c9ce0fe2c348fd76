#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "burngate/metrics.hpp"

namespace burngate::harness {

/// A scenario fully determines its run: same scenario, same report bytes.
struct Scenario {
  std::string name;  // cross_tenant | credential_attack | log_leak |
                     // bau_case_1..4 | bau_suite | full
  std::uint64_t seed = 42;
  std::filesystem::path fixtures_dir = "experiments";
  /// Sample faults with this probability instead of replaying the scripted
  /// plans; property-testing hook.
  std::optional<double> stochastic_p;

  static const std::vector<std::string>& names();
};

class FixtureMissing : public DomainError {
 public:
  using DomainError::DomainError;
};

metrics::MetricReport run_scenario(const Scenario& scenario);

}  // namespace burngate::harness
