#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace burngate::policy {

enum class Action { read, write, infer, burn, admin };
const char* to_string(Action action);
std::optional<Action> action_from_string(std::string_view name);

/// Allow-only rules; there is no deny effect. Anything not matched by an
/// allow rule is denied.
struct PolicyRule {
  std::string subject;   // tenant id / role, or "*"
  Action action = Action::read;
  std::string resource;  // exact id or prefix wildcard like "tenant:H/*"
};

class PolicyEngine {
 public:
  void add_rule(PolicyRule rule);
  void clear();
  std::size_t rule_count() const;

  bool allows(const std::string& subject, Action action,
              const std::string& resource) const;

 private:
  static bool resource_matches(const std::string& pattern,
                               const std::string& resource);

  mutable std::mutex mu_;
  std::vector<PolicyRule> rules_;
};

}  // namespace burngate::policy
