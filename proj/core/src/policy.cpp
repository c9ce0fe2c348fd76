#include "burngate/policy.hpp"

namespace burngate::policy {

const char* to_string(Action action) {
  switch (action) {
    case Action::read: return "read";
    case Action::write: return "write";
    case Action::infer: return "infer";
    case Action::burn: return "burn";
    case Action::admin: return "admin";
  }
  return "?";
}

std::optional<Action> action_from_string(std::string_view name) {
  if (name == "read") return Action::read;
  if (name == "write") return Action::write;
  if (name == "infer") return Action::infer;
  if (name == "burn") return Action::burn;
  if (name == "admin") return Action::admin;
  return std::nullopt;
}

void PolicyEngine::add_rule(PolicyRule rule) {
  std::lock_guard lock(mu_);
  rules_.push_back(std::move(rule));
}

void PolicyEngine::clear() {
  std::lock_guard lock(mu_);
  rules_.clear();
}

std::size_t PolicyEngine::rule_count() const {
  std::lock_guard lock(mu_);
  return rules_.size();
}

bool PolicyEngine::resource_matches(const std::string& pattern,
                                    const std::string& resource) {
  if (pattern == "*") return true;
  if (pattern.size() >= 2 && pattern.ends_with("/*")) {
    std::string_view prefix(pattern.data(), pattern.size() - 1);  // keep '/'
    return resource.size() >= prefix.size() &&
           std::string_view(resource).substr(0, prefix.size()) == prefix;
  }
  return pattern == resource;
}

bool PolicyEngine::allows(const std::string& subject, Action action,
                          const std::string& resource) const {
  std::lock_guard lock(mu_);
  for (const auto& rule : rules_) {
    if (rule.action != action) continue;
    if (rule.subject != "*" && rule.subject != subject) continue;
    if (!resource_matches(rule.resource, resource)) continue;
    return true;
  }
  return false;  // deny-by-default
}

}  // namespace burngate::policy
