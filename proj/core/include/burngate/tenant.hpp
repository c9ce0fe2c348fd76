#pragma once

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "burngate/auth.hpp"
#include "burngate/canary.hpp"
#include "burngate/clock.hpp"
#include "burngate/logsink.hpp"
#include "burngate/policy.hpp"
#include "burngate/rng.hpp"
#include "burngate/store.hpp"

namespace burngate::tenant {

struct Tenant {
  std::string id;
  std::string name;
  canary::CanaryCorpus corpus;
  std::string log_sink;
  std::vector<std::string> aliases;      // names the policy gate matches
  std::vector<std::string> topic_terms;  // cross-tenant intent lexicon entries
};

class DuplicateTenant : public DomainError {
 public:
  using DomainError::DomainError;
};
class UnknownTenant : public DomainError {
 public:
  using DomainError::DomainError;
};

struct AuthorizeOutcome {
  enum class Status { allow, deny, expired_grant };
  Status status = Status::deny;

  bool allowed() const { return status == Status::allow; }
};

enum class AttackOutcome { compromised, resisted };

struct AttackResult {
  AttackOutcome outcome = AttackOutcome::resisted;
  std::size_t attempts = 0;  // guesses consumed (all of them when resisted)
};

/// Registry of tenants with their credentialed stores, policy set and log
/// sinks. Reads are concurrent; mutations are serialized.
class TenantRegistry {
 public:
  TenantRegistry(const Clock& clock, Rng rng, logsink::LogRouter& logs,
                 std::vector<std::string> weak_passwords);

  /// Creates the tenant with its own store, a fresh credential under the
  /// given policy, a dedicated log sink, and default allow rules over the
  /// tenant's own resources. Weak credentials sample the top 1000 entries of
  /// the weak-password list.
  Tenant& register_tenant(const std::string& name, canary::CanaryCorpus corpus,
                          store::Credential::Policy credential_policy);

  void set_gate_terms(const std::string& tenant_id,
                      std::vector<std::string> aliases,
                      std::vector<std::string> topic_terms);

  bool exists(const std::string& tenant_id) const;
  const Tenant& get(const std::string& tenant_id) const;
  std::vector<std::string> tenant_ids() const;

  /// Allow iff some rule matches; every decision lands in the caller's audit
  /// sink as an admin record.
  AuthorizeOutcome authorize(const auth::AuthGrant& grant,
                             policy::Action action,
                             const std::string& resource);

  store::RetrieveOutcome store_retrieve(const std::string& tenant_id,
                                        const store::Credential& credential,
                                        std::string_view query,
                                        std::size_t k) const;
  std::vector<store::Passage> retrieve_across_all_stores(std::string_view query,
                                                         std::size_t k) const;

  const store::Credential& credential_of(const std::string& tenant_id) const;
  store::PassageStore& store_of(const std::string& tenant_id);
  const store::PassageStore& store_of(const std::string& tenant_id) const;

  AttackResult attempt_credential_attack(
      const std::string& tenant_id, std::span<const std::string> guesses);

  policy::PolicyEngine& policy() { return policy_; }
  const policy::PolicyEngine& policy() const { return policy_; }
  logsink::LogRouter& logs() { return logs_; }
  const Clock& clock() const { return clock_; }

  /// Asserts the cross-tenant uniqueness of every canary marker.
  void validate_marker_uniqueness() const;

  static std::string store_resource(const std::string& tenant_id);
  static std::string session_resource(const std::string& tenant_id);

 private:
  struct Entry {
    Tenant tenant;
    std::unique_ptr<store::PassageStore> store;
  };

  const Entry& entry(const std::string& tenant_id) const;

  const Clock& clock_;
  logsink::LogRouter& logs_;
  std::vector<std::string> weak_passwords_;
  policy::PolicyEngine policy_;

  mutable std::shared_mutex mu_;
  Rng rng_;
  std::vector<std::unique_ptr<Entry>> entries_;  // stable addresses
};

}  // namespace burngate::tenant
