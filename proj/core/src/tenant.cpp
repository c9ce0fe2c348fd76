#include "burngate/tenant.hpp"

#include <algorithm>
#include <unordered_set>

namespace burngate::tenant {

namespace {
constexpr std::size_t kStrongCredentialLength = 24;  // must stay >= 22
constexpr std::size_t kWeakSamplePool = 1000;
}  // namespace

TenantRegistry::TenantRegistry(const Clock& clock, Rng rng,
                               logsink::LogRouter& logs,
                               std::vector<std::string> weak_passwords)
    : clock_(clock),
      logs_(logs),
      weak_passwords_(std::move(weak_passwords)),
      rng_(std::move(rng)) {}

std::string TenantRegistry::store_resource(const std::string& tenant_id) {
  return "tenant:" + tenant_id + "/store";
}

std::string TenantRegistry::session_resource(const std::string& tenant_id) {
  return "tenant:" + tenant_id + "/session";
}

Tenant& TenantRegistry::register_tenant(const std::string& name,
                                        canary::CanaryCorpus corpus,
                                        store::Credential::Policy policy) {
  std::unique_lock lock(mu_);
  for (const auto& e : entries_) {
    if (e->tenant.name == name) throw DuplicateTenant("tenant exists: " + name);
  }

  store::Credential credential;
  credential.tenant_id = name;
  credential.policy = policy;
  if (policy == store::Credential::Policy::weak) {
    if (weak_passwords_.empty()) {
      throw DomainError("weak credential requested but no weak-password list");
    }
    std::size_t pool = std::min(kWeakSamplePool, weak_passwords_.size());
    credential.secret = weak_passwords_[rng_.below(pool)];
  } else {
    credential.secret = rng_.alnum(kStrongCredentialLength);
  }

  auto entry = std::make_unique<Entry>();
  entry->tenant.id = name;
  entry->tenant.name = name;
  entry->tenant.corpus = corpus;
  entry->tenant.log_sink = logsink::LogRouter::tenant_sink(name);
  entry->store = std::make_unique<store::PassageStore>(name, credential);
  for (const auto& doc : corpus.documents) {
    entry->store->ingest_document(doc.id, doc.text);
  }

  policy_.add_rule({name, policy::Action::read, store_resource(name)});
  policy_.add_rule({name, policy::Action::write, store_resource(name)});
  policy_.add_rule({name, policy::Action::infer, session_resource(name)});
  policy_.add_rule({name, policy::Action::burn, session_resource(name)});

  entries_.push_back(std::move(entry));
  return entries_.back()->tenant;
}

void TenantRegistry::set_gate_terms(const std::string& tenant_id,
                                    std::vector<std::string> aliases,
                                    std::vector<std::string> topic_terms) {
  std::unique_lock lock(mu_);
  for (auto& e : entries_) {
    if (e->tenant.id == tenant_id) {
      e->tenant.aliases = std::move(aliases);
      e->tenant.topic_terms = std::move(topic_terms);
      return;
    }
  }
  throw UnknownTenant("no tenant: " + tenant_id);
}

const TenantRegistry::Entry& TenantRegistry::entry(
    const std::string& tenant_id) const {
  for (const auto& e : entries_) {
    if (e->tenant.id == tenant_id) return *e;
  }
  throw UnknownTenant("no tenant: " + tenant_id);
}

bool TenantRegistry::exists(const std::string& tenant_id) const {
  std::shared_lock lock(mu_);
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) {
    return e->tenant.id == tenant_id;
  });
}

const Tenant& TenantRegistry::get(const std::string& tenant_id) const {
  std::shared_lock lock(mu_);
  return entry(tenant_id).tenant;
}

std::vector<std::string> TenantRegistry::tenant_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) ids.push_back(e->tenant.id);
  return ids;
}

AuthorizeOutcome TenantRegistry::authorize(const auth::AuthGrant& grant,
                                           policy::Action action,
                                           const std::string& resource) {
  AuthorizeOutcome out;
  const char* verdict;
  if (clock_.now() >= grant.expires_at) {
    out.status = AuthorizeOutcome::Status::expired_grant;
    verdict = "expired_grant";
  } else if (policy_.allows(grant.tenant_id, action, resource)) {
    out.status = AuthorizeOutcome::Status::allow;
    verdict = "allow";
  } else {
    out.status = AuthorizeOutcome::Status::deny;
    verdict = "deny";
  }

  logsink::LogRecord record;
  record.tenant_id = grant.tenant_id;
  record.kind = logsink::LogKind::admin;
  record.payload = std::string("authorize ") + policy::to_string(action) +
                   " " + resource + " -> " + verdict;
  logs_.log_event(std::move(record));
  return out;
}

store::RetrieveOutcome TenantRegistry::store_retrieve(
    const std::string& tenant_id, const store::Credential& credential,
    std::string_view query, std::size_t k) const {
  std::shared_lock lock(mu_);
  return entry(tenant_id).store->retrieve(credential, query, k);
}

std::vector<store::Passage> TenantRegistry::retrieve_across_all_stores(
    std::string_view query, std::size_t k) const {
  std::shared_lock lock(mu_);
  std::vector<store::Passage> pool;
  for (const auto& e : entries_) {
    auto hits = e->store->retrieve_unchecked(query, k);
    pool.insert(pool.end(), hits.begin(), hits.end());
  }
  return store::rank_passages(query, std::move(pool), k);
}

const store::Credential& TenantRegistry::credential_of(
    const std::string& tenant_id) const {
  std::shared_lock lock(mu_);
  return entry(tenant_id).store->credential();
}

store::PassageStore& TenantRegistry::store_of(const std::string& tenant_id) {
  std::shared_lock lock(mu_);
  return *const_cast<store::PassageStore*>(entry(tenant_id).store.get());
}

const store::PassageStore& TenantRegistry::store_of(
    const std::string& tenant_id) const {
  std::shared_lock lock(mu_);
  return *entry(tenant_id).store;
}

AttackResult TenantRegistry::attempt_credential_attack(
    const std::string& tenant_id, std::span<const std::string> guesses) {
  if (guesses.empty()) throw DomainError("guess list must be non-empty");
  const std::string secret = credential_of(tenant_id).secret;

  AttackResult result;
  for (const auto& guess : guesses) {
    ++result.attempts;
    if (guess == secret) {
      result.outcome = AttackOutcome::compromised;
      break;
    }
  }
  return result;
}

void TenantRegistry::validate_marker_uniqueness() const {
  std::shared_lock lock(mu_);
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    for (const auto& marker : e->tenant.corpus.all_markers()) {
      if (!seen.insert(marker).second) {
        throw DomainError("canary marker appears in more than one corpus: " +
                          marker);
      }
    }
  }
}

}  // namespace burngate::tenant
