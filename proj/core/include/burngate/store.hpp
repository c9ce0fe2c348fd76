#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "burngate/common.hpp"

namespace burngate::store {

struct Credential {
  enum class Policy { strong, weak };
  std::string tenant_id;
  std::string secret;
  Policy policy = Policy::strong;
};

struct Passage {
  std::string tenant_id;
  std::string doc_id;
  int index = 0;
  std::string text;
};

struct RetrieveOutcome {
  enum class Status { ok, bad_credential };
  Status status = Status::ok;
  std::vector<Passage> passages;

  bool ok() const { return status == Status::ok; }
};

/// Credentialed per-tenant passage store. Ranking is case-folded
/// term-overlap (sum of query-term frequencies in the passage), ties broken
/// by (doc id, passage index) ascending; an embedding backend would slot in
/// behind the same interface.
class PassageStore {
 public:
  PassageStore(std::string tenant_id, Credential credential);

  void ingest_document(const std::string& doc_id, std::string_view text);
  void remove_document(const std::string& doc_id);
  std::size_t passage_count() const;

  RetrieveOutcome retrieve(const Credential& credential, std::string_view query,
                           std::size_t k) const;

  /// Unauthenticated ranking over this store's passages; exists so a
  /// misconfigured deployment can be modeled. Strict-mode callers always go
  /// through retrieve().
  std::vector<Passage> retrieve_unchecked(std::string_view query,
                                          std::size_t k) const;

  const Credential& credential() const { return credential_; }
  const std::string& tenant_id() const { return tenant_id_; }

 private:
  std::string tenant_id_;
  Credential credential_;
  mutable std::mutex mu_;
  std::vector<Passage> passages_;
};

/// Shared scorer so cross-store ranking in misconfigured mode stays
/// consistent with single-store ranking.
double score_passage(std::string_view query, const Passage& passage);
std::vector<Passage> rank_passages(std::string_view query,
                                   std::vector<Passage> candidates,
                                   std::size_t k);

}  // namespace burngate::store
