#pragma once

#include <atomic>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "burngate/session.hpp"
#include "burngate/tenant.hpp"

namespace burngate::broker {

struct InferenceResponse {
  enum class PolicyAction { answered, refused };
  std::string text;
  // (tenant_id, doc_id) for every passage the answer drew from.
  std::vector<std::pair<std::string, std::string>> provenance;
  PolicyAction action = PolicyAction::answered;
};

/// Deterministic given (context, passages, prompt); receives only the
/// session's own turns and passages retrieved under the caller's authority.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual std::string respond(std::span<const session::Turn> context,
                              std::span<const store::Passage> passages,
                              std::string_view prompt) = 0;
};

/// Default backend: quotes the top retrieved passage verbatim behind a fixed
/// template, which makes leak ground truth exact.
class RetrievalEchoBackend final : public ModelBackend {
 public:
  std::string respond(std::span<const session::Turn> context,
                      std::span<const store::Passage> passages,
                      std::string_view prompt) override;

  static constexpr std::string_view kAnswerPrefix =
      "Based on the retrieved records:\n";
  static constexpr std::string_view kNoMatchReply =
      "No relevant records were found for this request.";
};

/// Delegates to an HTTP endpoint speaking the gateway's inference request
/// encoding. Config-selected; excluded from the acceptance path.
class ExternalHttpBackend final : public ModelBackend {
 public:
  explicit ExternalHttpBackend(std::string url);
  std::string respond(std::span<const session::Turn> context,
                      std::span<const store::Passage> passages,
                      std::string_view prompt) override;

 private:
  std::string url_;
};

inline constexpr std::string_view kRefusalTemplate =
    "This request is outside your tenant's authorized scope.";

enum class IsolationMode { strict, shared_misconfigured };
const char* to_string(IsolationMode mode);

/// Tenant-isolated stateless inference front. Per-tenant logical instances
/// share this object but never share context: everything a backend sees is
/// keyed by the calling session.
class Broker {
 public:
  Broker(tenant::TenantRegistry& registry, session::SessionManager& sessions,
         std::unique_ptr<ModelBackend> backend);

  struct GateOutcome {
    bool pass = true;
    std::string reason;  // set when refused
  };
  /// Refuses prompts that name another tenant (or alias) or hit another
  /// tenant's intent lexicon. Deterministic and auditable.
  GateOutcome policy_gate(std::string_view prompt,
                          const std::string& calling_tenant) const;

  struct InferOutcome {
    enum class Status { ok, session_not_active, unauthorized };
    Status status = Status::ok;
    InferenceResponse response;

    bool ok() const { return Status::ok == status; }
  };
  InferOutcome infer(const auth::AuthGrant& grant,
                     const timekey::ContextId& session_id,
                     std::string_view prompt);

  /// Requires an admin-authorized grant. In shared_misconfigured mode the
  /// gate is disabled and retrieval spans every tenant store; exists as the
  /// negative control for the leak detector.
  bool set_isolation_mode(const auth::AuthGrant& grant, IsolationMode mode);
  IsolationMode isolation_mode() const { return mode_.load(); }

  static constexpr std::size_t kRetrieveTopK = 3;

 private:
  tenant::TenantRegistry& registry_;
  session::SessionManager& sessions_;
  std::unique_ptr<ModelBackend> backend_;
  std::atomic<IsolationMode> mode_ = IsolationMode::strict;
};

}  // namespace burngate::broker
