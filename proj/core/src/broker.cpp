#include "burngate/broker.hpp"

#include <json.hpp>

#include "burngate/leakage.hpp"

// Pulled in only for the external backend.
#include <httplib.h>

namespace burngate::broker {

std::string RetrievalEchoBackend::respond(
    std::span<const session::Turn> context,
    std::span<const store::Passage> passages, std::string_view prompt) {
  (void)context;
  (void)prompt;
  if (passages.empty()) return std::string(kNoMatchReply);
  return std::string(kAnswerPrefix) + passages.front().text;
}

ExternalHttpBackend::ExternalHttpBackend(std::string url) : url_(std::move(url)) {}

std::string ExternalHttpBackend::respond(
    std::span<const session::Turn> context,
    std::span<const store::Passage> passages, std::string_view prompt) {
  nlohmann::json body;
  body["prompt"] = std::string(prompt);
  body["context"] = nlohmann::json::array();
  for (const auto& turn : context) {
    body["context"].push_back({{"role", turn.role}, {"text", turn.text}});
  }
  body["passages"] = nlohmann::json::array();
  for (const auto& passage : passages) {
    body["passages"].push_back({{"tenant_id", passage.tenant_id},
                                {"doc_id", passage.doc_id},
                                {"text", passage.text}});
  }

  httplib::Client client(url_);
  auto res = client.Post("/v1/backend/respond", body.dump(), "application/json");
  if (!res || res->status != 200) {
    return std::string(RetrievalEchoBackend::kNoMatchReply);
  }
  auto parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded()) return std::string(RetrievalEchoBackend::kNoMatchReply);
  return parsed.value("text", "");
}

const char* to_string(IsolationMode mode) {
  return mode == IsolationMode::strict ? "strict" : "shared_misconfigured";
}

Broker::Broker(tenant::TenantRegistry& registry,
               session::SessionManager& sessions,
               std::unique_ptr<ModelBackend> backend)
    : registry_(registry), sessions_(sessions), backend_(std::move(backend)) {}

namespace {
bool contains_term(const std::string& padded_prompt, std::string_view term) {
  std::string needle = leakage::normalize_for_ngrams(term);
  if (needle.empty()) return false;
  needle.insert(needle.begin(), ' ');
  needle.push_back(' ');
  return padded_prompt.find(needle) != std::string::npos;
}
}  // namespace

Broker::GateOutcome Broker::policy_gate(std::string_view prompt,
                                        const std::string& calling_tenant) const {
  GateOutcome out;
  std::string padded = " " + leakage::normalize_for_ngrams(prompt) + " ";
  for (const std::string& id : registry_.tenant_ids()) {
    if (id == calling_tenant) continue;
    const tenant::Tenant& other = registry_.get(id);
    if (contains_term(padded, other.name)) {
      out.pass = false;
      out.reason = "prompt references tenant " + id;
      return out;
    }
    for (const auto& alias : other.aliases) {
      if (contains_term(padded, alias)) {
        out.pass = false;
        out.reason = "prompt references tenant " + id;
        return out;
      }
    }
    for (const auto& term : other.topic_terms) {
      if (contains_term(padded, term)) {
        out.pass = false;
        out.reason = "prompt targets content owned by tenant " + id;
        return out;
      }
    }
  }
  return out;
}

Broker::InferOutcome Broker::infer(const auth::AuthGrant& grant,
                                   const timekey::ContextId& session_id,
                                   std::string_view prompt) {
  InferOutcome out;

  auto owner = sessions_.tenant_of(session_id);
  if (!owner || sessions_.state(session_id) != session::SessionManager::Status::active) {
    out.status = InferOutcome::Status::session_not_active;
    return out;
  }
  if (grant.tenant_id != *owner) {
    out.status = InferOutcome::Status::unauthorized;
    return out;
  }
  auto decision = registry_.authorize(
      grant, policy::Action::infer, tenant::TenantRegistry::session_resource(*owner));
  if (!decision.allowed()) {
    out.status = InferOutcome::Status::unauthorized;
    return out;
  }

  const IsolationMode mode = mode_.load();

  if (mode == IsolationMode::strict) {
    GateOutcome gate = policy_gate(prompt, *owner);
    if (!gate.pass) {
      out.response.action = InferenceResponse::PolicyAction::refused;
      out.response.text = std::string(kRefusalTemplate);
      session::Turn user{"user", std::string(prompt)};
      session::Turn assistant{"assistant", out.response.text};
      if (!sessions_.append_exchange(session_id, user, assistant)) {
        out.status = InferOutcome::Status::session_not_active;
        return out;
      }
      logsink::LogRecord record;
      record.tenant_id = *owner;
      record.kind = logsink::LogKind::infer;
      record.payload = "refused (" + gate.reason + "): " + std::string(prompt);
      registry_.logs().log_event(std::move(record));
      return out;
    }
  }

  auto view = sessions_.snapshot(session_id);
  if (!view) {
    out.status = InferOutcome::Status::session_not_active;
    return out;
  }

  std::vector<store::Passage> candidates = view->passages;
  if (mode == IsolationMode::shared_misconfigured) {
    auto hits = registry_.retrieve_across_all_stores(prompt, kRetrieveTopK);
    candidates.insert(candidates.end(), hits.begin(), hits.end());
  } else {
    auto outcome = registry_.store_retrieve(
        *owner, registry_.credential_of(*owner), prompt, kRetrieveTopK);
    if (outcome.ok()) {
      candidates.insert(candidates.end(), outcome.passages.begin(),
                        outcome.passages.end());
    }
  }
  std::vector<store::Passage> ranked =
      store::rank_passages(prompt, std::move(candidates), kRetrieveTopK);

  out.response.text = backend_->respond(view->turns, ranked, prompt);
  for (const auto& passage : ranked) {
    out.response.provenance.emplace_back(passage.tenant_id, passage.doc_id);
  }

  session::Turn user{"user", std::string(prompt)};
  session::Turn assistant{"assistant", out.response.text};
  if (!sessions_.append_exchange(session_id, user, assistant)) {
    out.status = InferOutcome::Status::session_not_active;
    out.response = {};
    return out;
  }

  logsink::LogRecord record;
  record.tenant_id = *owner;
  record.kind = logsink::LogKind::infer;
  record.payload = std::string(prompt) + " -> " + out.response.text;
  registry_.logs().log_event(std::move(record));
  return out;
}

bool Broker::set_isolation_mode(const auth::AuthGrant& grant,
                                IsolationMode mode) {
  auto decision =
      registry_.authorize(grant, policy::Action::admin, "gateway/isolation");
  if (!decision.allowed()) return false;
  mode_.store(mode);
  return true;
}

}  // namespace burngate::broker
