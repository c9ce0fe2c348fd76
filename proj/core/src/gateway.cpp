#include "burngate/gateway.hpp"

#include <fstream>

#include <httplib.h>
#include <json.hpp>

namespace burngate::gateway {

using nlohmann::json;

namespace {
constexpr std::uint64_t kSimEpoch = 1700000000;

const std::string kGoneBody = R"({"error":"gone"})";
const std::string kAuthFailedBody = R"({"error":"authentication failed"})";

void respond_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void respond_gone(httplib::Response& res) {
  // Byte-identical for burned, unknown and foreign sessions alike.
  res.status = 410;
  res.set_content(kGoneBody, "application/json");
}

void respond_auth_failed(httplib::Response& res) {
  res.status = 401;
  res.set_content(kAuthFailedBody, "application/json");
}

json parse_body(const httplib::Request& req) {
  json parsed = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  return parsed.is_discarded() ? json::object() : parsed;
}

std::string bearer_token(const httplib::Request& req) {
  std::string header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.rfind(kPrefix, 0) == 0) return header.substr(kPrefix.size());
  return header;
}
}  // namespace

struct Gateway::Http {
  httplib::Server server;
};

Gateway::Gateway(GatewayConfig config) : config_(std::move(config)) {
  std::filesystem::create_directories(config_.data_dir);

  if (config_.clock == ClockMode::simulated) {
    clock_ = std::make_unique<SimClock>(kSimEpoch);
  } else {
    clock_ = std::make_unique<RealClock>();
  }

  std::array<std::uint8_t, 8> seed_bytes{};
  os_random(seed_bytes);
  std::uint64_t seed = 0;
  for (auto b : seed_bytes) seed = seed << 8 | b;
  Rng rng(seed);

  logs_ = std::make_unique<logsink::LogRouter>(config_.data_dir / "logs", *clock_);
  logs_->set_config(config_.logging);
  vault_ = std::make_unique<artifacts::ArtifactVault>(config_.data_dir);

  std::vector<std::string> weak;  // weak credentials only via fixtures
  registry_ = std::make_unique<tenant::TenantRegistry>(*clock_, rng.fork(),
                                                       *logs_, std::move(weak));

  session::SessionConfig session_config;
  session_config.max_duration = config_.session_max_duration;
  session_config.remote_retry = config_.burn_remote_retry;
  sessions_ = std::make_unique<session::SessionManager>(*clock_, rng.fork(),
                                                        *vault_, session_config);

  auth_ = std::make_unique<auth::AuthService>(*clock_, rng.fork(),
                                              config_.auth_nonce_ttl_seconds);

  std::unique_ptr<broker::ModelBackend> backend;
  if (config_.broker_backend == "external-http") {
    backend = std::make_unique<broker::ExternalHttpBackend>(config_.broker_external_url);
  } else {
    backend = std::make_unique<broker::RetrievalEchoBackend>();
  }
  broker_ = std::make_unique<broker::Broker>(*registry_, *sessions_, std::move(backend));
  registry_->policy().add_rule({"operator", policy::Action::admin, "*"});
  admin_grant_ = auth_->mint_grant("operator");
  if (config_.isolation != broker::IsolationMode::strict) {
    broker_->set_isolation_mode(admin_grant_, config_.isolation);
  }

  {
    std::ofstream token_file(config_.data_dir / "admin.token");
    token_file << admin_grant_.token << '\n';
  }

  load_tenant_registry();
  http_ = std::make_unique<Http>();

  auto& server = http_->server;

  auto grant_from = [this](const httplib::Request& req)
      -> std::optional<auth::AuthGrant> {
    std::string token = bearer_token(req);
    if (token.empty()) return std::nullopt;
    return auth_->lookup_grant(token);
  };

  // Session lookup that answers identically for burned, unknown and
  // other-tenant ids: no existence oracle on the wire.
  auto owned_session = [this](const auth::AuthGrant& grant,
                              const std::string& id_hex)
      -> std::optional<timekey::ContextId> {
    auto cid = timekey::ContextId::from_hex(id_hex);
    if (!cid) return std::nullopt;
    auto owner = sessions_->tenant_of(*cid);
    if (!owner || *owner != grant.tenant_id) return std::nullopt;
    return cid;
  };

  server.Post("/v1/auth/challenge", [this](const httplib::Request& req,
                                           httplib::Response& res) {
    json body = parse_body(req);
    if (!body.contains("tenant_id")) {
      respond_json(res, 400, {{"error", "tenant_id required"}});
      return;
    }
    auto nonce = auth_->issue_nonce(body["tenant_id"].get<std::string>());
    respond_json(res, 200, {{"nonce", to_hex(nonce)}});
  });

  server.Post("/v1/auth/prove", [this](const httplib::Request& req,
                                       httplib::Response& res) {
    json body = parse_body(req);
    auto nonce_bytes = from_hex(body.value("nonce", ""));
    auto proof_bytes = from_hex(body.value("proof", ""));
    std::string tenant_id = body.value("tenant_id", "");
    if (tenant_id.empty() || !nonce_bytes || nonce_bytes->size() != 16 ||
        !proof_bytes || proof_bytes->size() != 32) {
      respond_auth_failed(res);
      return;
    }
    auth::Nonce nonce{};
    std::copy(nonce_bytes->begin(), nonce_bytes->end(), nonce.begin());
    auth::Proof proof{};
    std::copy(proof_bytes->begin(), proof_bytes->end(), proof.begin());

    auto decision = auth_->authenticate(tenant_id, nonce, proof);

    logsink::LogRecord record;
    record.tenant_id = tenant_id;
    record.kind = logsink::LogKind::auth;
    record.payload = decision.granted
                         ? "auth ok"
                         : std::string("auth rejected: ") +
                               auth::to_string(decision.cause);
    logs_->log_event(std::move(record));

    if (!decision.granted) {
      respond_auth_failed(res);  // cause stays in the audit log only
      return;
    }
    respond_json(res, 200,
                 {{"grant", decision.grant.token},
                  {"tenant_id", decision.grant.tenant_id},
                  {"expires_at", decision.grant.expires_at}});
  });

  server.Post("/v1/sessions", [this, grant_from](const httplib::Request& req,
                                                 httplib::Response& res) {
    auto grant = grant_from(req);
    if (!grant) {
      respond_auth_failed(res);
      return;
    }
    json body = parse_body(req);
    std::uint64_t duration = body.value("duration_seconds", std::uint64_t{0});
    std::uint64_t start = body.value("start", clock_->now());

    auto outcome = sessions_->open_session(
        *grant, timekey::TemporalWindow{start, duration});
    switch (outcome.status) {
      case session::SessionManager::OpenOutcome::Status::expired_grant:
        respond_auth_failed(res);
        return;
      case session::SessionManager::OpenOutcome::Status::window_too_long:
        respond_json(res, 400, {{"error", "window_too_long"}});
        return;
      case session::SessionManager::OpenOutcome::Status::ok:
        break;
    }
    respond_json(res, 200, {{"session_id", outcome.id.hex()},
                            {"expires_at", start + duration}});
  });

  server.Post(R"(/v1/sessions/([0-9a-fA-F]+)/documents)",
              [this, grant_from, owned_session](const httplib::Request& req,
                                                httplib::Response& res) {
                auto grant = grant_from(req);
                if (!grant) {
                  respond_auth_failed(res);
                  return;
                }
                auto cid = owned_session(*grant, req.matches[1]);
                if (!cid) {
                  respond_gone(res);
                  return;
                }
                json body = parse_body(req);
                auto format = extract::format_from_string(body.value("format", "txt"));
                if (!format) {
                  respond_json(res, 400, {{"error", "unknown format"}});
                  return;
                }
                Bytes raw;
                if (body.contains("content_base64")) {
                  auto decoded = base64_decode(body["content_base64"].get<std::string>());
                  if (!decoded) {
                    respond_json(res, 400, {{"error", "bad base64"}});
                    return;
                  }
                  raw = std::move(*decoded);
                } else {
                  std::string text = body.value("content", "");
                  raw.assign(text.begin(), text.end());
                }
                auto outcome = sessions_->ingest_document(*cid, raw, *format);
                switch (outcome.status) {
                  case session::SessionManager::IngestOutcome::Status::session_not_active:
                    respond_gone(res);
                    return;
                  case session::SessionManager::IngestOutcome::Status::unsupported_format:
                    respond_json(res, 400, {{"error", "unsupported_format"}});
                    return;
                  case session::SessionManager::IngestOutcome::Status::parse_failure:
                    respond_json(res, 400, {{"error", "parse_failure"}});
                    return;
                  case session::SessionManager::IngestOutcome::Status::ok:
                    break;
                }
                logsink::LogRecord record;
                record.tenant_id = grant->tenant_id;
                record.kind = logsink::LogKind::ingest;
                record.payload = "ingest format=" + std::string(extract::to_string(*format)) +
                                 " bytes=" + std::to_string(raw.size());
                logs_->log_event(std::move(record));
                // Acknowledgment only; the extracted content never echoes back.
                respond_json(res, 200, {{"status", "ingested"}});
              });

  server.Post(R"(/v1/sessions/([0-9a-fA-F]+)/query)",
              [this, grant_from, owned_session](const httplib::Request& req,
                                                httplib::Response& res) {
                auto grant = grant_from(req);
                if (!grant) {
                  respond_auth_failed(res);
                  return;
                }
                auto cid = owned_session(*grant, req.matches[1]);
                if (!cid) {
                  respond_gone(res);
                  return;
                }
                json body = parse_body(req);
                auto outcome =
                    broker_->infer(*grant, *cid, body.value("prompt", ""));
                switch (outcome.status) {
                  case broker::Broker::InferOutcome::Status::session_not_active:
                    respond_gone(res);
                    return;
                  case broker::Broker::InferOutcome::Status::unauthorized:
                    respond_json(res, 403, {{"error", "forbidden"}});
                    return;
                  case broker::Broker::InferOutcome::Status::ok:
                    break;
                }
                json provenance = json::array();
                for (const auto& [tenant_id, doc_id] : outcome.response.provenance) {
                  provenance.push_back({{"tenant_id", tenant_id}, {"doc_id", doc_id}});
                }
                respond_json(res, 200,
                             {{"text", outcome.response.text},
                              {"provenance", provenance},
                              {"policy_action",
                               outcome.response.action ==
                                       broker::InferenceResponse::PolicyAction::answered
                                   ? "answered"
                                   : "refused"}});
              });

  server.Post(R"(/v1/sessions/([0-9a-fA-F]+)/burn)",
              [this, grant_from, owned_session](const httplib::Request& req,
                                                httplib::Response& res) {
                auto grant = grant_from(req);
                if (!grant) {
                  respond_auth_failed(res);
                  return;
                }
                auto cid = owned_session(*grant, req.matches[1]);
                if (!cid) {
                  respond_gone(res);
                  return;
                }
                auto decision = registry_->authorize(
                    *grant, policy::Action::burn,
                    tenant::TenantRegistry::session_resource(grant->tenant_id));
                if (!decision.allowed()) {
                  respond_json(res, 403, {{"error", "forbidden"}});
                  return;
                }
                json body = parse_body(req);
                auto trigger = session::trigger_from_string(
                                   body.value("trigger", "user_terminate"))
                                   .value_or(session::BurnTrigger::user_terminate);
                auto receipt = sessions_->burn(*cid, trigger);
                if (!receipt) {
                  respond_gone(res);
                  return;
                }
                logsink::LogRecord record;
                record.tenant_id = grant->tenant_id;
                record.kind = logsink::LogKind::burn;
                record.payload = receipt->to_json_text();
                logs_->log_event(std::move(record));
                res.status = 200;
                res.set_content(receipt->to_json_text(), "application/json");
              });

  server.Get(R"(/v1/sessions/([0-9a-fA-F]+))",
             [this, grant_from, owned_session](const httplib::Request& req,
                                               httplib::Response& res) {
               auto grant = grant_from(req);
               if (!grant) {
                 respond_auth_failed(res);
                 return;
               }
               auto cid = owned_session(*grant, req.matches[1]);
               if (!cid ||
                   sessions_->state(*cid) != session::SessionManager::Status::active) {
                 respond_gone(res);
                 return;
               }
               auto window = sessions_->window_of(*cid);
               respond_json(res, 200, {{"state", "active"},
                                       {"tenant_id", grant->tenant_id},
                                       {"expires_at", window->end()}});
             });

  auto require_admin = [this, grant_from](const httplib::Request& req,
                                          httplib::Response& res)
      -> std::optional<auth::AuthGrant> {
    auto grant = grant_from(req);
    if (!grant) {
      respond_auth_failed(res);
      return std::nullopt;
    }
    auto decision = registry_->authorize(*grant, policy::Action::admin,
                                         "gateway/admin");
    if (!decision.allowed()) {
      respond_json(res, 403, {{"error", "forbidden"}});
      return std::nullopt;
    }
    return grant;
  };

  server.Post("/v1/admin/clock/tick",
              [this, require_admin](const httplib::Request& req,
                                    httplib::Response& res) {
                if (!require_admin(req, res)) return;
                auto* sim = sim_clock();
                if (!sim) {
                  respond_json(res, 400, {{"error", "real clock mode"}});
                  return;
                }
                json body = parse_body(req);
                sim->advance(body.value("seconds", std::uint64_t{1}));
                auto burned = sessions_->tick(sim->now());
                json burned_ids = json::array();
                for (const auto& cid : burned) burned_ids.push_back(cid.hex());
                respond_json(res, 200, {{"now", sim->now()}, {"burned", burned_ids}});
              });

  server.Post("/v1/admin/isolation",
              [this, require_admin](const httplib::Request& req,
                                    httplib::Response& res) {
                auto grant = require_admin(req, res);
                if (!grant) return;
                json body = parse_body(req);
                std::string mode = body.value("mode", "");
                broker::IsolationMode wanted;
                if (mode == "strict") {
                  wanted = broker::IsolationMode::strict;
                } else if (mode == "shared_misconfigured") {
                  wanted = broker::IsolationMode::shared_misconfigured;
                } else {
                  respond_json(res, 400, {{"error", "unknown mode"}});
                  return;
                }
                if (!broker_->set_isolation_mode(*grant, wanted)) {
                  respond_json(res, 403, {{"error", "forbidden"}});
                  return;
                }
                respond_json(res, 200, {{"mode", to_string(wanted)}});
              });

  server.Get("/v1/admin/report",
             [this, require_admin](const httplib::Request& req,
                                   httplib::Response& res) {
               if (!require_admin(req, res)) return;
               json body;
               body["isolation_mode"] = to_string(broker_->isolation_mode());
               body["active_sessions"] = sessions_->active_sessions().size();
               body["pending_timers"] = sessions_->timers().pending_count();
               body["suppressed_timers"] = sessions_->timers().suppressed_count();
               respond_json(res, 200, body);
             });
}

Gateway::~Gateway() {
  if (running_) stop();
}

void Gateway::start() {
  auto& server = http_->server;
  if (!server.bind_to_port(config_.listen_host(), config_.listen_port())) {
    throw BindFailure("cannot bind " + config_.listen);
  }
  port_ = config_.listen_port();
  serve_thread_ = std::thread([&server] { server.listen_after_bind(); });
  while (!server.is_running()) std::this_thread::yield();
  running_ = true;
}

int Gateway::start_any_port() {
  auto& server = http_->server;
  port_ = server.bind_to_any_port(config_.listen_host());
  if (port_ <= 0) throw BindFailure("cannot bind ephemeral port");
  serve_thread_ = std::thread([&server] { server.listen_after_bind(); });
  while (!server.is_running()) std::this_thread::yield();
  running_ = true;
  return port_;
}

void Gateway::stop() {
  // Shutdown contract: every active session burns with user_terminate and
  // its receipt is logged before the listener drops.
  for (const auto& cid : sessions_->active_sessions()) {
    auto owner = sessions_->tenant_of(cid);
    auto receipt = sessions_->burn(cid, session::BurnTrigger::user_terminate);
    if (receipt && owner) {
      logsink::LogRecord record;
      record.tenant_id = *owner;
      record.kind = logsink::LogKind::burn;
      record.payload = receipt->to_json_text();
      logs_->log_event(std::move(record));
    }
  }
  if (running_) {
    http_->server.stop();
    if (serve_thread_.joinable()) serve_thread_.join();
    running_ = false;
  }
}

SimClock* Gateway::sim_clock() {
  return config_.clock == ClockMode::simulated
             ? static_cast<SimClock*>(clock_.get())
             : nullptr;
}

Gateway::TenantProvision Gateway::provision_tenant(
    const std::string& name, const std::filesystem::path& corpus_dir,
    store::Credential::Policy policy, const mnemonic::Wordlist& wordlist) {
  auto corpus = canary::CanaryCorpus::load_dir(name, corpus_dir);
  registry_->register_tenant(name, std::move(corpus), policy);
  registry_->validate_marker_uniqueness();

  std::array<std::uint8_t, 16> entropy{};
  os_random(entropy);
  auto seed = mnemonic::EntropySeed::from_entropy(entropy);
  auto phrase = mnemonic::generate_mnemonic(seed, wordlist);

  crypto::Key256 auth_key = auth::derive_auth_key(seed.bits);
  crypto::Digest commitment = auth::commitment_of(auth_key);
  auth_->put_verifier({name, commitment});
  persist_tenant_entry(name, corpus_dir, policy, commitment);

  crypto::secure_wipe(entropy);
  crypto::secure_wipe(auth_key);
  return TenantProvision{name, phrase.joined()};
}

std::vector<std::string> Gateway::list_tenants() const {
  return registry_->tenant_ids();
}

void Gateway::load_tenant_registry() {
  std::ifstream in(config_.data_dir / "tenants.json");
  if (!in) return;
  json parsed = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) return;
  for (const auto& entry : parsed.value("tenants", json::array())) {
    std::string name = entry.at("name").get<std::string>();
    std::filesystem::path corpus_dir = entry.at("corpus_path").get<std::string>();
    auto policy = entry.value("credential_policy", "strong") == "weak"
                      ? store::Credential::Policy::weak
                      : store::Credential::Policy::strong;
    registry_->register_tenant(name, canary::CanaryCorpus::load_dir(name, corpus_dir),
                               policy);
    auto commitment_bytes = from_hex(entry.value("commitment", ""));
    if (commitment_bytes && commitment_bytes->size() == 32) {
      crypto::Digest commitment{};
      std::copy(commitment_bytes->begin(), commitment_bytes->end(),
                commitment.begin());
      auth_->put_verifier({name, commitment});
    }
  }
}

void Gateway::persist_tenant_entry(const std::string& name,
                                   const std::filesystem::path& corpus_dir,
                                   store::Credential::Policy policy,
                                   const crypto::Digest& commitment) {
  std::filesystem::path path = config_.data_dir / "tenants.json";
  json doc;
  {
    std::ifstream in(path);
    if (in) {
      doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    }
  }
  if (doc.is_discarded() || !doc.is_object()) doc = json::object();
  if (!doc.contains("tenants")) doc["tenants"] = json::array();
  doc["tenants"].push_back(
      {{"name", name},
       {"corpus_path", corpus_dir.string()},
       {"credential_policy",
        policy == store::Credential::Policy::weak ? "weak" : "strong"},
       {"commitment", to_hex(commitment)}});
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << '\n';
}

}  // namespace burngate::gateway
