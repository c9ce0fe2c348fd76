#pragma once

#include <memory>
#include <thread>

#include "burngate/config.hpp"
#include "burngate/mnemonic.hpp"
#include "burngate/session.hpp"

namespace burngate::gateway {

class BindFailure : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The runnable service: wires auth, tenants, sessions, broker and the wire
/// API together over one data directory. Tenant provisioning is a local
/// administrative action (CLI `tenant add`); the HTTP surface serves the
/// session lifecycle.
class Gateway {
 public:
  explicit Gateway(GatewayConfig config);
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Binds and serves on a background thread. Throws BindFailure.
  void start();
  /// Bind to an ephemeral port (tests). Returns the chosen port.
  int start_any_port();
  /// Graceful: burns every active session with trigger=user_terminate and
  /// logs the receipts before the listener goes down.
  void stop();

  bool running() const { return running_; }
  int port() const { return port_; }

  struct TenantProvision {
    std::string name;
    std::string mnemonic;  // shown once; never stored
  };
  /// Registers the tenant, mints its mnemonic client-side and stores only
  /// the auth verifier; persists the registry entry under the data dir.
  TenantProvision provision_tenant(const std::string& name,
                                   const std::filesystem::path& corpus_dir,
                                   store::Credential::Policy policy,
                                   const mnemonic::Wordlist& wordlist);
  std::vector<std::string> list_tenants() const;

  const std::string& admin_token() const { return admin_grant_.token; }
  SimClock* sim_clock();  // null in real-clock mode

  auth::AuthService& auth() { return *auth_; }
  tenant::TenantRegistry& registry() { return *registry_; }
  session::SessionManager& sessions() { return *sessions_; }
  broker::Broker& broker() { return *broker_; }
  logsink::LogRouter& logs() { return *logs_; }
  const GatewayConfig& config() const { return config_; }

 private:
  struct Http;  // httplib wiring kept out of the header
  void load_tenant_registry();
  void persist_tenant_entry(const std::string& name,
                            const std::filesystem::path& corpus_dir,
                            store::Credential::Policy policy,
                            const crypto::Digest& commitment);

  GatewayConfig config_;
  std::unique_ptr<Clock> clock_;
  std::unique_ptr<logsink::LogRouter> logs_;
  std::unique_ptr<artifacts::ArtifactVault> vault_;
  std::unique_ptr<tenant::TenantRegistry> registry_;
  std::unique_ptr<session::SessionManager> sessions_;
  std::unique_ptr<auth::AuthService> auth_;
  std::unique_ptr<broker::Broker> broker_;
  auth::AuthGrant admin_grant_;

  std::unique_ptr<Http> http_;
  std::thread serve_thread_;
  bool running_ = false;
  int port_ = 0;
};

}  // namespace burngate::gateway
