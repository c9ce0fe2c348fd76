#pragma once

#include <filesystem>
#include <string>

#include "burngate/broker.hpp"
#include "burngate/logsink.hpp"

namespace burngate::gateway {

class ConfigInvalid : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class ClockMode { real, simulated };

/// Validated at load: unknown keys anywhere in the document are rejected.
struct GatewayConfig {
  std::string listen = "127.0.0.1:8787";
  std::filesystem::path data_dir = "burngate-data";
  ClockMode clock = ClockMode::real;
  broker::IsolationMode isolation = broker::IsolationMode::strict;
  logsink::LoggingConfig logging;
  std::uint64_t session_max_duration = 86400;  // session.max_duration
  std::uint64_t auth_nonce_ttl_seconds = 60;   // auth.nonce_ttl_seconds
  std::string broker_backend = "retrieval-echo";  // broker.backend
  std::string broker_external_url;                // broker.external_url
  bool burn_remote_retry = false;                 // burn.remote_retry

  static GatewayConfig parse(std::string_view json_text);
  static GatewayConfig load_file(const std::filesystem::path& path);

  std::string listen_host() const;
  int listen_port() const;
};

}  // namespace burngate::gateway
