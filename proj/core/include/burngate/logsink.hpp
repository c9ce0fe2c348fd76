#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "burngate/clock.hpp"
#include "burngate/common.hpp"

namespace burngate::logsink {

enum class LogKind { auth, ingest, infer, burn, admin };
const char* to_string(LogKind kind);

struct LogRecord {
  std::uint64_t timestamp = 0;
  std::string tenant_id;
  LogKind kind = LogKind::auth;
  std::string payload;
  std::string sink;  // filled by the router
};

struct LoggingConfig {
  bool shared_sink = false;
  bool verbose_payload_logging = false;
};

class SinkUnavailable : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Append-only newline-delimited record files, one per tenant plus an
/// optional shared file. Strict mode redacts canary markers and keeps the
/// record in the owner's sink; the shared+verbose combination is the
/// deliberate observability misconfiguration the log-leak test exercises.
class LogRouter {
 public:
  LogRouter(std::filesystem::path dir, const Clock& clock);

  void set_config(LoggingConfig config);
  LoggingConfig config() const;

  void log_event(LogRecord record);

  /// Own sink plus the shared sink; the shared file is visible to everyone.
  std::vector<LogRecord> visible_to(const std::string& tenant_id) const;
  std::vector<LogRecord> read_sink(const std::string& sink_id) const;

  static std::string tenant_sink(const std::string& tenant_id);
  static constexpr const char* kSharedSink = "shared";

 private:
  std::filesystem::path sink_path(const std::string& sink_id) const;

  std::filesystem::path dir_;
  const Clock& clock_;
  mutable std::mutex mu_;
  LoggingConfig config_;
};

}  // namespace burngate::logsink
