#include "burngate/logsink.hpp"

#include <fstream>

#include <json.hpp>

#include "burngate/canary.hpp"

namespace burngate::logsink {

namespace {
std::optional<LogKind> kind_from_string(std::string_view name) {
  if (name == "auth") return LogKind::auth;
  if (name == "ingest") return LogKind::ingest;
  if (name == "infer") return LogKind::infer;
  if (name == "burn") return LogKind::burn;
  if (name == "admin") return LogKind::admin;
  return std::nullopt;
}
}  // namespace

const char* to_string(LogKind kind) {
  switch (kind) {
    case LogKind::auth: return "auth";
    case LogKind::ingest: return "ingest";
    case LogKind::infer: return "infer";
    case LogKind::burn: return "burn";
    case LogKind::admin: return "admin";
  }
  return "?";
}

LogRouter::LogRouter(std::filesystem::path dir, const Clock& clock)
    : dir_(std::move(dir)), clock_(clock) {
  std::filesystem::create_directories(dir_);
}

void LogRouter::set_config(LoggingConfig config) {
  std::lock_guard lock(mu_);
  config_ = config;
}

LoggingConfig LogRouter::config() const {
  std::lock_guard lock(mu_);
  return config_;
}

std::string LogRouter::tenant_sink(const std::string& tenant_id) {
  return "tenant_" + tenant_id;
}

std::filesystem::path LogRouter::sink_path(const std::string& sink_id) const {
  return dir_ / (sink_id + ".log");
}

void LogRouter::log_event(LogRecord record) {
  std::lock_guard lock(mu_);
  if (record.timestamp == 0) record.timestamp = clock_.now();
  record.sink = config_.shared_sink ? kSharedSink : tenant_sink(record.tenant_id);
  if (!config_.verbose_payload_logging) {
    record.payload = canary::redact_markers(record.payload);
  }

  // Fields serialize in declaration order: timestamp, tenant_id, kind,
  // payload, sink.
  nlohmann::ordered_json line;
  line["timestamp"] = record.timestamp;
  line["tenant_id"] = record.tenant_id;
  line["kind"] = to_string(record.kind);
  line["payload"] = record.payload;
  line["sink"] = record.sink;

  std::ofstream out(sink_path(record.sink), std::ios::app);
  if (!out) {
    throw SinkUnavailable("cannot append to sink '" + record.sink + "'");
  }
  out << line.dump() << '\n';
  if (!out) {
    throw SinkUnavailable("short write to sink '" + record.sink + "'");
  }
}

std::vector<LogRecord> LogRouter::read_sink(const std::string& sink_id) const {
  std::lock_guard lock(mu_);
  std::vector<LogRecord> records;
  std::ifstream in(sink_path(sink_id));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto parsed = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) continue;
    LogRecord record;
    record.timestamp = parsed.value("timestamp", std::uint64_t{0});
    record.tenant_id = parsed.value("tenant_id", "");
    record.kind = kind_from_string(parsed.value("kind", "auth")).value_or(LogKind::auth);
    record.payload = parsed.value("payload", "");
    record.sink = parsed.value("sink", sink_id);
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<LogRecord> LogRouter::visible_to(const std::string& tenant_id) const {
  std::vector<LogRecord> records = read_sink(tenant_sink(tenant_id));
  std::vector<LogRecord> shared = read_sink(kSharedSink);
  records.insert(records.end(), shared.begin(), shared.end());
  return records;
}

}  // namespace burngate::logsink
