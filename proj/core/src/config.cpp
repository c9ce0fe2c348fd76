#include "burngate/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace burngate::gateway {

using nlohmann::json;

namespace {
void reject_unknown(const json& object, const std::set<std::string>& known,
                    const std::string& scope) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (!known.count(key)) {
      throw ConfigInvalid("unknown config key: " +
                          (scope.empty() ? key : scope + "." + key));
    }
  }
}

std::uint64_t positive_u64(const json& value, const std::string& key) {
  if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
    throw ConfigInvalid("config key " + key + " must be a positive integer");
  }
  return value.get<std::uint64_t>();
}
}  // namespace

GatewayConfig GatewayConfig::parse(std::string_view json_text) {
  json parsed = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw ConfigInvalid("config is not a json object");
  }

  reject_unknown(parsed,
                 {"listen", "data_dir", "clock", "isolation", "logging",
                  "session", "auth", "broker", "burn"},
                 "");

  GatewayConfig config;
  if (parsed.contains("listen")) config.listen = parsed["listen"].get<std::string>();
  if (parsed.contains("data_dir")) {
    config.data_dir = parsed["data_dir"].get<std::string>();
  }
  if (parsed.contains("clock")) {
    std::string mode = parsed["clock"].get<std::string>();
    if (mode == "real") {
      config.clock = ClockMode::real;
    } else if (mode == "simulated") {
      config.clock = ClockMode::simulated;
    } else {
      throw ConfigInvalid("clock must be 'real' or 'simulated'");
    }
  }
  if (parsed.contains("isolation")) {
    std::string mode = parsed["isolation"].get<std::string>();
    if (mode == "strict") {
      config.isolation = broker::IsolationMode::strict;
    } else if (mode == "shared_misconfigured") {
      config.isolation = broker::IsolationMode::shared_misconfigured;
    } else {
      throw ConfigInvalid("isolation must be 'strict' or 'shared_misconfigured'");
    }
  }
  if (parsed.contains("logging")) {
    const json& logging = parsed["logging"];
    reject_unknown(logging, {"shared_sink", "verbose_payload_logging"}, "logging");
    config.logging.shared_sink = logging.value("shared_sink", false);
    config.logging.verbose_payload_logging =
        logging.value("verbose_payload_logging", false);
  }
  if (parsed.contains("session")) {
    const json& session = parsed["session"];
    reject_unknown(session, {"max_duration"}, "session");
    if (session.contains("max_duration")) {
      config.session_max_duration =
          positive_u64(session["max_duration"], "session.max_duration");
    }
  }
  if (parsed.contains("auth")) {
    const json& auth = parsed["auth"];
    reject_unknown(auth, {"nonce_ttl_seconds"}, "auth");
    if (auth.contains("nonce_ttl_seconds")) {
      config.auth_nonce_ttl_seconds =
          positive_u64(auth["nonce_ttl_seconds"], "auth.nonce_ttl_seconds");
    }
  }
  if (parsed.contains("broker")) {
    const json& broker_obj = parsed["broker"];
    reject_unknown(broker_obj, {"backend", "external_url"}, "broker");
    if (broker_obj.contains("backend")) {
      config.broker_backend = broker_obj["backend"].get<std::string>();
      if (config.broker_backend != "retrieval-echo" &&
          config.broker_backend != "external-http") {
        throw ConfigInvalid(
            "broker.backend must be 'retrieval-echo' or 'external-http'");
      }
    }
    config.broker_external_url = broker_obj.value("external_url", "");
    if (config.broker_backend == "external-http" &&
        config.broker_external_url.empty()) {
      throw ConfigInvalid("broker.external_url required for external-http");
    }
  }
  if (parsed.contains("burn")) {
    const json& burn = parsed["burn"];
    reject_unknown(burn, {"remote_retry"}, "burn");
    config.burn_remote_retry = burn.value("remote_retry", false);
  }
  return config;
}

GatewayConfig GatewayConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse(text);
}

std::string GatewayConfig::listen_host() const {
  auto colon = listen.rfind(':');
  return colon == std::string::npos ? listen : listen.substr(0, colon);
}

int GatewayConfig::listen_port() const {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos) return 8787;
  return std::stoi(listen.substr(colon + 1));
}

}  // namespace burngate::gateway
