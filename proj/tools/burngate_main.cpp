// Command-line front end: serve the gateway, provision tenants, run the
// client-side session flow, and drive attack scenarios.

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "burngate/gateway.hpp"
#include "burngate/harness.hpp"

using nlohmann::json;
namespace bg = burngate;

namespace {

bg::gateway::Gateway* g_serving = nullptr;

void handle_signal(int) {
  if (g_serving) g_serving->stop();
}

json http_call(const std::string& server, const std::string& method,
               const std::string& path, const json& body,
               const std::string& grant, int& status) {
  httplib::Client client(server);
  client.set_read_timeout(10, 0);
  httplib::Headers headers;
  if (!grant.empty()) headers.emplace("Authorization", "Bearer " + grant);
  httplib::Result result;
  if (method == "GET") {
    result = client.Get(path, headers);
  } else {
    result = client.Post(path, headers, body.dump(), "application/json");
  }
  if (!result) {
    status = -1;
    return json{{"error", "cannot reach " + server}};
  }
  status = result->status;
  json parsed = json::parse(result->body, nullptr, false);
  return parsed.is_discarded() ? json{{"raw", result->body}} : parsed;
}

struct ProveResult {
  std::string grant;
  std::string error;
};

ProveResult authenticate(const std::string& server, const std::string& tenant,
                         const std::string& mnemonic_text,
                         const std::filesystem::path& wordlist_path) {
  auto wordlist = bg::mnemonic::Wordlist::load_file(wordlist_path);
  auto phrase = bg::mnemonic::MnemonicPhrase::split(mnemonic_text);
  auto parsed = bg::mnemonic::parse_mnemonic(phrase, wordlist);
  if (!parsed.ok()) {
    return {"", parsed.status == bg::mnemonic::ParseOutcome::Status::unknown_word
                    ? "mnemonic word not in list: " + parsed.offending_word
                    : "mnemonic checksum mismatch"};
  }

  int status = 0;
  json challenge = http_call(server, "POST", "/v1/auth/challenge",
                             {{"tenant_id", tenant}}, "", status);
  if (status != 200) return {"", "challenge failed: " + challenge.dump()};
  auto nonce_bytes = bg::from_hex(challenge.value("nonce", ""));
  if (!nonce_bytes || nonce_bytes->size() != 16) return {"", "bad nonce"};

  bg::auth::Nonce nonce{};
  std::copy(nonce_bytes->begin(), nonce_bytes->end(), nonce.begin());
  auto auth_key = bg::auth::derive_auth_key(parsed.seed.bits);
  auto proof = bg::auth::make_proof(auth_key, nonce);

  json prove = http_call(server, "POST", "/v1/auth/prove",
                         {{"tenant_id", tenant},
                          {"nonce", challenge["nonce"]},
                          {"proof", bg::to_hex(proof)}},
                         "", status);
  if (status != 200) return {"", "authentication failed"};
  return {prove.value("grant", ""), ""};
}

int run_scenario_to(const bg::harness::Scenario& scenario,
                    const std::string& out_path, bool as_json) {
  auto report = bg::harness::run_scenario(scenario);
  std::string text = report.to_json_text();
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::trunc);
    out << text;
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
  }
  std::cout << (as_json ? text : report.to_table_text());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-tenant burn-after-use LLM gateway"};
  app.require_subcommand(1);

  std::string config_path = "burngate.json";
  std::string wordlist_path = "fixtures/wordlist-2048.txt";
  std::string server = "http://127.0.0.1:8787";
  bool as_json = false;

  // serve
  std::string data_dir_override;
  auto* serve = app.add_subcommand("serve", "run the gateway service");
  serve->add_option("--config", config_path, "gateway config file");
  serve->add_option("--data-dir", data_dir_override,
                    "override the configured data directory");

  // tenant add | list
  auto* tenant_cmd = app.add_subcommand("tenant", "tenant administration");
  tenant_cmd->require_subcommand(1);
  auto* tenant_add = tenant_cmd->add_subcommand("add", "register a tenant");
  std::string tenant_name, corpus_dir;
  bool weak_credential = false;
  tenant_add->add_option("--config", config_path, "gateway config file");
  tenant_add->add_option("--name", tenant_name, "tenant name")->required();
  tenant_add->add_option("--corpus", corpus_dir, "corpus directory")->required();
  tenant_add->add_flag("--weak", weak_credential, "use a weak store credential");
  tenant_add->add_option("--wordlist", wordlist_path, "mnemonic wordlist file");
  auto* tenant_list = tenant_cmd->add_subcommand("list", "list tenants");
  tenant_list->add_option("--config", config_path, "gateway config file");

  // mnemonic new
  auto* mnemonic_cmd = app.add_subcommand("mnemonic", "mnemonic utilities");
  mnemonic_cmd->require_subcommand(1);
  auto* mnemonic_new = mnemonic_cmd->add_subcommand("new", "generate a phrase");
  mnemonic_new->add_option("--wordlist", wordlist_path, "wordlist file");

  // session open | query | burn
  auto* session_cmd = app.add_subcommand("session", "client session flow");
  session_cmd->require_subcommand(1);
  std::string mnemonic_text, grant_token, session_id, prompt, trigger = "user_terminate";
  std::uint64_t minutes = 30;

  auto* session_open = session_cmd->add_subcommand("open", "authenticate and open");
  session_open->add_option("--server", server, "gateway base url");
  session_open->add_option("--tenant", tenant_name, "tenant name")->required();
  session_open->add_option("--mnemonic", mnemonic_text, "12-word phrase")->required();
  session_open->add_option("--minutes", minutes, "session window length");
  session_open->add_option("--wordlist", wordlist_path, "wordlist file");
  session_open->add_flag("--json", as_json, "machine output");

  auto* session_query = session_cmd->add_subcommand("query", "run one inference");
  session_query->add_option("--server", server, "gateway base url");
  session_query->add_option("--grant", grant_token, "grant token")->required();
  session_query->add_option("--session", session_id, "session id")->required();
  session_query->add_option("--prompt", prompt, "prompt text")->required();
  session_query->add_flag("--json", as_json, "machine output");

  auto* session_burn = session_cmd->add_subcommand("burn", "burn the session");
  session_burn->add_option("--server", server, "gateway base url");
  session_burn->add_option("--grant", grant_token, "grant token")->required();
  session_burn->add_option("--session", session_id, "session id")->required();
  session_burn->add_option("--trigger", trigger, "timeout|user_terminate|completion");
  session_burn->add_flag("--json", as_json, "machine output");

  // attack run
  auto* attack_cmd = app.add_subcommand("attack", "attack scenarios");
  attack_cmd->require_subcommand(1);
  auto* attack_run = attack_cmd->add_subcommand("run", "run a scenario");
  std::string scenario_name, fixtures_dir = "experiments", out_path, stochastic;
  std::uint64_t seed = 42;
  attack_run
      ->add_option("scenario", scenario_name,
                   "one of: cross_tenant credential_attack log_leak "
                   "bau_case_1..4 bau_suite full")
      ->required();
  attack_run->add_option("--fixtures", fixtures_dir, "fixture directory");
  attack_run->add_option("--out", out_path, "write the json report here");
  attack_run->add_option("--seed", seed, "scenario seed");
  attack_run->add_option("--stochastic", stochastic,
                         "sample faults with probability p (e.g. p=0.1)");
  attack_run->add_flag("--json", as_json, "print json instead of the table");

  // report
  auto* report_cmd = app.add_subcommand("report", "render a saved report");
  std::string in_path = "report.json", format = "table";
  report_cmd->add_option("--in", in_path, "report file");
  report_cmd->add_option("--format", format, "table|json")
      ->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (serve->parsed()) {
      auto config = bg::gateway::GatewayConfig::load_file(config_path);
      if (!data_dir_override.empty()) config.data_dir = data_dir_override;
      bg::gateway::Gateway gateway(std::move(config));
      gateway.start();
      g_serving = &gateway;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cout << "listening on port " << gateway.port() << "\n";
      while (gateway.running()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      g_serving = nullptr;
      return 0;
    }

    if (tenant_add->parsed()) {
      auto config = bg::gateway::GatewayConfig::load_file(config_path);
      bg::gateway::Gateway gateway(std::move(config));
      auto wordlist = bg::mnemonic::Wordlist::load_file(wordlist_path);
      auto provisioned = gateway.provision_tenant(
          tenant_name, corpus_dir,
          weak_credential ? bg::store::Credential::Policy::weak
                          : bg::store::Credential::Policy::strong,
          wordlist);
      std::cout << "tenant " << provisioned.name << " registered\n";
      std::cout << "mnemonic (write it down, it is not stored): "
                << provisioned.mnemonic << "\n";
      return 0;
    }
    if (tenant_list->parsed()) {
      auto config = bg::gateway::GatewayConfig::load_file(config_path);
      bg::gateway::Gateway gateway(std::move(config));
      for (const auto& name : gateway.list_tenants()) std::cout << name << "\n";
      return 0;
    }

    if (mnemonic_new->parsed()) {
      auto wordlist = bg::mnemonic::Wordlist::load_file(wordlist_path);
      std::array<std::uint8_t, 16> entropy{};
      bg::os_random(entropy);
      auto seed_value = bg::mnemonic::EntropySeed::from_entropy(entropy);
      std::cout << bg::mnemonic::generate_mnemonic(seed_value, wordlist).joined()
                << "\n";
      return 0;
    }

    if (session_open->parsed()) {
      auto proof = authenticate(server, tenant_name, mnemonic_text, wordlist_path);
      if (!proof.error.empty()) {
        std::cerr << proof.error << "\n";
        return 1;
      }
      int status = 0;
      json opened = http_call(server, "POST", "/v1/sessions",
                              {{"duration_seconds", minutes * 60}},
                              proof.grant, status);
      if (status != 200) {
        std::cerr << "open failed: " << opened.dump() << "\n";
        return 1;
      }
      if (as_json) {
        std::cout << json{{"grant", proof.grant},
                          {"session_id", opened["session_id"]}}
                         .dump()
                  << "\n";
      } else {
        std::cout << "grant: " << proof.grant << "\n"
                  << "session: " << opened.value("session_id", "") << "\n";
      }
      return 0;
    }
    if (session_query->parsed()) {
      int status = 0;
      json answer = http_call(server, "POST", "/v1/sessions/" + session_id + "/query",
                              {{"prompt", prompt}}, grant_token, status);
      if (status != 200) {
        std::cerr << "query failed (" << status << "): " << answer.dump() << "\n";
        return 1;
      }
      std::cout << (as_json ? answer.dump() : answer.value("text", "")) << "\n";
      return 0;
    }
    if (session_burn->parsed()) {
      int status = 0;
      json receipt = http_call(server, "POST", "/v1/sessions/" + session_id + "/burn",
                               {{"trigger", trigger}}, grant_token, status);
      if (status != 200) {
        std::cerr << "burn failed (" << status << "): " << receipt.dump() << "\n";
        return 1;
      }
      std::cout << (as_json ? receipt.dump()
                            : "burn complete=" +
                                  std::string(receipt.value("complete", false)
                                                  ? "true"
                                                  : "false"))
                << "\n";
      return 0;
    }

    if (attack_run->parsed()) {
      bg::harness::Scenario scenario;
      scenario.name = scenario_name;
      scenario.seed = seed;
      scenario.fixtures_dir = fixtures_dir;
      if (!stochastic.empty()) {
        std::string value = stochastic;
        if (value.rfind("p=", 0) == 0) value = value.substr(2);
        scenario.stochastic_p = std::stod(value);
      }
      const auto& known = bg::harness::Scenario::names();
      if (std::find(known.begin(), known.end(), scenario.name) == known.end()) {
        std::cerr << "unknown scenario: " << scenario.name << "\n";
        return 2;
      }
      return run_scenario_to(scenario, out_path, as_json);
    }

    if (report_cmd->parsed()) {
      std::ifstream in(in_path);
      if (!in) {
        std::cerr << "cannot open " << in_path << "\n";
        return 1;
      }
      json report = json::parse(in, nullptr, false);
      if (report.is_discarded()) {
        std::cerr << "malformed report\n";
        return 1;
      }
      if (format == "json") {
        std::cout << report.dump(2) << "\n";
      } else {
        std::cout << report.value("table", "");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
