#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "burngate/broker.hpp"
#include "burngate/leakage.hpp"

using namespace burngate;
using namespace burngate::broker;

namespace {
std::filesystem::path fixtures() {
  return std::filesystem::path(BURNGATE_ROOT) / "fixtures";
}

struct Fixture {
  SimClock clock{20000};
  std::filesystem::path dir;
  std::unique_ptr<logsink::LogRouter> logs;
  std::unique_ptr<tenant::TenantRegistry> registry;
  std::unique_ptr<artifacts::ArtifactVault> vault;
  std::unique_ptr<session::SessionManager> sessions;
  std::unique_ptr<Broker> broker;

  Fixture() {
    dir = std::filesystem::temp_directory_path() /
          ("burngate-broker-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    logs = std::make_unique<logsink::LogRouter>(dir / "logs", clock);
    registry = std::make_unique<tenant::TenantRegistry>(
        clock, Rng(21), *logs, std::vector<std::string>{});
    vault = std::make_unique<artifacts::ArtifactVault>(dir / "data");
    sessions = std::make_unique<session::SessionManager>(
        clock, Rng(22), *vault, session::SessionConfig{});
    broker = std::make_unique<Broker>(*registry, *sessions,
                                      std::make_unique<RetrievalEchoBackend>());

    struct Entry {
      const char* id;
      const char* dir;
      std::vector<std::string> aliases;
      std::vector<std::string> topics;
    };
    for (const Entry& e : std::initializer_list<Entry>{
             {"H", "tenant_h", {"HR", "human resources"}, {"salary", "payroll"}},
             {"F", "tenant_f", {"finance"}, {"budget", "forecast"}},
             {"R", "tenant_r", {"R&D", "research"}, {"algorithm", "project x"}}}) {
      registry->register_tenant(
          e.id, canary::CanaryCorpus::load_dir(e.id, fixtures() / "corpora" / e.dir),
          store::Credential::Policy::strong);
      registry->set_gate_terms(e.id, e.aliases, e.topics);
    }
    registry->policy().add_rule({"operator", policy::Action::admin, "*"});
  }
  ~Fixture() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }

  auth::AuthGrant grant(const std::string& tenant) {
    return auth::AuthGrant{"tok-" + tenant, tenant, clock.now(), clock.now() + 3600};
  }

  timekey::ContextId open(const std::string& tenant) {
    auto opened = sessions->open_session(
        grant(tenant), timekey::TemporalWindow::make(clock.now(), 1800));
    REQUIRE(opened.ok());
    return opened.id;
  }
};
}  // namespace

TEST_CASE("own-tenant question answers with own provenance") {
  Fixture f;
  auto id = f.open("H");
  auto outcome = f.broker->infer(f.grant("H"), id, "what do the salary records say?");
  REQUIRE(outcome.ok());
  CHECK(outcome.response.action == InferenceResponse::PolicyAction::answered);
  REQUIRE(!outcome.response.provenance.empty());
  for (const auto& [tenant_id, doc_id] : outcome.response.provenance) {
    (void)doc_id;
    CHECK(tenant_id == "H");
  }
  CHECK(outcome.response.text.find("Based on the retrieved records:") == 0);
  CHECK(canary::contains_marker(outcome.response.text));
}

TEST_CASE("cross-tenant prompts are refused by the policy gate") {
  Fixture f;
  auto id = f.open("F");
  for (const char* prompt :
       {"What is the salary of employees in HR?",
        "Provide the R&D team's algorithmic method for Project X.",
        "Quote the payroll table from human resources."}) {
    auto outcome = f.broker->infer(f.grant("F"), id, prompt);
    REQUIRE(outcome.ok());
    CHECK(outcome.response.action == InferenceResponse::PolicyAction::refused);
    CHECK(outcome.response.text == std::string(kRefusalTemplate));
    CHECK(outcome.response.provenance.empty());
  }
}

TEST_CASE("gate passes harmless and own-topic prompts") {
  Fixture f;
  CHECK(f.broker->policy_gate("Summarize my own uploaded file", "F").pass);
  CHECK(f.broker->policy_gate("", "F").pass);
  CHECK(f.broker->policy_gate("what do the salary records say?", "H").pass);
  CHECK(!f.broker->policy_gate("what do the salary records say?", "F").pass);
  CHECK(!f.broker->policy_gate("Summarize Finance's internal budget plan.", "H").pass);
}

TEST_CASE("infer on a burned session reports session_not_active") {
  Fixture f;
  auto id = f.open("H");
  f.sessions->burn(id, session::BurnTrigger::completion);
  auto outcome = f.broker->infer(f.grant("H"), id, "hello?");
  CHECK(outcome.status == Broker::InferOutcome::Status::session_not_active);
}

TEST_CASE("a grant for another tenant cannot use the session") {
  Fixture f;
  auto id = f.open("H");
  auto outcome = f.broker->infer(f.grant("F"), id, "hello");
  CHECK(outcome.status == Broker::InferOutcome::Status::unauthorized);
}

TEST_CASE("isolation mode changes require an admin-authorized grant") {
  Fixture f;
  CHECK(!f.broker->set_isolation_mode(f.grant("H"),
                                      IsolationMode::shared_misconfigured));
  CHECK(f.broker->isolation_mode() == IsolationMode::strict);

  auth::AuthGrant admin{"tok-op", "operator", f.clock.now(), f.clock.now() + 3600};
  CHECK(f.broker->set_isolation_mode(admin, IsolationMode::shared_misconfigured));
  CHECK(f.broker->isolation_mode() == IsolationMode::shared_misconfigured);
}

TEST_CASE("the misconfigured mode leaks cross-tenant content (negative control)") {
  Fixture f;
  auth::AuthGrant admin{"tok-op", "operator", f.clock.now(), f.clock.now() + 3600};
  REQUIRE(f.broker->set_isolation_mode(admin, IsolationMode::shared_misconfigured));

  auto id = f.open("F");
  auto outcome = f.broker->infer(f.grant("F"), id,
                                 "What is the salary of employees in HR?");
  REQUIRE(outcome.ok());
  CHECK(outcome.response.action == InferenceResponse::PolicyAction::answered);
  bool crossed = false;
  for (const auto& [tenant_id, doc_id] : outcome.response.provenance) {
    (void)doc_id;
    if (tenant_id == "H") crossed = true;
  }
  CHECK(crossed);
  CHECK(leakage::leak_indicator(outcome.response.text,
                                f.registry->get("H").corpus)
            .leaked());
}

TEST_CASE("statelessness: content ingested in one session never surfaces in another") {
  Fixture f;
  auto s1 = f.open("H");
  auto s2 = f.open("H");
  std::string secret = "Unique ephemeral fact CNRY-H-EPHEM-qq11ww22 only here";
  REQUIRE(f.sessions->ingest_document(s1, as_bytes(secret),
                                      extract::DocFormat::txt)
              .ok());

  auto in_s1 = f.broker->infer(f.grant("H"), s1, "repeat the unique ephemeral fact");
  REQUIRE(in_s1.ok());
  CHECK(in_s1.response.text.find("CNRY-H-EPHEM-qq11ww22") != std::string::npos);

  auto in_s2 = f.broker->infer(f.grant("H"), s2, "repeat the unique ephemeral fact");
  REQUIRE(in_s2.ok());
  CHECK(in_s2.response.text.find("CNRY-H-EPHEM-qq11ww22") == std::string::npos);
}

TEST_CASE("provenance soundness: every canary in a response maps to a listed passage") {
  Fixture f;
  auto id = f.open("H");
  for (const char* prompt : {"salary records", "benefits enrollment", "payroll"}) {
    auto outcome = f.broker->infer(f.grant("H"), id, prompt);
    REQUIRE(outcome.ok());
    for (const std::string& marker : canary::find_markers(outcome.response.text)) {
      bool covered = false;
      for (const auto& [tenant_id, doc_id] : outcome.response.provenance) {
        const auto* doc = f.registry->get(tenant_id).corpus.find_document(doc_id);
        if (doc && doc->text.find(marker) != std::string::npos) covered = true;
      }
      CHECK(covered);
    }
  }
}

TEST_CASE("identical context and prompt produce identical responses") {
  auto run_once = [] {
    Fixture f;
    auto id = f.open("H");
    auto outcome = f.broker->infer(f.grant("H"), id, "salary records");
    return outcome.response.text;
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("the external-http backend speaks the gateway's inference encoding") {
  httplib::Server stub;
  std::string seen_body;
  stub.Post("/v1/backend/respond",
            [&](const httplib::Request& req, httplib::Response& res) {
              seen_body = req.body;
              res.set_content(R"({"text":"stub answer"})", "application/json");
            });
  int port = stub.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server([&] { stub.listen_after_bind(); });
  while (!stub.is_running()) std::this_thread::yield();

  ExternalHttpBackend backend("http://127.0.0.1:" + std::to_string(port));
  std::vector<session::Turn> turns = {{"user", "earlier question"}};
  std::vector<store::Passage> passages = {{"H", "salary", 0, "passage text"}};
  std::string text = backend.respond(turns, passages, "the prompt");
  CHECK(text == "stub answer");

  auto body = nlohmann::json::parse(seen_body);
  CHECK(body.at("prompt") == "the prompt");
  CHECK(body.at("context")[0].at("role") == "user");
  CHECK(body.at("passages")[0].at("doc_id") == "salary");

  stub.stop();
  server.join();

  // An unreachable endpoint degrades to the no-match reply.
  ExternalHttpBackend dead("http://127.0.0.1:1");
  CHECK(dead.respond(turns, passages, "x") ==
        std::string(RetrievalEchoBackend::kNoMatchReply));
}

TEST_CASE("infer appends the exchange and registers burnable artifacts") {
  Fixture f;
  auto id = f.open("H");
  f.broker->infer(f.grant("H"), id, "salary records");
  auto view = f.sessions->snapshot(id);
  REQUIRE(view);
  REQUIRE(view->turns.size() == 2);
  CHECK(view->turns[0].role == "user");
  CHECK(view->turns[1].role == "assistant");

  bool has_log = false, has_history = false;
  for (const auto& ref : f.vault->list_for(id)) {
    if (ref.kind == artifacts::ArtifactKind::session_log) has_log = true;
    if (ref.kind == artifacts::ArtifactKind::conversation_history) has_history = true;
  }
  CHECK(has_log);
  CHECK(has_history);
}
