#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "burngate/tenant.hpp"

using namespace burngate;
using namespace burngate::tenant;

namespace {
std::filesystem::path fixtures() {
  return std::filesystem::path(BURNGATE_ROOT) / "fixtures";
}

std::vector<std::string> load_weak_list() {
  std::ifstream in(fixtures() / "weak-passwords.txt");
  REQUIRE(in);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

struct Fixture {
  SimClock clock{5000};
  std::filesystem::path log_dir;
  std::unique_ptr<logsink::LogRouter> logs;
  std::unique_ptr<TenantRegistry> registry;

  Fixture() {
    log_dir = std::filesystem::temp_directory_path() /
              ("burngate-fabric-" + std::to_string(clock.now()) + "-" +
               std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    logs = std::make_unique<logsink::LogRouter>(log_dir, clock);
    registry = std::make_unique<TenantRegistry>(clock, Rng(77), *logs,
                                                load_weak_list());
  }
  ~Fixture() {
    std::error_code ec;
    std::filesystem::remove_all(log_dir, ec);
  }

  void provision_three() {
    for (const char* name : {"H", "F", "R"}) {
      std::string dir = std::string("tenant_") +
                        static_cast<char>(std::tolower(name[0]));
      registry->register_tenant(
          name, canary::CanaryCorpus::load_dir(name, fixtures() / "corpora" / dir),
          store::Credential::Policy::strong);
    }
  }
};
}  // namespace

TEST_CASE("registering the three tenants yields disjoint stores") {
  Fixture f;
  f.provision_three();
  f.registry->validate_marker_uniqueness();
  CHECK(f.registry->tenant_ids() == std::vector<std::string>{"H", "F", "R"});

  auto hits = f.registry->store_retrieve("H", f.registry->credential_of("H"),
                                         "salary", 3);
  REQUIRE(hits.ok());
  REQUIRE(!hits.passages.empty());
  CHECK(hits.passages.front().tenant_id == "H");
  CHECK(hits.passages.front().doc_id == "salary");

  CHECK_THROWS_AS(f.registry->register_tenant(
                      "H",
                      canary::CanaryCorpus::load_dir(
                          "H", fixtures() / "corpora" / "tenant_h"),
                      store::Credential::Policy::strong),
                  DuplicateTenant);
}

TEST_CASE("cross-tenant credentials are rejected at the store") {
  Fixture f;
  f.provision_three();
  for (const std::string& a : f.registry->tenant_ids()) {
    for (const std::string& b : f.registry->tenant_ids()) {
      auto outcome =
          f.registry->store_retrieve(a, f.registry->credential_of(b), "records", 2);
      if (a == b) {
        CHECK(outcome.ok());
      } else {
        CHECK(outcome.status == store::RetrieveOutcome::Status::bad_credential);
      }
    }
  }
}

TEST_CASE("a query matching nothing returns an empty list, not an error") {
  Fixture f;
  f.provision_three();
  auto outcome = f.registry->store_retrieve(
      "F", f.registry->credential_of("F"), "zebra xylophone", 5);
  REQUIRE(outcome.ok());
  CHECK(outcome.passages.empty());
}

TEST_CASE("retrieval ranking is deterministic with pinned tie-breaks") {
  Fixture f;
  f.provision_three();
  auto& store = f.registry->store_of("H");
  auto first = store.retrieve_unchecked("salary records", 4);
  auto second = store.retrieve_unchecked("salary records", 4);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].doc_id == second[i].doc_id);
    CHECK(first[i].index == second[i].index);
  }
}

TEST_CASE("authorize: own resources allow, cross-tenant and empty policy deny") {
  Fixture f;
  f.provision_three();
  auth::AuthGrant grant{"tok", "H", 5000, 6000};

  CHECK(f.registry->authorize(grant, policy::Action::infer,
                              TenantRegistry::session_resource("H"))
            .allowed());
  CHECK(!f.registry->authorize(grant, policy::Action::read,
                               TenantRegistry::store_resource("F"))
             .allowed());

  auth::AuthGrant expired{"tok2", "H", 100, 200};
  CHECK(f.registry->authorize(expired, policy::Action::infer,
                              TenantRegistry::session_resource("H"))
            .status == AuthorizeOutcome::Status::expired_grant);

  f.registry->policy().clear();
  CHECK(!f.registry->authorize(grant, policy::Action::infer,
                               TenantRegistry::session_resource("H"))
             .allowed());
  CHECK(f.registry->policy().rule_count() == 0);

  // Every decision produced an admin audit record in H's sink.
  std::size_t admin_records = 0;
  for (const auto& record : f.logs->read_sink("tenant_H")) {
    if (record.kind == logsink::LogKind::admin) ++admin_records;
  }
  CHECK(admin_records == 4);
}

TEST_CASE("weak credentials come from the fixture list, strong ones do not") {
  Fixture f;
  auto weak_list = load_weak_list();
  canary::CanaryDocument doc;
  doc.id = "d";
  doc.text = "corpus CNRY-W-D-test0001 text";
  f.registry->register_tenant("weakling",
                              canary::CanaryCorpus::from_documents("weakling", {doc}),
                              store::Credential::Policy::weak);
  canary::CanaryDocument doc2 = doc;
  doc2.text = "corpus CNRY-X-D-test0002 text";
  doc2.id = "d2";
  f.registry->register_tenant("fortress",
                              canary::CanaryCorpus::from_documents("fortress", {doc2}),
                              store::Credential::Policy::strong);

  const auto& weak_secret = f.registry->credential_of("weakling").secret;
  const auto& strong_secret = f.registry->credential_of("fortress").secret;

  auto in_top_1000 = [&](const std::string& s) {
    for (std::size_t i = 0; i < 1000; ++i) {
      if (weak_list[i] == s) return true;
    }
    return false;
  };
  CHECK(in_top_1000(weak_secret));
  CHECK(strong_secret.size() >= 22);
  CHECK(!in_top_1000(strong_secret));

  std::vector<std::string> guesses(weak_list.begin(), weak_list.begin() + 1000);
  CHECK(f.registry->attempt_credential_attack("weakling", guesses).outcome ==
        AttackOutcome::compromised);
  auto resisted = f.registry->attempt_credential_attack("fortress", guesses);
  CHECK(resisted.outcome == AttackOutcome::resisted);
  CHECK(resisted.attempts == 1000);

  std::vector<std::string> empty;
  CHECK_THROWS_AS(f.registry->attempt_credential_attack("fortress", empty),
                  DomainError);
}

TEST_CASE("credential attack outcomes replay identically for the same seed") {
  auto run_once = [] {
    Fixture f;
    canary::CanaryDocument doc;
    doc.id = "d";
    doc.text = "x CNRY-T-D-seed0001 y";
    f.registry->register_tenant("t0", canary::CanaryCorpus::from_documents("t0", {doc}),
                                store::Credential::Policy::weak);
    return f.registry->credential_of("t0").secret;
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("strict logging redacts canaries and stays in the owner's sink") {
  Fixture f;
  f.provision_three();
  std::string marker = f.registry->get("H").corpus.documents[0].markers[0];

  logsink::LogRecord record;
  record.tenant_id = "H";
  record.kind = logsink::LogKind::infer;
  record.payload = "answer quoting " + marker + " verbatim";
  f.logs->log_event(record);

  auto own = f.logs->read_sink("tenant_H");
  REQUIRE(own.size() == 1);
  CHECK(own[0].payload == "answer quoting [REDACTED] verbatim");
  CHECK(!canary::contains_marker(own[0].payload));
  CHECK(f.logs->read_sink(logsink::LogRouter::kSharedSink).empty());
}

TEST_CASE("the shared+verbose misconfiguration exposes raw payloads") {
  Fixture f;
  f.provision_three();
  std::string marker = f.registry->get("H").corpus.documents[0].markers[0];
  f.logs->set_config({/*shared_sink=*/true, /*verbose_payload_logging=*/true});

  logsink::LogRecord record;
  record.tenant_id = "H";
  record.kind = logsink::LogKind::infer;
  record.payload = "raw " + marker;
  f.logs->log_event(record);

  auto shared = f.logs->read_sink(logsink::LogRouter::kSharedSink);
  REQUIRE(shared.size() == 1);
  CHECK(canary::contains_marker(shared[0].payload));

  // Every tenant sees the shared sink; F's own sink stays empty.
  CHECK(f.logs->visible_to("F").size() == 1);
  CHECK(f.logs->read_sink("tenant_F").empty());
}

TEST_CASE("log records serialize one per line in field order") {
  Fixture f;
  logsink::LogRecord record;
  record.tenant_id = "H";
  record.kind = logsink::LogKind::auth;
  record.payload = "hello";
  f.logs->log_event(record);
  f.logs->log_event(record);

  std::ifstream in(f.log_dir / "tenant_H.log");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    auto t = line.find("\"timestamp\"");
    auto id = line.find("\"tenant_id\"");
    auto k = line.find("\"kind\"");
    auto p = line.find("\"payload\"");
    auto s = line.find("\"sink\"");
    REQUIRE(t != std::string::npos);
    CHECK(t < id);
    CHECK(id < k);
    CHECK(k < p);
    CHECK(p < s);
  }
  CHECK(lines == 2);
}
