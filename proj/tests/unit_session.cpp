#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "burngate/canary.hpp"
#include "burngate/session.hpp"

using namespace burngate;
using namespace burngate::session;

namespace {
struct Fixture {
  SimClock clock{10000};
  std::filesystem::path dir;
  std::unique_ptr<artifacts::ArtifactVault> vault;
  std::unique_ptr<SessionManager> manager;

  explicit Fixture(SessionConfig config = {.max_duration = 86400,
                                           .remote_retry = false,
                                           .client_file_cache = true},
                   std::uint64_t seed = 99) {
    dir = std::filesystem::temp_directory_path() /
          ("burngate-session-" + std::to_string(seed) + "-" +
           std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    vault = std::make_unique<artifacts::ArtifactVault>(dir);
    manager = std::make_unique<SessionManager>(clock, Rng(seed), *vault, config);
  }
  ~Fixture() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }

  auth::AuthGrant grant(const std::string& tenant = "H") {
    return auth::AuthGrant{"tok", tenant, clock.now(), clock.now() + 3600};
  }

  timekey::ContextId open_full(std::string_view doc_text =
                                   "Sensitive case CNRY-T-DOC-abcd1234 body") {
    auto opened = manager->open_session(
        grant(), timekey::TemporalWindow::make(clock.now(), 1800));
    REQUIRE(opened.ok());
    auto ingested = manager->ingest_document(opened.id, as_bytes(doc_text),
                                             extract::DocFormat::txt);
    REQUIRE(ingested.ok());
    manager->append_exchange(opened.id, {"user", "question"},
                             {"assistant", "answer"});
    return opened.id;
  }
};
}  // namespace

TEST_CASE("open_session: active state, timer at window end, fresh ids") {
  Fixture f;
  auto a = f.manager->open_session(f.grant(),
                                   timekey::TemporalWindow::make(10000, 1800));
  REQUIRE(a.ok());
  CHECK(f.manager->state(a.id) == SessionManager::Status::active);
  CHECK(f.manager->timers().fire_time(a.id) == 10000 + 1800);

  auto b = f.manager->open_session(f.grant(),
                                   timekey::TemporalWindow::make(10000, 1800));
  REQUIRE(b.ok());
  CHECK(a.id.hex() != b.id.hex());
}

TEST_CASE("open_session rejects bad windows and expired grants") {
  Fixture f;
  auto zero = f.manager->open_session(f.grant(), timekey::TemporalWindow{10000, 0});
  CHECK(zero.status == SessionManager::OpenOutcome::Status::window_too_long);

  auto huge = f.manager->open_session(f.grant(),
                                      timekey::TemporalWindow{10000, 90000});
  CHECK(huge.status == SessionManager::OpenOutcome::Status::window_too_long);

  auth::AuthGrant stale{"tok", "H", 0, 10};
  auto dead = f.manager->open_session(stale,
                                      timekey::TemporalWindow::make(10000, 60));
  CHECK(dead.status == SessionManager::OpenOutcome::Status::expired_grant);
}

TEST_CASE("ingest registers artifacts but never retains raw bytes unless cached") {
  SessionConfig no_cache;
  no_cache.client_file_cache = false;
  Fixture f(no_cache, 7);
  auto opened = f.manager->open_session(
      f.grant(), timekey::TemporalWindow::make(10000, 600));
  auto ingested = f.manager->ingest_document(
      opened.id, as_bytes("plain text secret"), extract::DocFormat::txt);
  REQUIRE(ingested.ok());
  CHECK(ingested.text == "plain text secret");

  bool has_local_file = false;
  for (const auto& ref : f.vault->list_for(opened.id)) {
    if (ref.kind == artifacts::ArtifactKind::local_file) has_local_file = true;
  }
  CHECK(!has_local_file);

  auto unsupported = f.manager->ingest_document(opened.id, as_bytes("x"),
                                                extract::DocFormat::xls);
  CHECK(unsupported.status == SessionManager::IngestOutcome::Status::unsupported_format);
}

TEST_CASE("a full session materializes every artifact kind and a clean burn removes them all") {
  Fixture f;
  auto id = f.open_full();

  auto before = f.vault->list_for(id);
  CHECK(before.size() == artifacts::kBurnOrder.size());

  auto receipt = f.manager->burn(id, BurnTrigger::completion);
  REQUIRE(receipt);
  CHECK(receipt->complete);
  CHECK(receipt->steps.size() == artifacts::kBurnOrder.size());
  for (std::size_t i = 0; i < receipt->steps.size(); ++i) {
    CHECK(receipt->steps[i].deleted);
    CHECK(receipt->steps[i].artifact.kind == artifacts::kBurnOrder[i]);
  }

  // Post-burn retrieval fails for all 8 kinds.
  for (artifacts::ArtifactKind kind : artifacts::kBurnOrder) {
    for (const auto& ref : before) {
      if (ref.kind == kind) CHECK(!f.vault->read(ref).has_value());
    }
  }
  CHECK(f.manager->state(id) == SessionManager::Status::burned);
  CHECK(f.manager->post_burn_probe(id, "anything").gone);
}

TEST_CASE("local steps precede the remote step in every plan") {
  Fixture f;
  auto id = f.open_full();
  auto receipt = f.manager->burn(id, BurnTrigger::completion);
  bool seen_remote = false;
  for (const auto& step : receipt->steps) {
    if (step.artifact.location == artifacts::Location::remote) {
      seen_remote = true;
    } else {
      CHECK(!seen_remote);
    }
  }
  CHECK(seen_remote);
}

TEST_CASE("clean burn leaves zero session-tagged files in the data dir") {
  Fixture f;
  auto id = f.open_full();
  f.manager->burn(id, BurnTrigger::completion);
  for (const auto& path : f.vault->walk()) {
    CHECK(path.find(id.hex()) == std::string::npos);
  }
}

TEST_CASE("crash_after_step leaves the tail failed with residuals on disk") {
  Fixture f;
  auto id = f.open_full();
  FaultPlan plan;
  plan.crash_after_step = 2;
  auto receipt = f.manager->burn(id, BurnTrigger::completion, plan);
  REQUIRE(receipt);
  CHECK(!receipt->complete);
  REQUIRE(receipt->steps.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    if (i < 2) {
      CHECK(receipt->steps[i].deleted);
    } else {
      CHECK(!receipt->steps[i].deleted);
      CHECK(receipt->steps[i].cause == "crash");
      CHECK(f.vault->exists(receipt->steps[i].artifact));
    }
  }
  auto probe = f.manager->post_burn_probe(id, "probe");
  CHECK(!probe.gone);
  CHECK(canary::contains_marker(probe.content));
}

TEST_CASE("drop_remote_delete fails only the remote step and keeps the cache readable") {
  Fixture f;
  auto id = f.open_full();
  FaultPlan plan;
  plan.drop_remote_delete = true;
  auto receipt = f.manager->burn(id, BurnTrigger::user_terminate, plan);
  REQUIRE(receipt);
  CHECK(!receipt->complete);
  for (const auto& step : receipt->steps) {
    if (step.artifact.kind == artifacts::ArtifactKind::remote_cache) {
      CHECK(!step.deleted);
      CHECK(step.cause == "network");
      auto raw = f.vault->read(step.artifact);
      REQUIRE(raw);  // raw store inspection still sees it
      CHECK(canary::contains_marker(*raw));
    } else {
      CHECK(step.deleted);
    }
  }
  CHECK(f.manager->state(id) == SessionManager::Status::burned);
}

TEST_CASE("remote_retry turns the dropped delete into a success") {
  SessionConfig config;
  config.client_file_cache = true;
  config.remote_retry = true;
  Fixture f(config, 31);
  auto id = f.open_full();
  FaultPlan plan;
  plan.drop_remote_delete = true;
  auto receipt = f.manager->burn(id, BurnTrigger::completion, plan);
  CHECK(receipt->complete);
}

TEST_CASE("burn is idempotent: the second receipt replays the first") {
  Fixture f;
  auto id = f.open_full();
  auto first = f.manager->burn(id, BurnTrigger::completion);
  auto second = f.manager->burn(id, BurnTrigger::completion);
  REQUIRE(first);
  REQUIRE(second);
  CHECK(second->replay);
  CHECK(!first->replay);
  CHECK(second->complete == first->complete);
  CHECK(second->steps.size() == first->steps.size());
  auto strip_replay = [](std::string text) {
    auto pos = text.find("\"replay\"");
    return text.substr(0, pos);
  };
  CHECK(strip_replay(first->to_json_text()) == strip_replay(second->to_json_text()));
}

TEST_CASE("ingest and infer after burn report session_not_active") {
  Fixture f;
  auto id = f.open_full();
  f.manager->burn(id, BurnTrigger::completion);
  auto ingested = f.manager->ingest_document(id, as_bytes("more"),
                                             extract::DocFormat::txt);
  CHECK(ingested.status == SessionManager::IngestOutcome::Status::session_not_active);
  CHECK(!f.manager->append_exchange(id, {"user", "x"}, {"assistant", "y"}));
  CHECK(!f.manager->snapshot(id).has_value());
}

TEST_CASE("burn of an unknown session yields no receipt; probe says gone") {
  Fixture f;
  timekey::ContextId ghost{};
  ghost.id[0] = 0xEE;
  CHECK(!f.manager->burn(ghost, BurnTrigger::completion).has_value());
  CHECK(f.manager->post_burn_probe(ghost, "probe").gone);
}

TEST_CASE("timer fires exactly at window end") {
  Fixture f;
  auto opened = f.manager->open_session(
      f.grant(), timekey::TemporalWindow::make(10000, 1800));
  CHECK(f.manager->tick(11799).empty());
  auto burned = f.manager->tick(11800);
  REQUIRE(burned.size() == 1);
  CHECK(burned[0].hex() == opened.id.hex());
  auto receipt = f.manager->receipt_of(opened.id);
  REQUIRE(receipt);
  CHECK(receipt->trigger == BurnTrigger::timeout);
}

TEST_CASE("suppressed timers never fire and are tallied") {
  Fixture f;
  auto opened = f.manager->open_session(
      f.grant(), timekey::TemporalWindow::make(10000, 60));
  FaultPlan plan;
  plan.timer_action = FaultPlan::TimerAction::suppress;
  f.manager->arm_fault_plan(opened.id, plan);

  CHECK(f.manager->tick(10060).empty());
  CHECK(f.manager->tick(99999).empty());
  CHECK(f.manager->timers().suppressed_count() == 1);
  CHECK(f.manager->state(opened.id) == SessionManager::Status::active);
  CHECK(!f.manager->post_burn_probe(opened.id, "alive?").gone);
}

TEST_CASE("delayed timers open an observable race window") {
  Fixture f;
  auto opened = f.manager->open_session(
      f.grant(), timekey::TemporalWindow::make(10000, 60));
  FaultPlan plan;
  plan.timer_action = FaultPlan::TimerAction::delay;
  plan.timer_delay_seconds = 30;
  f.manager->arm_fault_plan(opened.id, plan);

  CHECK(f.manager->tick(10060).empty());  // scheduled time passes, no burn
  CHECK(f.manager->state(opened.id) == SessionManager::Status::active);
  auto probe = f.manager->post_burn_probe(opened.id, "during the race");
  CHECK(!probe.gone);
  CHECK(probe.detail == "live-context");

  auto burned = f.manager->tick(10090);
  CHECK(burned.size() == 1);
  CHECK(f.manager->state(opened.id) == SessionManager::Status::burned);
}

TEST_CASE("queries racing a burn see the full context or nothing") {
  for (int round = 0; round < 5; ++round) {
    Fixture f({.max_duration = 86400, .remote_retry = false, .client_file_cache = true},
              1000 + round);
    auto id = f.open_full();
    f.manager->append_exchange(id, {"user", "q2"}, {"assistant", "a2"});
    const std::size_t full_turns = f.manager->snapshot(id)->turns.size();

    std::atomic<bool> start{false};
    std::atomic<int> violations{0};
    std::vector<std::thread> readers;
    for (int t = 0; t < 4; ++t) {
      readers.emplace_back([&] {
        while (!start) std::this_thread::yield();
        for (int i = 0; i < 25; ++i) {
          auto view = f.manager->snapshot(id);
          if (view && view->turns.size() != full_turns) ++violations;
        }
      });
    }
    std::thread burner([&] {
      while (!start) std::this_thread::yield();
      f.manager->burn(id, BurnTrigger::user_terminate);
    });
    start = true;
    for (auto& t : readers) t.join();
    burner.join();
    CHECK(violations.load() == 0);
  }
}

TEST_CASE("identical scripts and fault plans produce byte-identical receipts") {
  auto run_once = [](std::uint64_t seed) {
    Fixture f({.max_duration = 86400, .remote_retry = false, .client_file_cache = true},
              seed);
    auto id = f.open_full("Replayed doc CNRY-T-RPLY-zz99yy88 body");
    FaultPlan plan;
    plan.crash_after_step = 3;
    return f.manager->burn(id, BurnTrigger::completion, plan)->to_json_text();
  };
  CHECK(run_once(555) == run_once(555));
  CHECK(run_once(555) != run_once(556));  // different context ids
}

TEST_CASE("fault plans parse their structured-config form") {
  auto plan = FaultPlan::parse(
      R"({"crash_after_step": 2, "drop_remote_delete": false, "timer_action": "delay", "timer_delay_seconds": 30, "seed": 7})");
  CHECK(plan.crash_after_step == 2);
  CHECK(!plan.drop_remote_delete);
  CHECK(plan.timer_action == FaultPlan::TimerAction::delay);
  CHECK(plan.timer_delay_seconds == 30);
  CHECK(plan.seed == 7);
  CHECK(!plan.clean());

  auto clean = FaultPlan::parse(R"({"crash_after_step": null})");
  CHECK(clean.clean());

  CHECK_THROWS_AS(FaultPlan::parse("nonsense"), DomainError);
  CHECK_THROWS_AS(FaultPlan::parse(R"({"timer_action": "warp"})"), DomainError);

  auto round = FaultPlan::parse(plan.to_json_text());
  CHECK(round.crash_after_step == plan.crash_after_step);
  CHECK(round.timer_action == plan.timer_action);
  CHECK(round.timer_delay_seconds == plan.timer_delay_seconds);
}

TEST_CASE("audit: every on-disk artifact of a burned session appears in its receipt") {
  Fixture f;
  auto id = f.open_full();
  FaultPlan plan;
  plan.crash_after_step = 1;
  auto receipt = f.manager->burn(id, BurnTrigger::completion, plan);

  for (const auto& path : f.vault->walk()) {
    if (path.find(id.hex()) == std::string::npos) continue;
    bool in_receipt = false;
    for (const auto& step : receipt->steps) {
      if (step.artifact.handle == path) in_receipt = true;
    }
    CHECK(in_receipt);
  }
}
