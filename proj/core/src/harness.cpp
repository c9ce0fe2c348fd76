#include "burngate/harness.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "burngate/broker.hpp"
#include "burngate/session.hpp"

namespace burngate::harness {

using nlohmann::json;

namespace {

constexpr std::uint64_t kEpoch = 1700000000;  // fixed scenario start time
constexpr std::string_view kGoneReply = "No session state was found.";

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FixtureMissing("fixture missing: " + path.string());
  json parsed = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    throw FixtureMissing("fixture malformed: " + path.string());
  }
  return parsed;
}

std::vector<std::string> load_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FixtureMissing("fixture missing: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// One isolated deployment per scenario run: simulated clock, seeded rng,
// throwaway data directory.
struct World {
  SimClock clock{kEpoch};
  std::filesystem::path work_dir;
  Rng rng;
  std::unique_ptr<logsink::LogRouter> logs;
  std::unique_ptr<artifacts::ArtifactVault> vault;
  std::unique_ptr<tenant::TenantRegistry> registry;
  std::unique_ptr<session::SessionManager> sessions;
  std::unique_ptr<auth::AuthService> auth_service;
  std::unique_ptr<broker::Broker> brk;
  auth::AuthGrant admin;

  World(std::uint64_t seed, const std::filesystem::path& repo_root,
        session::SessionConfig session_config)
      : rng(seed) {
    std::array<std::uint8_t, 8> tag{};
    os_random(tag);
    work_dir = std::filesystem::temp_directory_path() /
               ("burngate-run-" + to_hex(tag));
    std::filesystem::create_directories(work_dir);

    std::vector<std::string> weak =
        load_lines(repo_root / "fixtures" / "weak-passwords.txt");

    logs = std::make_unique<logsink::LogRouter>(work_dir / "logs", clock);
    vault = std::make_unique<artifacts::ArtifactVault>(work_dir / "data");
    registry = std::make_unique<tenant::TenantRegistry>(clock, rng.fork(),
                                                        *logs, std::move(weak));
    sessions = std::make_unique<session::SessionManager>(clock, rng.fork(),
                                                         *vault, session_config);
    auth_service = std::make_unique<auth::AuthService>(clock, rng.fork(), 60);
    brk = std::make_unique<broker::Broker>(
        *registry, *sessions, std::make_unique<broker::RetrievalEchoBackend>());

    registry->policy().add_rule({"operator", policy::Action::admin, "*"});
    admin = auth_service->mint_grant("operator");
  }

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  ~World() {
    std::error_code ec;
    std::filesystem::remove_all(work_dir, ec);
  }

  auth::AuthGrant grant_for(const std::string& tenant_id) {
    return auth_service->mint_grant(tenant_id);
  }
};

// Gate vocabulary per department; the provisioning file carries the
// name/credential/corpus triple.
struct GateTerms {
  std::vector<std::string> aliases;
  std::vector<std::string> topics;
};

GateTerms gate_terms_for(const std::string& tenant_id) {
  if (tenant_id == "H") {
    return {{"HR", "human resources", "tenant H"},
            {"salary", "payroll", "compensation", "benefits"}};
  }
  if (tenant_id == "F") {
    return {{"finance", "tenant F"},
            {"budget", "forecast", "capital expenditure", "revenue"}};
  }
  if (tenant_id == "R") {
    return {{"R&D", "research", "tenant R"},
            {"algorithm", "project x", "roadmap", "quantizer"}};
  }
  return {};
}

void provision_tenants_from_fixture(World& world, const Scenario& scenario,
                                    const std::filesystem::path& repo_root) {
  json fixture = load_json(scenario.fixtures_dir / "tenants.json");
  for (const auto& entry : fixture.at("tenants")) {
    std::string name = entry.at("name").get<std::string>();
    std::filesystem::path corpus_path = entry.at("corpus_path").get<std::string>();
    if (corpus_path.is_relative()) corpus_path = repo_root / corpus_path;
    if (!std::filesystem::is_directory(corpus_path)) {
      throw FixtureMissing("fixture missing: " + corpus_path.string());
    }
    auto policy = entry.value("credential_policy", "strong") == "weak"
                      ? store::Credential::Policy::weak
                      : store::Credential::Policy::strong;
    world.registry->register_tenant(
        name, canary::CanaryCorpus::load_dir(name, corpus_path), policy);
    GateTerms terms = gate_terms_for(name);
    world.registry->set_gate_terms(name, terms.aliases, terms.topics);
  }
  world.registry->validate_marker_uniqueness();
}

std::map<std::string, canary::CanaryCorpus> corpora_by_tenant(const World& world) {
  std::map<std::string, canary::CanaryCorpus> out;
  for (const auto& id : world.registry->tenant_ids()) {
    out.emplace(id, world.registry->get(id).corpus);
  }
  return out;
}

std::string marker_tag(Rng& rng) {
  static constexpr char kAlphabet[] = "abcdefghjkmnpqrstuvwxyz23456789";
  std::string tag;
  for (int i = 0; i < 8; ++i) tag.push_back(kAlphabet[rng.below(sizeof(kAlphabet) - 1)]);
  return tag;
}

// ------------------------------------------------------------ cross_tenant --

metrics::MetricReport run_cross_tenant(const Scenario& scenario,
                                       const std::filesystem::path& repo_root,
                                       std::uint64_t seed) {
  json prompts_fixture =
      load_json(scenario.fixtures_dir / "cross_tenant" / "prompts.json");

  World world(seed, repo_root, {});
  provision_tenants_from_fixture(world, scenario, repo_root);
  auto corpora = corpora_by_tenant(world);

  auto sweep = [&](std::vector<metrics::AttackLogEntry>& log,
                   std::uint64_t& own_or_refused) {
    for (const auto& [pair_key, prompt_list] : prompts_fixture["pairs"].items()) {
      auto arrow = pair_key.find("->");
      std::string attacker = pair_key.substr(0, arrow);
      std::string victim = pair_key.substr(arrow + 2);

      auth::AuthGrant grant = world.grant_for(attacker);
      auto window = timekey::TemporalWindow::make(world.clock.now(), 3600);
      auto opened = world.sessions->open_session(grant, window);
      for (const auto& prompt : prompt_list) {
        auto outcome =
            world.brk->infer(grant, opened.id, prompt.get<std::string>());
        if (!outcome.ok()) {
          throw DomainError("cross_tenant: infer failed unexpectedly");
        }
        bool refused = outcome.response.action ==
                       broker::InferenceResponse::PolicyAction::refused;
        bool own_only = true;
        for (const auto& [tenant_id, doc_id] : outcome.response.provenance) {
          (void)doc_id;
          if (tenant_id != attacker) own_only = false;
        }
        if (refused || own_only) ++own_or_refused;
        log.push_back({attacker, victim, prompt.get<std::string>(),
                       outcome.response.text});
      }
      world.sessions->burn(opened.id, session::BurnTrigger::completion);
    }
  };

  metrics::MetricReport report;
  report.scenario = scenario.name;
  report.seed = scenario.seed;

  std::vector<metrics::AttackLogEntry> strict_log;
  std::uint64_t strict_clean = 0;
  sweep(strict_log, strict_clean);
  report.ctlr_strict = metrics::ctlr(strict_log, corpora);

  // Negative control: the detector must light up once isolation is broken.
  if (!world.brk->set_isolation_mode(world.admin,
                                     broker::IsolationMode::shared_misconfigured)) {
    throw DomainError("cross_tenant: admin grant rejected");
  }
  std::vector<metrics::AttackLogEntry> mis_log;
  std::uint64_t mis_clean = 0;
  sweep(mis_log, mis_clean);
  report.ctlr_misconfigured = metrics::ctlr(mis_log, corpora);

  report.counts["tenants"] = world.registry->tenant_ids().size();
  report.counts["ordered_pairs"] = report.ctlr_strict->pairwise.size();
  report.counts["adversarial_queries_strict"] = strict_log.size();
  report.counts["adversarial_queries_misconfigured"] = mis_log.size();
  report.counts["strict_refusal_or_own_provenance"] = strict_clean;
  return report;
}

// ------------------------------------------------------- credential_attack --

metrics::MetricReport run_credential_attack(
    const Scenario& scenario, const std::filesystem::path& repo_root,
    std::uint64_t seed) {
  json fixture = load_json(scenario.fixtures_dir / "attack_test_1" / "tenants.json");

  World world(seed, repo_root, {});
  Rng canary_rng = world.rng.fork();

  std::vector<std::string> names;
  for (const auto& entry : fixture["tenants"]) {
    std::string name = entry.at("name").get<std::string>();
    std::string policy = entry.at("credential_policy").get<std::string>();
    canary::CanaryDocument doc;
    doc.id = "profile";
    doc.text = "Directory profile for tenant " + name + ".\nMarker CNRY-" +
               name + "-PROFILE-" + marker_tag(canary_rng) + "\n";
    world.registry->register_tenant(
        name, canary::CanaryCorpus::from_documents(name, {doc}),
        policy == "weak" ? store::Credential::Policy::weak
                         : store::Credential::Policy::strong);
    names.push_back(std::move(name));
  }
  world.registry->validate_marker_uniqueness();

  std::vector<std::string> guesses =
      load_lines(repo_root / "fixtures" / "weak-passwords.txt");
  guesses.resize(std::min<std::size_t>(guesses.size(), 1000));

  std::uint64_t compromised = 0;
  std::uint64_t guesses_spent = 0;
  for (const auto& name : names) {
    auto result = world.registry->attempt_credential_attack(name, guesses);
    guesses_spent += result.attempts;
    if (result.outcome == tenant::AttackOutcome::compromised) ++compromised;
  }

  metrics::MetricReport report;
  report.scenario = scenario.name;
  report.seed = scenario.seed;
  report.vclr = metrics::Ratio::of(compromised, names.size());
  report.counts["attack_attempts"] = names.size();
  report.counts["tenants_compromised"] = compromised;
  report.counts["guess_dictionary_size"] = guesses.size();
  report.counts["guesses_spent"] = guesses_spent;
  report.footnotes.push_back(
      "Credential-test success rate is computed as 1 - VCLR.");
  return report;
}

// ---------------------------------------------------------------- log_leak --

metrics::MetricReport run_log_leak(const Scenario& scenario,
                                   const std::filesystem::path& repo_root,
                                   std::uint64_t seed) {
  json fixture =
      load_json(scenario.fixtures_dir / "attack_test_2" / "interactions.json");
  std::string observed = fixture.at("observed_tenant").get<std::string>();

  World world(seed, repo_root, {});
  provision_tenants_from_fixture(world, scenario, repo_root);

  std::map<std::string, auth::AuthGrant> grants;
  std::map<std::string, timekey::ContextId> session_ids;
  for (const auto& id : world.registry->tenant_ids()) {
    grants[id] = world.grant_for(id);
    auto opened = world.sessions->open_session(
        grants[id], timekey::TemporalWindow::make(world.clock.now(), 3600));
    session_ids[id] = opened.id;
  }

  for (const auto& step : fixture["interactions"]) {
    std::string actor = step.at("actor").get<std::string>();
    std::string prompt = step.at("prompt").get<std::string>();
    bool misconfigured = step.value("misconfigured", false);
    if (misconfigured) {
      world.logs->set_config({/*shared_sink=*/true, /*verbose=*/true});
    }
    auto outcome = world.brk->infer(grants[actor], session_ids[actor], prompt);
    if (!outcome.ok()) throw DomainError("log_leak: infer failed unexpectedly");
    if (misconfigured) world.logs->set_config({});
  }

  // Non-observed corpora drive the leak scan over the observed tenant's view.
  std::vector<canary::CanaryCorpus> foreign;
  for (const auto& id : world.registry->tenant_ids()) {
    if (id != observed) foreign.push_back(world.registry->get(id).corpus);
  }

  std::uint64_t visible = 0;
  std::uint64_t leaked = 0;
  for (const auto& record : world.logs->visible_to(observed)) {
    if (record.kind != logsink::LogKind::infer) continue;
    ++visible;
    for (const auto& corpus : foreign) {
      if (leakage::leak_indicator(record.payload, corpus).leaked()) {
        ++leaked;
        break;
      }
    }
  }

  metrics::MetricReport report;
  report.scenario = scenario.name;
  report.seed = scenario.seed;
  report.tllr = metrics::Ratio::of(leaked, visible);
  report.counts["interactions"] = fixture["interactions"].size();
  report.counts["visible_infer_records"] = visible;
  report.counts["leaked_records"] = leaked;
  return report;
}

// --------------------------------------------------------------- bau cases --

struct CaseRun {
  metrics::Ratio residual{0, 1};
  std::vector<metrics::ProbeRecord> clean_probes;
  std::vector<metrics::ProbeRecord> fault_probes;
  std::uint64_t iterations = 0;
  bool coupling_ok = true;
  std::uint64_t suppressed_timers = 0;
};

std::vector<session::FaultPlan> load_fault_plans(const Scenario& scenario,
                                                 int test_case) {
  json fixture = load_json(scenario.fixtures_dir /
                           ("test_case_" + std::to_string(test_case)) /
                           "faults.json");
  std::vector<session::FaultPlan> plans;
  for (const auto& entry : fixture["iterations"]) {
    plans.push_back(session::FaultPlan::parse(entry.dump()));
  }
  return plans;
}

canary::CanaryDocument make_sensitive_doc(Rng& rng, int test_case, std::size_t i) {
  canary::CanaryDocument doc;
  doc.id = "case" + std::to_string(test_case) + "-doc" + std::to_string(i);
  doc.text = "Confidential submission " + std::to_string(i) +
             " for burn test case " + std::to_string(test_case) +
             ".\nUnique problem statement with reference number " +
             std::to_string(100000 + rng.below(900000)) +
             ".\nTracking marker CNRY-BAUC" + std::to_string(test_case) + "-I" +
             std::to_string(i) + "-" + marker_tag(rng) + "\n";
  doc.markers = canary::find_markers(doc.text);
  return doc;
}

void maybe_randomize_plan(session::FaultPlan& plan, int test_case,
                          const Scenario& scenario, Rng& rng) {
  if (!scenario.stochastic_p) return;
  double p = *scenario.stochastic_p;
  bool fire = rng.below(1000000) < static_cast<std::uint64_t>(p * 1000000);
  plan = session::FaultPlan{};
  if (!fire) return;
  switch (test_case) {
    case 1: plan.crash_after_step = rng.below(7); break;
    case 2: plan.drop_remote_delete = true; break;
    case 4:
      if (rng.below(2) == 0) {
        plan.timer_action = session::FaultPlan::TimerAction::suppress;
      } else {
        plan.timer_action = session::FaultPlan::TimerAction::delay;
        plan.timer_delay_seconds = 30;
      }
      break;
    default: break;
  }
}

// Cases 1 and 2: completion-triggered burns with crash / dropped-remote
// faults injected from the scripted plan.
CaseRun run_burn_case(const Scenario& scenario,
                      const std::filesystem::path& repo_root, int test_case,
                      std::uint64_t seed) {
  std::vector<session::FaultPlan> plans = load_fault_plans(scenario, test_case);

  session::SessionConfig config;
  config.client_file_cache = true;  // keep a client-side file snapshot around
  World world(seed, repo_root, config);
  Rng doc_rng = world.rng.fork();

  canary::CanaryDocument seed_doc;
  seed_doc.id = "kb";
  seed_doc.text = "Baseline knowledge for burn tests.\nMarker CNRY-S-KB" +
                  std::to_string(test_case) + "-" + marker_tag(doc_rng) + "\n";
  world.registry->register_tenant(
      "S", canary::CanaryCorpus::from_documents("S", {seed_doc}),
      store::Credential::Policy::strong);

  CaseRun run;
  std::uint64_t failures = 0;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    session::FaultPlan plan = plans[i];
    maybe_randomize_plan(plan, test_case, scenario, doc_rng);

    auth::AuthGrant grant = world.grant_for("S");
    auto opened = world.sessions->open_session(
        grant, timekey::TemporalWindow::make(world.clock.now(), 1800));
    canary::CanaryDocument doc = make_sensitive_doc(doc_rng, test_case, i);
    auto ingested = world.sessions->ingest_document(
        opened.id, as_bytes(doc.text), extract::DocFormat::txt);
    if (!ingested.ok()) throw DomainError("bau case: ingest failed");
    world.brk->infer(grant, opened.id, "summarize the confidential submission");

    auto receipt =
        world.sessions->burn(opened.id, session::BurnTrigger::completion, plan);
    auto probe = world.sessions->post_burn_probe(
        opened.id, "repeat the confidential submission");

    bool relevant_failure = false;
    bool any_failure = false;
    for (const auto& step : receipt->steps) {
      if (step.deleted) continue;
      any_failure = true;
      bool remote = step.artifact.location == artifacts::Location::remote;
      if ((test_case == 1 && !remote) || (test_case == 2 && remote)) {
        relevant_failure = true;
      }
    }
    if (relevant_failure) ++failures;
    if (any_failure != !probe.gone) run.coupling_ok = false;

    metrics::ProbeRecord record{doc, probe.gone ? std::string(kGoneReply)
                                                : probe.content};
    (any_failure ? run.fault_probes : run.clean_probes).push_back(std::move(record));
    world.clock.advance(1);
  }

  run.iterations = plans.size();
  run.residual = metrics::Ratio::of(failures, plans.size());
  return run;
}

// Case 3: frame-exposure accounting. Every query renders one frame; the
// capture policy marks which rendered frames an OS-level grab could see.
CaseRun run_frame_case(const Scenario& scenario,
                       const std::filesystem::path& repo_root,
                       std::uint64_t seed) {
  json fixture = load_json(scenario.fixtures_dir / "test_case_3" / "frames.json");
  std::uint64_t frames = fixture.value("frames", std::uint64_t{2});
  std::string policy = fixture.value("capture_policy", "alternate");

  session::SessionConfig config;
  config.client_file_cache = true;
  World world(seed, repo_root, config);
  Rng doc_rng = world.rng.fork();

  canary::CanaryDocument kb;
  kb.id = "kb";
  kb.text = "Baseline knowledge for frame tests.\nMarker CNRY-S-KB3-" +
            marker_tag(doc_rng) + "\n";
  world.registry->register_tenant(
      "S", canary::CanaryCorpus::from_documents("S", {kb}),
      store::Credential::Policy::strong);

  auth::AuthGrant grant = world.grant_for("S");
  auto opened = world.sessions->open_session(
      grant, timekey::TemporalWindow::make(world.clock.now(), 1800));
  canary::CanaryDocument doc = make_sensitive_doc(doc_rng, 3, 0);
  world.sessions->ingest_document(opened.id, as_bytes(doc.text),
                                  extract::DocFormat::txt);

  std::uint64_t capturable = 0;
  for (std::uint64_t frame = 1; frame <= frames; ++frame) {
    world.brk->infer(grant, opened.id, "render view " + std::to_string(frame));
    bool captured = policy == "alternate" ? (frame % 2 == 1)
                    : policy == "all"     ? true
                                          : false;
    if (captured) ++capturable;
  }
  world.sessions->burn(opened.id, session::BurnTrigger::completion);
  auto probe = world.sessions->post_burn_probe(opened.id, "what was rendered?");

  CaseRun run;
  run.iterations = frames;  // frames are the accounting unit for this case
  run.residual = metrics::Ratio::of(capturable, frames);
  run.coupling_ok = probe.gone;
  run.clean_probes.push_back(
      {doc, probe.gone ? std::string(kGoneReply) : probe.content});
  return run;
}

// Case 4: timeout burns under timer suppression/delay; a failure is a timer
// that did not fire its invalidation at the scheduled time, observed by a
// probe that still finds live context.
CaseRun run_timer_case(const Scenario& scenario,
                       const std::filesystem::path& repo_root,
                       std::uint64_t seed) {
  std::vector<session::FaultPlan> plans = load_fault_plans(scenario, 4);

  session::SessionConfig config;
  config.client_file_cache = true;
  World world(seed, repo_root, config);
  Rng doc_rng = world.rng.fork();

  canary::CanaryDocument kb;
  kb.id = "kb";
  kb.text = "Baseline knowledge for timer tests.\nMarker CNRY-S-KB4-" +
            marker_tag(doc_rng) + "\n";
  world.registry->register_tenant(
      "S", canary::CanaryCorpus::from_documents("S", {kb}),
      store::Credential::Policy::strong);

  CaseRun run;
  std::uint64_t failures = 0;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    session::FaultPlan plan = plans[i];
    maybe_randomize_plan(plan, 4, scenario, doc_rng);

    auth::AuthGrant grant = world.grant_for("S");
    auto window = timekey::TemporalWindow::make(world.clock.now(), 60);
    auto opened = world.sessions->open_session(grant, window);
    world.sessions->arm_fault_plan(opened.id, plan);
    canary::CanaryDocument doc = make_sensitive_doc(doc_rng, 4, i);
    world.sessions->ingest_document(opened.id, as_bytes(doc.text),
                                    extract::DocFormat::txt);
    world.brk->infer(grant, opened.id, "summarize the confidential submission");

    world.clock.set(window.end());
    world.sessions->tick(world.clock.now());

    // Probe lands right at window end: a healthy deployment has burned.
    auto probe = world.sessions->post_burn_probe(
        opened.id, "repeat the confidential submission");
    bool timer_missed = !probe.gone;
    if (timer_missed) ++failures;

    metrics::ProbeRecord record{doc, probe.gone ? std::string(kGoneReply)
                                                : probe.content};
    (timer_missed ? run.fault_probes : run.clean_probes).push_back(std::move(record));

    if (plan.timer_action == session::FaultPlan::TimerAction::delay) {
      world.clock.advance(plan.timer_delay_seconds);
      world.sessions->tick(world.clock.now());  // late burn eventually lands
    }
    world.clock.advance(1);
  }

  run.iterations = plans.size();
  run.residual = metrics::Ratio::of(failures, plans.size());
  run.suppressed_timers = world.sessions->timers().suppressed_count();
  return run;
}

void merge_probe_stats(metrics::MetricReport& report,
                       const std::vector<CaseRun>& runs) {
  std::vector<metrics::ProbeRecord> clean;
  std::uint64_t fault_probe_hits = 0;
  std::uint64_t fault_probe_total = 0;
  bool coupling = true;
  for (const auto& run : runs) {
    clean.insert(clean.end(), run.clean_probes.begin(), run.clean_probes.end());
    for (const auto& probe : run.fault_probes) {
      ++fault_probe_total;
      canary::CanaryCorpus single{"probe", {probe.document}};
      if (leakage::leak_indicator(probe.response, single).leaked()) {
        ++fault_probe_hits;
      }
    }
    coupling = coupling && run.coupling_ok;
  }
  if (!clean.empty()) {
    report.bfr_clean_probes = metrics::bfr(clean);
    report.edm_clean_probes = metrics::edm(clean);
  }
  report.counts["clean_probes"] = clean.size();
  report.counts["fault_probes"] = fault_probe_total;
  report.counts["fault_probe_leak_evidence"] = fault_probe_hits;
  report.counts["coupling_ok"] = coupling && fault_probe_hits == fault_probe_total;
}

metrics::MetricReport run_bau_case(const Scenario& scenario,
                                   const std::filesystem::path& repo_root,
                                   int test_case, std::uint64_t seed) {
  CaseRun run;
  switch (test_case) {
    case 1: run = run_burn_case(scenario, repo_root, 1, seed); break;
    case 2: run = run_burn_case(scenario, repo_root, 2, seed); break;
    case 3: run = run_frame_case(scenario, repo_root, seed); break;
    case 4: run = run_timer_case(scenario, repo_root, seed); break;
    default: throw DomainError("unknown bau test case");
  }

  metrics::MetricReport report;
  report.scenario = scenario.name;
  report.seed = scenario.seed;
  switch (test_case) {
    case 1: report.lrpr = run.residual; break;
    case 2: report.rrpr = run.residual; break;
    case 3: report.ifer = run.residual; break;
    case 4:
      report.btpr = run.residual;
      report.counts["suppressed_timers"] = run.suppressed_timers;
      break;
  }
  report.counts["iterations"] = run.iterations;
  merge_probe_stats(report, {run});
  return report;
}

metrics::MetricReport run_bau_suite(const Scenario& scenario,
                                    const std::filesystem::path& repo_root,
                                    std::uint64_t seed) {
  CaseRun case1 = run_burn_case(scenario, repo_root, 1, seed + 1);
  CaseRun case2 = run_burn_case(scenario, repo_root, 2, seed + 2);
  CaseRun case3 = run_frame_case(scenario, repo_root, seed + 3);
  CaseRun case4 = run_timer_case(scenario, repo_root, seed + 4);

  metrics::MetricReport report;
  report.scenario = scenario.name;
  report.seed = scenario.seed;
  report.lrpr = case1.residual;
  report.rrpr = case2.residual;
  report.ifer = case3.residual;
  report.btpr = case4.residual;
  report.bau = metrics::bau_aggregate(*report.lrpr, *report.rrpr, *report.ifer,
                                      *report.btpr);

  report.counts["case1_iterations"] = case1.iterations;
  report.counts["case2_iterations"] = case2.iterations;
  report.counts["case3_units"] = case3.iterations;
  report.counts["case4_iterations"] = case4.iterations;
  report.counts["bau_iterations_total"] =
      case1.iterations + case2.iterations + case3.iterations + case4.iterations;
  report.counts["suppressed_timers"] = case4.suppressed_timers;
  merge_probe_stats(report, {case1, case2, case3, case4});

  report.footnotes.push_back(
      "Success rates are 1 - residual, rounded to whole percent before "
      "averaging; the unrounded average is reported alongside.");
  report.footnotes.push_back(
      "Test case 3 contributes frame-accounting units: 1 capturable frame of "
      "2 rendered, so total iterations = 30 + 30 + 2 + 10 = 72.");
  return report;
}

metrics::MetricReport run_full(const Scenario& scenario,
                               const std::filesystem::path& repo_root) {
  metrics::MetricReport cross = run_cross_tenant(scenario, repo_root, scenario.seed + 11);
  metrics::MetricReport cred =
      run_credential_attack(scenario, repo_root, scenario.seed + 12);
  metrics::MetricReport logleak = run_log_leak(scenario, repo_root, scenario.seed + 13);
  metrics::MetricReport suite = run_bau_suite(scenario, repo_root, scenario.seed + 14);

  metrics::MetricReport report = suite;  // carries bau + probe stats
  report.scenario = scenario.name;
  report.seed = scenario.seed;
  report.ctlr_strict = cross.ctlr_strict;
  report.ctlr_misconfigured = cross.ctlr_misconfigured;
  report.vclr = cred.vclr;
  report.tllr = logleak.tllr;

  std::uint64_t infra_failures = report.vclr->numerator + report.tllr->numerator;
  std::uint64_t infra_total = report.vclr->denominator + report.tllr->denominator;
  report.combined_defense = metrics::combined_defense_rate(infra_failures, infra_total);

  for (const auto& src : {cross, cred, logleak}) {
    for (const auto& [key, value] : src.counts) report.counts[key] = value;
    for (const auto& note : src.footnotes) report.footnotes.push_back(note);
  }
  report.counts["infrastructure_iterations_total"] = infra_total;
  report.counts["infrastructure_failures"] = infra_failures;
  return report;
}

}  // namespace

const std::vector<std::string>& Scenario::names() {
  static const std::vector<std::string> kNames = {
      "cross_tenant", "credential_attack", "log_leak", "bau_case_1",
      "bau_case_2",   "bau_case_3",        "bau_case_4", "bau_suite",
      "full"};
  return kNames;
}

metrics::MetricReport run_scenario(const Scenario& scenario) {
  std::filesystem::path repo_root = scenario.fixtures_dir.parent_path();
  if (repo_root.empty()) repo_root = ".";

  if (scenario.name == "cross_tenant") {
    return run_cross_tenant(scenario, repo_root, scenario.seed);
  }
  if (scenario.name == "credential_attack") {
    return run_credential_attack(scenario, repo_root, scenario.seed);
  }
  if (scenario.name == "log_leak") {
    return run_log_leak(scenario, repo_root, scenario.seed);
  }
  if (scenario.name == "bau_case_1") return run_bau_case(scenario, repo_root, 1, scenario.seed);
  if (scenario.name == "bau_case_2") return run_bau_case(scenario, repo_root, 2, scenario.seed);
  if (scenario.name == "bau_case_3") return run_bau_case(scenario, repo_root, 3, scenario.seed);
  if (scenario.name == "bau_case_4") return run_bau_case(scenario, repo_root, 4, scenario.seed);
  if (scenario.name == "bau_suite") return run_bau_suite(scenario, repo_root, scenario.seed);
  if (scenario.name == "full") return run_full(scenario, repo_root);
  throw DomainError("unknown scenario: " + scenario.name);
}

}  // namespace burngate::harness
