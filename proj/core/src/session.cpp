#include "burngate/session.hpp"

#include <algorithm>

#include <json.hpp>

namespace burngate::session {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(BurnTrigger trigger) {
  switch (trigger) {
    case BurnTrigger::timeout: return "timeout";
    case BurnTrigger::user_terminate: return "user_terminate";
    case BurnTrigger::completion: return "completion";
  }
  return "?";
}

std::optional<BurnTrigger> trigger_from_string(std::string_view name) {
  if (name == "timeout") return BurnTrigger::timeout;
  if (name == "user_terminate") return BurnTrigger::user_terminate;
  if (name == "completion") return BurnTrigger::completion;
  return std::nullopt;
}

// ----------------------------------------------------------------- faults --

FaultPlan FaultPlan::parse(std::string_view json_text) {
  auto parsed = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw DomainError("fault plan: malformed json");
  }
  FaultPlan plan;
  if (parsed.contains("crash_after_step") && !parsed["crash_after_step"].is_null()) {
    plan.crash_after_step = parsed["crash_after_step"].get<std::size_t>();
  }
  plan.drop_remote_delete = parsed.value("drop_remote_delete", false);
  std::string timer = parsed.value("timer_action", "normal");
  if (timer == "normal") {
    plan.timer_action = TimerAction::normal;
  } else if (timer == "suppress") {
    plan.timer_action = TimerAction::suppress;
  } else if (timer == "delay") {
    plan.timer_action = TimerAction::delay;
    plan.timer_delay_seconds = parsed.value("timer_delay_seconds", std::uint64_t{0});
  } else {
    throw DomainError("fault plan: unknown timer_action '" + timer + "'");
  }
  plan.seed = parsed.value("seed", std::uint64_t{0});
  return plan;
}

std::string FaultPlan::to_json_text() const {
  ordered_json out;
  if (crash_after_step) {
    out["crash_after_step"] = *crash_after_step;
  } else {
    out["crash_after_step"] = nullptr;
  }
  out["drop_remote_delete"] = drop_remote_delete;
  switch (timer_action) {
    case TimerAction::normal: out["timer_action"] = "normal"; break;
    case TimerAction::suppress: out["timer_action"] = "suppress"; break;
    case TimerAction::delay:
      out["timer_action"] = "delay";
      out["timer_delay_seconds"] = timer_delay_seconds;
      break;
  }
  out["seed"] = seed;
  return out.dump();
}

std::string BurnReceipt::to_json_text() const {
  ordered_json out;
  out["session_id"] = session_id;
  out["trigger"] = to_string(trigger);
  ordered_json steps_json = ordered_json::array();
  for (const auto& step : steps) {
    ordered_json s;
    s["kind"] = artifacts::to_string(step.artifact.kind);
    s["location"] =
        step.artifact.location == artifacts::Location::local ? "local" : "remote";
    s["handle"] = step.artifact.handle;
    s["outcome"] = step.deleted ? "deleted" : "failed";
    if (!step.deleted) s["cause"] = step.cause;
    steps_json.push_back(std::move(s));
  }
  out["steps"] = std::move(steps_json);
  out["started"] = started;
  out["finished"] = finished;
  out["complete"] = complete;
  out["replay"] = replay;
  return out.dump();
}

// ----------------------------------------------------------------- timers --

void TimerScheduler::schedule(const timekey::ContextId& session,
                              std::uint64_t fire_at) {
  std::lock_guard lock(mu_);
  pending_[session.hex()] = Pending{session, fire_at, FaultPlan::TimerAction::normal, 0};
}

void TimerScheduler::apply_fault(const timekey::ContextId& session,
                                 FaultPlan::TimerAction action,
                                 std::uint64_t delay_seconds) {
  std::lock_guard lock(mu_);
  auto it = pending_.find(session.hex());
  if (it == pending_.end()) return;
  it->second.action = action;
  it->second.delay = delay_seconds;
}

void TimerScheduler::cancel(const timekey::ContextId& session) {
  std::lock_guard lock(mu_);
  pending_.erase(session.hex());
}

std::vector<timekey::ContextId> TimerScheduler::collect_due(std::uint64_t now) {
  std::lock_guard lock(mu_);
  std::vector<timekey::ContextId> due;
  for (auto it = pending_.begin(); it != pending_.end();) {
    const Pending& p = it->second;
    if (p.action == FaultPlan::TimerAction::suppress) {
      if (p.nominal_fire_at <= now) {
        ++suppressed_;  // the scheduled timer did not fire its invalidation
        it = pending_.erase(it);
        continue;
      }
      ++it;
      continue;
    }
    std::uint64_t effective = p.nominal_fire_at +
                              (p.action == FaultPlan::TimerAction::delay ? p.delay : 0);
    if (effective <= now) {
      due.push_back(p.session);
      it = pending_.erase(it);
    } else {
      ++it;
    }
  }
  return due;
}

std::size_t TimerScheduler::pending_count() const {
  std::lock_guard lock(mu_);
  return pending_.size();
}

std::size_t TimerScheduler::suppressed_count() const {
  std::lock_guard lock(mu_);
  return suppressed_;
}

std::optional<std::uint64_t> TimerScheduler::fire_time(
    const timekey::ContextId& session) const {
  std::lock_guard lock(mu_);
  auto it = pending_.find(session.hex());
  if (it == pending_.end()) return std::nullopt;
  if (it->second.action == FaultPlan::TimerAction::suppress) return std::nullopt;
  return it->second.nominal_fire_at +
         (it->second.action == FaultPlan::TimerAction::delay ? it->second.delay : 0);
}

// ---------------------------------------------------------------- manager --

SessionManager::SessionManager(const Clock& clock, Rng rng,
                               artifacts::ArtifactVault& vault,
                               SessionConfig config)
    : clock_(clock), vault_(vault), config_(config), rng_(std::move(rng)) {}

std::shared_ptr<SessionManager::Session> SessionManager::find(
    const timekey::ContextId& id) const {
  std::shared_lock lock(table_mu_);
  auto it = sessions_.find(id.hex());
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionManager::register_artifact(Session& s, artifacts::ArtifactKind kind,
                                       std::string_view content, bool append) {
  artifacts::ArtifactRef ref = append ? vault_.append(s.id, kind, content)
                                      : vault_.put(s.id, kind, content);
  auto known = std::find_if(s.registered.begin(), s.registered.end(),
                            [&](const auto& r) { return r.handle == ref.handle; });
  if (known == s.registered.end()) s.registered.push_back(std::move(ref));
}

SessionManager::OpenOutcome SessionManager::open_session(
    const auth::AuthGrant& grant, const timekey::TemporalWindow& window) {
  OpenOutcome out;
  if (clock_.now() >= grant.expires_at) {
    out.status = OpenOutcome::Status::expired_grant;
    return out;
  }
  if (window.duration == 0 || window.duration > config_.max_duration) {
    out.status = OpenOutcome::Status::window_too_long;
    return out;
  }

  auto s = std::make_shared<Session>();
  {
    std::unique_lock lock(table_mu_);
    s->id = timekey::ContextId::random(rng_);
    while (sessions_.count(s->id.hex())) s->id = timekey::ContextId::random(rng_);
    s->tenant_id = grant.tenant_id;
    s->window = window;
    crypto::Key256 seed{};
    rng_.fill(seed);
    s->seed = std::make_unique<timekey::SeedHolder>(seed);
    crypto::secure_wipe(seed);
    sessions_.emplace(s->id.hex(), s);
  }

  {
    std::lock_guard lock(s->mu);
    register_artifact(*s, artifacts::ArtifactKind::metadata,
                      "tenant=" + s->tenant_id +
                          " start=" + std::to_string(window.start) +
                          " duration=" + std::to_string(window.duration) + "\n",
                      /*append=*/false);
    register_artifact(*s, artifacts::ArtifactKind::conversation_history, "",
                      /*append=*/false);
    register_artifact(*s, artifacts::ArtifactKind::session_log,
                      "session opened\n", /*append=*/false);
  }
  timers_.schedule(s->id, window.end());

  out.id = s->id;
  return out;
}

void SessionManager::arm_fault_plan(const timekey::ContextId& id,
                                    const FaultPlan& plan) {
  auto s = find(id);
  if (!s) return;
  {
    std::lock_guard lock(s->mu);
    s->pending_faults = plan;
  }
  if (plan.timer_action != FaultPlan::TimerAction::normal) {
    timers_.apply_fault(id, plan.timer_action, plan.timer_delay_seconds);
  }
}

SessionManager::IngestOutcome SessionManager::ingest_document(
    const timekey::ContextId& id, ByteView raw, extract::DocFormat format) {
  IngestOutcome out;
  auto s = find(id);
  if (!s) {
    out.status = IngestOutcome::Status::session_not_active;
    return out;
  }
  std::lock_guard lock(s->mu);
  if (s->state != SessionState::active) {
    out.status = IngestOutcome::Status::session_not_active;
    return out;
  }

  auto extracted = extract::extract_text(raw, format);
  if (!extracted.ok()) {
    out.status = extracted.status == extract::ExtractOutcome::Status::unsupported_format
                     ? IngestOutcome::Status::unsupported_format
                     : IngestOutcome::Status::parse_failure;
    return out;
  }

  std::string doc_id = "session-doc-" + std::to_string(s->doc_counter++);
  store::Passage passage{s->tenant_id, doc_id, 0, extracted.text};
  s->passages.push_back(std::move(passage));

  // The raw file is not retained; only the plain-text representation and its
  // derived caches are, unless the client file cache is explicitly on.
  register_artifact(*s, artifacts::ArtifactKind::runtime_buffer,
                    extracted.text, /*append=*/true);
  register_artifact(*s, artifacts::ArtifactKind::session_embedding,
                    "embedding-source:\n" + extracted.text, /*append=*/true);
  register_artifact(*s, artifacts::ArtifactKind::remote_cache,
                    "remote-vectors:\n" + extracted.text, /*append=*/true);
  register_artifact(*s, artifacts::ArtifactKind::session_log,
                    "ingest " + doc_id + " format=" + extract::to_string(format) + "\n",
                    /*append=*/true);
  if (config_.client_file_cache) {
    register_artifact(*s, artifacts::ArtifactKind::local_file,
                      burngate::to_string(raw), /*append=*/true);
  }

  out.text = std::move(extracted.text);
  return out;
}

std::optional<SessionManager::ContextView> SessionManager::snapshot(
    const timekey::ContextId& id) const {
  auto s = find(id);
  if (!s) return std::nullopt;
  std::lock_guard lock(s->mu);
  if (s->state != SessionState::active) return std::nullopt;
  ContextView view;
  view.turns = s->turns;
  view.passages = s->passages;
  return view;
}

bool SessionManager::append_exchange(const timekey::ContextId& id,
                                     const Turn& user, const Turn& assistant) {
  auto s = find(id);
  if (!s) return false;
  std::lock_guard lock(s->mu);
  if (s->state != SessionState::active) return false;
  s->turns.push_back(user);
  s->turns.push_back(assistant);

  register_artifact(*s, artifacts::ArtifactKind::conversation_history,
                    user.role + ": " + user.text + "\n" + assistant.role + ": " +
                        assistant.text + "\n",
                    /*append=*/true);
  register_artifact(*s, artifacts::ArtifactKind::kv_cache,
                    "kv entries for " + std::to_string(s->turns.size()) + " turns\n",
                    /*append=*/false);
  register_artifact(*s, artifacts::ArtifactKind::session_log,
                    "query len=" + std::to_string(user.text.size()) + "\n",
                    /*append=*/true);
  return true;
}

BurnReceipt SessionManager::burn_locked(Session& s, BurnTrigger trigger,
                                        const FaultPlan& faults) {
  if (s.state == SessionState::burned) {
    BurnReceipt replayed = s.receipt;
    replayed.replay = true;
    return replayed;
  }
  s.state = SessionState::burning;

  BurnReceipt receipt;
  receipt.session_id = s.id.hex();
  receipt.trigger = trigger;
  receipt.started = clock_.now();

  // Plan: every registered artifact exactly once, in kBurnOrder; locals
  // precede the remote step by construction.
  std::vector<artifacts::ArtifactRef> plan;
  for (artifacts::ArtifactKind kind : artifacts::kBurnOrder) {
    for (const auto& ref : s.registered) {
      if (ref.kind == kind) plan.push_back(ref);
    }
  }

  for (std::size_t i = 0; i < plan.size(); ++i) {
    BurnStepResult step;
    step.artifact = plan[i];
    if (faults.crash_after_step && i >= *faults.crash_after_step) {
      step.cause = "crash";  // deletion loop abandoned; artifact persists
    } else if (plan[i].kind == artifacts::ArtifactKind::remote_cache &&
               faults.drop_remote_delete && !config_.remote_retry) {
      step.cause = "network";  // single-shot delete lost in transit
    } else {
      if (vault_.remove(plan[i])) {
        step.deleted = true;
      } else {
        step.cause = "io";
      }
    }
    receipt.steps.push_back(std::move(step));
  }

  s.seed->destroy(clock_.now());
  s.turns.clear();
  s.passages.clear();

  receipt.finished = clock_.now();
  receipt.complete = std::all_of(receipt.steps.begin(), receipt.steps.end(),
                                 [](const auto& st) { return st.deleted; });
  s.receipt = receipt;
  s.state = SessionState::burned;
  return receipt;
}

std::optional<BurnReceipt> SessionManager::burn(const timekey::ContextId& id,
                                                BurnTrigger trigger,
                                                const FaultPlan& faults) {
  auto s = find(id);
  if (!s) return std::nullopt;
  timers_.cancel(id);
  std::lock_guard lock(s->mu);
  return burn_locked(*s, trigger, faults);
}

std::vector<timekey::ContextId> SessionManager::tick(std::uint64_t now) {
  std::vector<timekey::ContextId> burned;
  for (const timekey::ContextId& id : timers_.collect_due(now)) {
    auto s = find(id);
    if (!s) continue;
    FaultPlan faults;
    {
      std::lock_guard lock(s->mu);
      faults = s->pending_faults;
    }
    if (burn(id, BurnTrigger::timeout, faults)) burned.push_back(id);
  }
  return burned;
}

ProbeOutcome SessionManager::post_burn_probe(const timekey::ContextId& id,
                                             std::string_view probe) const {
  (void)probe;  // the probe text matters to the caller's classifier, not here
  ProbeOutcome out;

  if (auto s = find(id)) {
    std::lock_guard lock(s->mu);
    if (s->state == SessionState::active) {
      out.gone = false;
      out.detail = "live-context";
      for (const auto& turn : s->turns) {
        out.content += turn.role + ": " + turn.text + "\n";
      }
      for (const auto& passage : s->passages) {
        out.content += passage.text;
        out.content += '\n';
      }
      return out;
    }
  }

  std::vector<artifacts::ArtifactRef> residual = vault_.list_for(id);
  if (!residual.empty()) {
    out.gone = false;
    out.detail = residual.front().handle;
    for (const auto& ref : residual) {
      if (auto content = vault_.read(ref)) out.content += *content;
    }
    return out;
  }
  return out;  // SessionGone
}

SessionManager::Status SessionManager::state(const timekey::ContextId& id) const {
  auto s = find(id);
  if (!s) return Status::unknown;
  std::lock_guard lock(s->mu);
  switch (s->state) {
    case SessionState::active: return Status::active;
    case SessionState::burning: return Status::burning;
    case SessionState::burned: return Status::burned;
  }
  return Status::unknown;
}

std::optional<std::string> SessionManager::tenant_of(
    const timekey::ContextId& id) const {
  auto s = find(id);
  if (!s) return std::nullopt;
  return s->tenant_id;
}

std::optional<timekey::TemporalWindow> SessionManager::window_of(
    const timekey::ContextId& id) const {
  auto s = find(id);
  if (!s) return std::nullopt;
  return s->window;
}

std::optional<BurnReceipt> SessionManager::receipt_of(
    const timekey::ContextId& id) const {
  auto s = find(id);
  if (!s) return std::nullopt;
  std::lock_guard lock(s->mu);
  if (s->state != SessionState::burned) return std::nullopt;
  return s->receipt;
}

std::vector<timekey::ContextId> SessionManager::active_sessions() const {
  std::shared_lock lock(table_mu_);
  std::vector<timekey::ContextId> out;
  for (const auto& [hex, s] : sessions_) {
    std::lock_guard session_lock(s->mu);
    if (s->state == SessionState::active) out.push_back(s->id);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.hex() < b.hex();
  });
  return out;
}

}  // namespace burngate::session
