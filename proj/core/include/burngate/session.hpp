#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "burngate/artifacts.hpp"
#include "burngate/auth.hpp"
#include "burngate/extract.hpp"
#include "burngate/store.hpp"
#include "burngate/timekey.hpp"

namespace burngate::session {

enum class SessionState { active, burning, burned };
enum class BurnTrigger { timeout, user_terminate, completion };
const char* to_string(BurnTrigger trigger);
std::optional<BurnTrigger> trigger_from_string(std::string_view name);

/// Pure data description of injected failures. Replaying the same plan over
/// the same session script yields byte-identical receipts.
struct FaultPlan {
  enum class TimerAction { normal, suppress, delay };

  std::optional<std::size_t> crash_after_step;  // steps completed before crash
  bool drop_remote_delete = false;
  TimerAction timer_action = TimerAction::normal;
  std::uint64_t timer_delay_seconds = 0;
  std::uint64_t seed = 0;

  bool clean() const {
    return !crash_after_step && !drop_remote_delete &&
           timer_action == TimerAction::normal;
  }

  /// Structured-config form with keys crash_after_step, drop_remote_delete,
  /// timer_action, seed. Throws DomainError on malformed input.
  static FaultPlan parse(std::string_view json_text);
  std::string to_json_text() const;
};

struct BurnStepResult {
  artifacts::ArtifactRef artifact;
  bool deleted = false;
  std::string cause;  // set when !deleted: "crash", "network", "io"
};

struct BurnReceipt {
  std::string session_id;
  BurnTrigger trigger = BurnTrigger::completion;
  std::vector<BurnStepResult> steps;
  std::uint64_t started = 0;
  std::uint64_t finished = 0;
  bool complete = false;  // true iff every step deleted
  bool replay = false;    // burn of an already-burned session

  std::string to_json_text() const;
};

struct Turn {
  std::string role;
  std::string text;
};

/// SessionGone when gone == true; otherwise the residual evidence the
/// metrics pipeline classifies.
struct ProbeOutcome {
  bool gone = true;
  std::string detail;   // residual artifact handle or "live-context"
  std::string content;  // residual bytes / live context text
};

/// Pending burn timers on the injected clock. Suppressed timers never fire
/// and are tallied; delayed timers fire late, opening the observable race
/// window between window end and the actual burn.
class TimerScheduler {
 public:
  void schedule(const timekey::ContextId& session, std::uint64_t fire_at);
  void apply_fault(const timekey::ContextId& session,
                   FaultPlan::TimerAction action, std::uint64_t delay_seconds);
  void cancel(const timekey::ContextId& session);

  /// Timers due at `now`, removed from the pending set. Suppressed timers
  /// whose nominal time has passed move to the suppressed tally instead.
  std::vector<timekey::ContextId> collect_due(std::uint64_t now);

  std::size_t pending_count() const;
  std::size_t suppressed_count() const;
  std::optional<std::uint64_t> fire_time(const timekey::ContextId& session) const;

 private:
  struct Pending {
    timekey::ContextId session;
    std::uint64_t nominal_fire_at = 0;
    FaultPlan::TimerAction action = FaultPlan::TimerAction::normal;
    std::uint64_t delay = 0;
  };

  mutable std::mutex mu_;
  std::map<std::string, Pending> pending_;  // keyed by context hex, ordered
  std::size_t suppressed_ = 0;
};

struct SessionConfig {
  std::uint64_t max_duration = 86400;  // seconds
  bool remote_retry = false;           // acknowledged remote-delete retries
  bool client_file_cache = false;      // keep raw upload as a local_file artifact
};

/// Session table with per-session serialization: one state transition in
/// flight per session, queries see either the full active context or
/// nothing.
class SessionManager {
 public:
  SessionManager(const Clock& clock, Rng rng, artifacts::ArtifactVault& vault,
                 SessionConfig config);

  struct OpenOutcome {
    enum class Status { ok, expired_grant, window_too_long };
    Status status = Status::ok;
    timekey::ContextId id;

    bool ok() const { return status == Status::ok; }
  };
  OpenOutcome open_session(const auth::AuthGrant& grant,
                           const timekey::TemporalWindow& window);

  /// Attaches the iteration's fault plan: timer faults take effect on the
  /// scheduled burn timer, crash/drop faults on whichever burn fires next.
  void arm_fault_plan(const timekey::ContextId& id, const FaultPlan& plan);

  struct IngestOutcome {
    enum class Status { ok, session_not_active, unsupported_format, parse_failure };
    Status status = Status::ok;
    std::string text;

    bool ok() const { return status == Status::ok; }
  };
  IngestOutcome ingest_document(const timekey::ContextId& id, ByteView raw,
                                extract::DocFormat format);

  /// Burn never throws; failures become receipt entries. Burning an
  /// already-burned session replays its receipt unchanged.
  std::optional<BurnReceipt> burn(const timekey::ContextId& id,
                                  BurnTrigger trigger,
                                  const FaultPlan& faults = {});

  /// Fires every due timeout burn; returns the sessions burned now.
  std::vector<timekey::ContextId> tick(std::uint64_t now);

  ProbeOutcome post_burn_probe(const timekey::ContextId& id,
                               std::string_view probe) const;

  enum class Status { active, burning, burned, unknown };
  Status state(const timekey::ContextId& id) const;
  std::optional<std::string> tenant_of(const timekey::ContextId& id) const;
  std::optional<timekey::TemporalWindow> window_of(const timekey::ContextId& id) const;
  std::optional<BurnReceipt> receipt_of(const timekey::ContextId& id) const;

  struct ContextView {
    std::vector<Turn> turns;
    std::vector<store::Passage> passages;  // session-scoped ingested content
  };
  /// Snapshot of the live context; nullopt unless the session is active.
  std::optional<ContextView> snapshot(const timekey::ContextId& id) const;

  /// Appends one exchange and refreshes the dependent artifacts
  /// (conversation_history, kv_cache, session_log). False if not active.
  bool append_exchange(const timekey::ContextId& id, const Turn& user,
                       const Turn& assistant);

  std::vector<timekey::ContextId> active_sessions() const;
  const TimerScheduler& timers() const { return timers_; }
  TimerScheduler& timers() { return timers_; }
  artifacts::ArtifactVault& vault() { return vault_; }
  const SessionConfig& config() const { return config_; }

 private:
  struct Session {
    timekey::ContextId id;
    std::string tenant_id;
    timekey::TemporalWindow window;
    SessionState state = SessionState::active;
    std::vector<Turn> turns;
    std::vector<store::Passage> passages;
    std::vector<artifacts::ArtifactRef> registered;  // registration order
    std::unique_ptr<timekey::SeedHolder> seed;
    FaultPlan pending_faults;
    BurnReceipt receipt;
    int doc_counter = 0;
    mutable std::mutex mu;
  };

  std::shared_ptr<Session> find(const timekey::ContextId& id) const;
  void register_artifact(Session& s, artifacts::ArtifactKind kind,
                         std::string_view content, bool append);
  BurnReceipt burn_locked(Session& s, BurnTrigger trigger,
                          const FaultPlan& faults);

  const Clock& clock_;
  artifacts::ArtifactVault& vault_;
  SessionConfig config_;
  TimerScheduler timers_;

  mutable std::shared_mutex table_mu_;
  Rng rng_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace burngate::session
