#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "burngate/canary.hpp"
#include "burngate/leakage.hpp"

namespace burngate::metrics {

/// A measured rate kept as the exact rational next to any rounded display.
struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  /// Throws DomainError on a zero denominator or numerator > denominator.
  static Ratio of(std::uint64_t numerator, std::uint64_t denominator);

  double value() const;
  /// round(100 * num / den) with ties away from zero, in exact integer math.
  int percent_half_up() const;
  /// Same rounding applied to 1 - rate.
  int success_percent_half_up() const;
  /// "10%" when the percentage is exact, else "≈ 13%".
  std::string display() const;
  std::string success_display() const;
  /// Two-decimal residual column form, e.g. "0.13".
  std::string residual_display() const;

  bool operator==(const Ratio&) const = default;
};

struct AttackLogEntry {
  std::string attacker;
  std::string victim;
  std::string query;
  std::string response;
};

struct PairRate {
  std::string attacker;
  std::string victim;
  Ratio rate;
};

struct CtlrResult {
  std::vector<PairRate> pairwise;  // ordered by (attacker, victim)
  double overall = 0.0;            // unweighted mean over ordered pairs
};

/// Per-pair mean of the leak indicator, then the unweighted mean across the
/// ordered pairs present in the log. Throws DomainError on an empty log.
CtlrResult ctlr(std::span<const AttackLogEntry> attack_log,
                const std::map<std::string, canary::CanaryCorpus>& corpora);

struct ProbeRecord {
  canary::CanaryDocument document;  // the sensitive datum d_i
  std::string response;             // post-burn response r_i
};

/// Fraction of probes whose response leaks its own document.
Ratio bfr(std::span<const ProbeRecord> probes);
/// Fraction with response byte-equal to the document after whitespace
/// normalization. EDM <= BFR always (exact match implies leak).
Ratio edm(std::span<const ProbeRecord> probes);

struct BauAggregate {
  std::array<int, 4> success_rounded{};    // per case, whole percent, half-up
  double average_percent = 0;              // mean of the rounded values
  double bfr_aggregate_percent = 0;        // 100 - average
  std::array<double, 4> success_exact{};   // unrounded per-case successes
  double average_unrounded_percent = 0;
};

/// Per-case success = 1 - rate rounded to whole percent *before* averaging;
/// the unrounded variant is reported alongside.
BauAggregate bau_aggregate(const Ratio& lrpr, const Ratio& rrpr,
                           const Ratio& ifer, const Ratio& btpr);

struct DefenseRate {
  Ratio success;             // (total - failures) / total
  double percent_exact = 0;  // e.g. 92.7272...
  int percent_display = 0;   // floor to whole percent
  std::string display() const;
};
DefenseRate combined_defense_rate(std::uint64_t failures, std::uint64_t total);

/// Everything a scenario run can report. Serialization is deterministic:
/// identical runs produce byte-identical JSON.
struct MetricReport {
  std::string scenario;
  std::uint64_t seed = 0;

  std::optional<CtlrResult> ctlr_strict;
  std::optional<CtlrResult> ctlr_misconfigured;
  std::optional<Ratio> vclr;
  std::optional<Ratio> tllr;
  std::optional<Ratio> lrpr;
  std::optional<Ratio> rrpr;
  std::optional<Ratio> ifer;
  std::optional<Ratio> btpr;
  std::optional<Ratio> bfr_clean_probes;
  std::optional<Ratio> edm_clean_probes;
  std::optional<BauAggregate> bau;
  std::optional<DefenseRate> combined_defense;

  std::map<std::string, std::uint64_t> counts;
  std::vector<std::string> footnotes;

  std::string to_json_text() const;
  /// Fixed-width table; with a BAU aggregate present it mirrors the
  /// Name / Threat Type / Metric / Residual / Success Rate column order.
  std::string to_table_text() const;
};

}  // namespace burngate::metrics
