#include "burngate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

namespace burngate::metrics {

using nlohmann::ordered_json;

namespace {
std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}
}  // namespace

Ratio Ratio::of(std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0) throw DomainError("ratio: zero denominator");
  if (numerator > denominator) {
    throw DomainError("ratio: numerator exceeds denominator");
  }
  return Ratio{numerator, denominator};
}

double Ratio::value() const {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

int Ratio::percent_half_up() const {
  // floor((100*n + d/2) / d) without floating point.
  return static_cast<int>((200 * numerator + denominator) / (2 * denominator));
}

int Ratio::success_percent_half_up() const {
  std::uint64_t complement = denominator - numerator;
  return static_cast<int>((200 * complement + denominator) / (2 * denominator));
}

namespace {
std::string percent_string(std::uint64_t num, std::uint64_t den, int rounded) {
  bool exact = (100 * num) % den == 0;
  std::string out;
  if (!exact) out += "≈ ";
  out += std::to_string(rounded);
  out += '%';
  return out;
}
}  // namespace

std::string Ratio::display() const {
  return percent_string(numerator, denominator, percent_half_up());
}

std::string Ratio::success_display() const {
  return percent_string(denominator - numerator, denominator,
                        success_percent_half_up());
}

std::string Ratio::residual_display() const {
  return format_fixed(value(), 2);
}

CtlrResult ctlr(std::span<const AttackLogEntry> attack_log,
                const std::map<std::string, canary::CanaryCorpus>& corpora) {
  std::map<std::pair<std::string, std::string>, std::pair<std::uint64_t, std::uint64_t>>
      tally;  // (attacker, victim) -> (leaks, queries)
  for (const auto& entry : attack_log) {
    if (entry.attacker == entry.victim) {
      throw DomainError("ctlr: attacker equals victim in log");
    }
    auto corpus = corpora.find(entry.victim);
    if (corpus == corpora.end()) {
      throw DomainError("ctlr: no corpus for victim " + entry.victim);
    }
    auto& [leaks, queries] = tally[{entry.attacker, entry.victim}];
    ++queries;
    leaks += static_cast<std::uint64_t>(
        leakage::leak_indicator(entry.response, corpus->second).value);
  }
  if (tally.empty()) throw DomainError("ctlr: empty pair set");

  CtlrResult result;
  double sum = 0;
  for (const auto& [key, counts] : tally) {
    Ratio rate = Ratio::of(counts.first, counts.second);
    sum += rate.value();
    result.pairwise.push_back(PairRate{key.first, key.second, rate});
  }
  result.overall = sum / static_cast<double>(result.pairwise.size());
  return result;
}

Ratio bfr(std::span<const ProbeRecord> probes) {
  if (probes.empty()) throw DomainError("bfr: empty probe set");
  std::uint64_t leaks = 0;
  for (const auto& probe : probes) {
    canary::CanaryCorpus single{"probe", {probe.document}};
    leaks += static_cast<std::uint64_t>(
        leakage::leak_indicator(probe.response, single).value);
  }
  return Ratio::of(leaks, probes.size());
}

Ratio edm(std::span<const ProbeRecord> probes) {
  if (probes.empty()) throw DomainError("edm: empty probe set");
  std::uint64_t exact = 0;
  for (const auto& probe : probes) {
    if (leakage::normalize_ws(probe.response) ==
        leakage::normalize_ws(probe.document.text)) {
      ++exact;
    }
  }
  return Ratio::of(exact, probes.size());
}

BauAggregate bau_aggregate(const Ratio& lrpr, const Ratio& rrpr,
                           const Ratio& ifer, const Ratio& btpr) {
  const std::array<const Ratio*, 4> rates = {&lrpr, &rrpr, &ifer, &btpr};
  BauAggregate out;
  int sum_rounded = 0;
  double sum_exact = 0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    out.success_rounded[i] = rates[i]->success_percent_half_up();
    out.success_exact[i] = 100.0 * (1.0 - rates[i]->value());
    sum_rounded += out.success_rounded[i];
    sum_exact += out.success_exact[i];
  }
  out.average_percent = sum_rounded / 4.0;
  out.bfr_aggregate_percent = 100.0 - out.average_percent;
  out.average_unrounded_percent = sum_exact / 4.0;
  return out;
}

DefenseRate combined_defense_rate(std::uint64_t failures, std::uint64_t total) {
  if (total == 0) throw DomainError("defense rate: zero denominator");
  if (failures > total) throw DomainError("defense rate: failures > total");
  DefenseRate out;
  out.success = Ratio::of(total - failures, total);
  out.percent_exact = 100.0 * out.success.value();
  out.percent_display = static_cast<int>(100 * out.success.numerator /
                                         out.success.denominator);  // floor
  return out;
}

std::string DefenseRate::display() const {
  bool exact = (100 * success.numerator) % success.denominator == 0;
  std::string out;
  if (!exact) out += "≈ ";
  out += std::to_string(percent_display);
  out += '%';
  return out;
}

// ---------------------------------------------------------------- report --

namespace {
ordered_json ratio_json(const Ratio& r) {
  ordered_json out;
  out["numerator"] = r.numerator;
  out["denominator"] = r.denominator;
  out["rate_exact"] = r.value();
  out["rate_display"] = r.display();
  out["success_display"] = r.success_display();
  return out;
}

ordered_json ctlr_json(const CtlrResult& r) {
  ordered_json out;
  ordered_json pairs = ordered_json::array();
  for (const auto& pair : r.pairwise) {
    ordered_json p;
    p["attacker"] = pair.attacker;
    p["victim"] = pair.victim;
    p["numerator"] = pair.rate.numerator;
    p["denominator"] = pair.rate.denominator;
    p["rate_exact"] = pair.rate.value();
    pairs.push_back(std::move(p));
  }
  out["pairwise"] = std::move(pairs);
  out["overall"] = r.overall;
  return out;
}
}  // namespace

std::string MetricReport::to_json_text() const {
  ordered_json out;
  out["scenario"] = scenario;
  out["seed"] = seed;

  ordered_json m;
  if (ctlr_strict) m["ctlr"] = ctlr_json(*ctlr_strict);
  if (ctlr_misconfigured) m["ctlr_misconfigured"] = ctlr_json(*ctlr_misconfigured);
  if (vclr) m["vclr"] = ratio_json(*vclr);
  if (tllr) m["tllr"] = ratio_json(*tllr);
  if (lrpr) m["lrpr"] = ratio_json(*lrpr);
  if (rrpr) m["rrpr"] = ratio_json(*rrpr);
  if (ifer) m["ifer"] = ratio_json(*ifer);
  if (btpr) m["btpr"] = ratio_json(*btpr);
  if (bfr_clean_probes) m["bfr_clean_probes"] = ratio_json(*bfr_clean_probes);
  if (edm_clean_probes) m["edm_clean_probes"] = ratio_json(*edm_clean_probes);
  out["metrics"] = std::move(m);

  if (bau) {
    ordered_json b;
    b["success_rounded"] = bau->success_rounded;
    b["average_percent"] = bau->average_percent;
    b["bfr_aggregate_percent"] = bau->bfr_aggregate_percent;
    b["success_exact"] = bau->success_exact;
    b["average_unrounded_percent"] = bau->average_unrounded_percent;
    out["bau_aggregate"] = std::move(b);
  }
  if (combined_defense) {
    ordered_json d;
    d["failures"] = combined_defense->success.denominator -
                    combined_defense->success.numerator;
    d["total"] = combined_defense->success.denominator;
    d["percent_exact"] = combined_defense->percent_exact;
    d["display"] = combined_defense->display();
    out["combined_defense"] = std::move(d);
  }

  ordered_json counts_json;
  for (const auto& [key, value] : counts) counts_json[key] = value;
  out["counts"] = std::move(counts_json);
  out["footnotes"] = footnotes;
  out["table"] = to_table_text();
  return out.dump(2) + "\n";
}

namespace {
struct TableRow {
  std::string name, threat, metric, residual, success;
};

std::string render_rows(const std::vector<TableRow>& rows) {
  const std::array<std::string, 5> header = {"Name", "Threat Type", "Metric",
                                             "Residual", "Success Rate"};
  std::array<std::size_t, 5> width{};
  for (std::size_t c = 0; c < 5; ++c) width[c] = header[c].size();
  auto consider = [&](const TableRow& row) {
    width[0] = std::max(width[0], row.name.size());
    width[1] = std::max(width[1], row.threat.size());
    width[2] = std::max(width[2], row.metric.size());
    width[3] = std::max(width[3], row.residual.size());
    width[4] = std::max(width[4], row.success.size());
  };
  for (const auto& row : rows) consider(row);

  std::string out;
  auto emit = [&](const std::array<std::string, 5>& cells) {
    for (std::size_t c = 0; c < 5; ++c) {
      out += cells[c];
      if (c + 1 < 5) out += std::string(width[c] - cells[c].size() + 2, ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };
  emit(header);
  for (const auto& row : rows) {
    emit({row.name, row.threat, row.metric, row.residual, row.success});
  }
  return out;
}
}  // namespace

std::string MetricReport::to_table_text() const {
  std::string out;
  if (bau && lrpr && rrpr && ifer && btpr) {
    std::vector<TableRow> rows;
    rows.push_back({"Test Case 1", "Local cache deletion failure",
                    "LRPR (Local Residual Persistence Rate)",
                    lrpr->residual_display(),
                    std::to_string(bau->success_rounded[0]) + "%"});
    rows.push_back({"Test Case 2", "Remote cache persistence",
                    "RRPR (Remote Residual Persistence Rate)",
                    rrpr->residual_display(),
                    std::to_string(bau->success_rounded[1]) + "%"});
    rows.push_back({"Test Case 3", "OS-level screen exposure",
                    "IFER (Image Frame Exposure Rate)",
                    ifer->residual_display(),
                    std::to_string(bau->success_rounded[2]) + "%"});
    rows.push_back({"Test Case 4", "Burn timer race condition",
                    "BTPR (Burn Timer Persistence Rate)",
                    btpr->residual_display(),
                    std::to_string(bau->success_rounded[3]) + "%"});
    rows.push_back({"Average Rate", "", "", "",
                    format_fixed(bau->average_percent, 2) + "%"});
    out += render_rows(rows);
  }

  std::vector<std::pair<std::string, std::string>> lines;
  if (ctlr_strict) {
    lines.emplace_back("CTLR (strict)", format_fixed(ctlr_strict->overall, 4));
  }
  if (ctlr_misconfigured) {
    lines.emplace_back("CTLR (shared_misconfigured)",
                       format_fixed(ctlr_misconfigured->overall, 4));
  }
  if (vclr) {
    lines.emplace_back("VCLR", std::to_string(vclr->numerator) + "/" +
                                   std::to_string(vclr->denominator) + " = " +
                                   vclr->display() + ", success " +
                                   vclr->success_display());
  }
  if (tllr) {
    lines.emplace_back("TLLR", std::to_string(tllr->numerator) + "/" +
                                   std::to_string(tllr->denominator) + " = " +
                                   tllr->display());
  }
  if (combined_defense) {
    lines.emplace_back(
        "Combined defense rate",
        combined_defense->display() + " (exact " +
            format_fixed(combined_defense->percent_exact, 2) + "%)");
  }
  if (bfr_clean_probes) {
    lines.emplace_back("BFR (clean-burn probes)", bfr_clean_probes->residual_display());
  }
  if (edm_clean_probes) {
    lines.emplace_back("EDM (clean-burn probes)", edm_clean_probes->residual_display());
  }
  if (bau) {
    lines.emplace_back("BFR aggregate",
                       format_fixed(bau->bfr_aggregate_percent, 2) + "%");
    lines.emplace_back("Average (unrounded)",
                       format_fixed(bau->average_unrounded_percent, 2) + "%");
  }

  if (!lines.empty()) {
    if (!out.empty()) out += '\n';
    for (const auto& [label, value] : lines) {
      out += label + ": " + value + '\n';
    }
  }
  if (!footnotes.empty()) {
    out += '\n';
    for (std::size_t i = 0; i < footnotes.size(); ++i) {
      out += "[" + std::to_string(i + 1) + "] " + footnotes[i] + '\n';
    }
  }
  return out;
}

}  // namespace burngate::metrics
