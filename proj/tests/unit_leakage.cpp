#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "burngate/broker.hpp"
#include "burngate/leakage.hpp"
#include "burngate/metrics.hpp"

using namespace burngate;
using namespace burngate::leakage;
using namespace burngate::metrics;

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

canary::CanaryCorpus salary_corpus() {
  return canary::CanaryCorpus::load_dir(
      "H", std::string(BURNGATE_ROOT) + "/fixtures/corpora/tenant_h");
}
}  // namespace

TEST_CASE("normalization") {
  CHECK(normalize_ws("  Hello\n\tWorld  ") == "hello world");
  CHECK(normalize_for_ngrams("Revenue: 18.3M (up 11%)!") == "revenue 18 3m up 11");
}

TEST_CASE("canary markers are found, case-insensitively, across whitespace") {
  auto corpus = salary_corpus();
  std::string marker = corpus.documents.front().markers.front();

  std::string lowered;
  for (char c : marker) lowered.push_back(static_cast<char>(std::tolower(c)));
  CHECK(leak_indicator("prefix " + lowered + " suffix", corpus).leaked());

  std::string spaced = "x\n" + marker + "\t\ny";
  auto verdict = leak_indicator(spaced, corpus);
  CHECK(verdict.leaked());
  CHECK(verdict.basis == LeakVerdict::Basis::exact_marker);
  CHECK(verdict.matched == marker);
}

TEST_CASE("marker scanning and redaction") {
  CHECK(canary::contains_marker("see CNRY-H-SALARY-abcd1234 here"));
  CHECK(!canary::contains_marker("see CNRY-H-SALARY-abc here"));  // short tag
  CHECK(canary::redact_markers("a CNRY-F-BUDGET-zz11xx22 b") == "a [REDACTED] b");
  CHECK(canary::redact_markers("CNRY- not a marker") == "CNRY- not a marker");
}

// The paraphrase fixture preserves 43 of the salary document's 57 word
// 3-grams (verified with an independent script), well above the 0.5
// threshold, and carries no marker.
TEST_CASE("paraphrase fixture trips the ngram detector") {
  auto corpus = salary_corpus();
  std::string paraphrase = read_file(std::string(BURNGATE_ROOT) +
                                     "/fixtures/paraphrase/salary_paraphrase.txt");
  CHECK(!canary::contains_marker(paraphrase));

  auto doc_grams = word_trigrams(corpus.find_document("salary")->text);
  auto para_grams = word_trigrams(paraphrase);
  CHECK(doc_grams.size() == 57);
  CHECK(trigram_containment(para_grams, doc_grams) ==
        doctest::Approx(43.0 / 57.0));

  auto verdict = leak_indicator(paraphrase, corpus);
  CHECK(verdict.leaked());
  CHECK(verdict.basis == LeakVerdict::Basis::ngram_overlap);
  CHECK(verdict.matched == "salary");
}

TEST_CASE("the refusal template never trips the detector") {
  for (const char* tenant_dir : {"tenant_h", "tenant_f", "tenant_r"}) {
    auto corpus = canary::CanaryCorpus::load_dir(
        tenant_dir, std::string(BURNGATE_ROOT) + "/fixtures/corpora/" + tenant_dir);
    CHECK(!leak_indicator(std::string(broker::kRefusalTemplate), corpus).leaked());
  }
}

TEST_CASE("leak indicator is monotone under concatenation") {
  auto corpus = salary_corpus();
  std::string paraphrase = read_file(std::string(BURNGATE_ROOT) +
                                     "/fixtures/paraphrase/salary_paraphrase.txt");
  Rng rng(3);
  std::vector<std::string> leaking = {
      "x " + corpus.documents.front().markers.front() + " y", paraphrase};
  for (const auto& base : leaking) {
    REQUIRE(leak_indicator(base, corpus).leaked());
    for (int i = 0; i < 20; ++i) {
      std::string suffix = " " + rng.alnum(1 + rng.below(200));
      CHECK(leak_indicator(base + suffix, corpus).leaked());
      CHECK(leak_indicator(suffix + " " + base, corpus).leaked());
    }
  }
}

TEST_CASE("ratio arithmetic and displays") {
  CHECK_THROWS_AS(Ratio::of(1, 0), DomainError);
  CHECK_THROWS_AS(Ratio::of(3, 2), DomainError);

  auto vclr = Ratio::of(2, 35);
  CHECK(vclr.value() == doctest::Approx(0.0571428));
  CHECK(vclr.display() == "≈ 6%");
  CHECK(vclr.success_display() == "≈ 94%");

  auto tllr = Ratio::of(2, 20);
  CHECK(tllr.value() == doctest::Approx(0.10));
  CHECK(tllr.display() == "10%");

  auto lrpr = Ratio::of(3, 30);
  CHECK(lrpr.success_percent_half_up() == 90);
  auto rrpr = Ratio::of(4, 30);
  CHECK(rrpr.display() == "≈ 13%");
  CHECK(rrpr.residual_display() == "0.13");
  // Rounding is half-up: 86.67 -> 87.
  CHECK(rrpr.success_percent_half_up() == 87);
  auto ifer = Ratio::of(1, 2);
  CHECK(ifer.residual_display() == "0.50");
  auto btpr = Ratio::of(2, 10);
  CHECK(btpr.success_percent_half_up() == 80);
}

TEST_CASE("ctlr: hand-computed two-level mean") {
  canary::CanaryDocument doc;
  doc.id = "d";
  doc.text = "Marker CNRY-V-D-aaaa1111 inside";
  doc.markers = {"CNRY-V-D-aaaa1111"};
  std::map<std::string, canary::CanaryCorpus> corpora;
  for (const char* victim : {"A", "B", "C"}) {
    canary::CanaryDocument copy = doc;
    copy.markers[0] = std::string("CNRY-") + victim + "-D-aaaa1111";
    copy.text = "Marker " + copy.markers[0] + " inside";
    corpora.emplace(victim, canary::CanaryCorpus::from_documents(victim, {copy}));
  }

  std::vector<AttackLogEntry> log;
  const char* tenants[] = {"A", "B", "C"};
  for (const char* attacker : tenants) {
    for (const char* victim : tenants) {
      if (attacker == victim) continue;
      for (int q = 0; q < 10; ++q) {
        std::string response = "refused";
        // one pair leaks exactly 1 of its 10 queries
        if (std::string(attacker) == "A" && std::string(victim) == "B" && q == 0) {
          response = corpora.at("B").documents[0].text;
        }
        log.push_back({attacker, victim, "q", response});
      }
    }
  }
  auto result = ctlr(log, corpora);
  CHECK(result.pairwise.size() == 6);
  CHECK(result.overall == doctest::Approx(0.1 / 6.0));

  // Overall equals the mean of pairwise rates, recomputed independently.
  double sum = 0;
  for (const auto& pair : result.pairwise) sum += pair.rate.value();
  CHECK(result.overall == doctest::Approx(sum / 6.0));

  std::vector<AttackLogEntry> empty;
  CHECK_THROWS_AS(ctlr(empty, corpora), DomainError);
}

TEST_CASE("ctlr trivial extremes") {
  canary::CanaryDocument doc;
  doc.id = "d";
  doc.text = "Marker CNRY-V-D-bbbb2222 body";
  std::map<std::string, canary::CanaryCorpus> corpora;
  corpora.emplace("V", canary::CanaryCorpus::from_documents("V", {doc}));

  std::vector<AttackLogEntry> all_leak;
  for (int q = 0; q < 5; ++q) all_leak.push_back({"A", "V", "q", doc.text});
  CHECK(ctlr(all_leak, corpora).overall == doctest::Approx(1.0));

  std::vector<AttackLogEntry> clean;
  for (int q = 0; q < 5; ++q) clean.push_back({"A", "V", "q", "no"});
  CHECK(ctlr(clean, corpora).overall == doctest::Approx(0.0));
}

TEST_CASE("bfr and edm") {
  canary::CanaryDocument doc;
  doc.id = "d0";
  doc.text = "Secret content CNRY-S-D0-cccc3333 end";
  doc.markers = {"CNRY-S-D0-cccc3333"};

  std::vector<ProbeRecord> probes;
  for (int i = 0; i < 9; ++i) probes.push_back({doc, "session gone"});
  probes.push_back({doc, "Secret   content CNRY-S-D0-cccc3333 end"});

  CHECK(bfr(probes) == Ratio::of(1, 10));
  CHECK(edm(probes) == Ratio::of(1, 10));  // whitespace-normalized equality

  // A paraphrase counts for BFR but not EDM.
  std::vector<ProbeRecord> mixed = probes;
  mixed.push_back({doc, "prefix CNRY-S-D0-cccc3333 with other words"});
  auto b = bfr(mixed);
  auto e = edm(mixed);
  CHECK(b == Ratio::of(2, 11));
  CHECK(e == Ratio::of(1, 11));
  CHECK(e.value() <= b.value());

  std::vector<ProbeRecord> none;
  CHECK_THROWS_AS(bfr(none), DomainError);
  CHECK_THROWS_AS(edm(none), DomainError);
}

TEST_CASE("edm <= bfr over random probe mixes") {
  Rng rng(8);
  canary::CanaryDocument doc;
  doc.id = "d";
  doc.text = "Alpha beta gamma CNRY-S-D-dddd4444 delta";
  doc.markers = {"CNRY-S-D-dddd4444"};
  for (int round = 0; round < 50; ++round) {
    std::vector<ProbeRecord> probes;
    std::size_t n = 1 + rng.below(12);
    for (std::size_t i = 0; i < n; ++i) {
      switch (rng.below(3)) {
        case 0: probes.push_back({doc, doc.text}); break;
        case 1: probes.push_back({doc, "gone"}); break;
        default: probes.push_back({doc, "echo " + doc.markers[0]}); break;
      }
    }
    CHECK(edm(probes).value() <= bfr(probes).value());
  }
}

TEST_CASE("bau aggregate reproduces the rounded-then-averaged convention") {
  auto agg = bau_aggregate(Ratio::of(3, 30), Ratio::of(4, 30), Ratio::of(1, 2),
                           Ratio::of(2, 10));
  CHECK(agg.success_rounded == std::array<int, 4>{90, 87, 50, 80});
  CHECK(agg.average_percent == doctest::Approx(76.75));
  CHECK(agg.bfr_aggregate_percent == doctest::Approx(23.25));
  CHECK(agg.average_unrounded_percent == doctest::Approx(76.6666667));

  auto zero = bau_aggregate(Ratio::of(0, 30), Ratio::of(0, 30), Ratio::of(0, 2),
                            Ratio::of(0, 10));
  CHECK(zero.average_percent == doctest::Approx(100.0));
  CHECK(zero.bfr_aggregate_percent == doctest::Approx(0.0));
}

TEST_CASE("combined defense rate display truncates to match the pinned 92%") {
  auto rate = combined_defense_rate(4, 55);
  CHECK(rate.percent_exact == doctest::Approx(92.7272727));
  CHECK(rate.display() == "≈ 92%");

  CHECK(combined_defense_rate(0, 55).display() == "100%");
  CHECK(combined_defense_rate(55, 55).display() == "0%");
  CHECK_THROWS_AS(combined_defense_rate(1, 0), DomainError);
  CHECK_THROWS_AS(combined_defense_rate(9, 5), DomainError);
}

TEST_CASE("report table mirrors the expected column order") {
  MetricReport report;
  report.scenario = "bau_suite";
  report.lrpr = Ratio::of(3, 30);
  report.rrpr = Ratio::of(4, 30);
  report.ifer = Ratio::of(1, 2);
  report.btpr = Ratio::of(2, 10);
  report.bau = bau_aggregate(*report.lrpr, *report.rrpr, *report.ifer, *report.btpr);

  std::string table = report.to_table_text();
  auto pos_name = table.find("Name");
  auto pos_threat = table.find("Threat Type");
  auto pos_metric = table.find("Metric");
  auto pos_residual = table.find("Residual");
  auto pos_success = table.find("Success Rate");
  REQUIRE(pos_name != std::string::npos);
  CHECK(pos_name < pos_threat);
  CHECK(pos_threat < pos_metric);
  CHECK(pos_metric < pos_residual);
  CHECK(pos_residual < pos_success);
  CHECK(table.find("Average Rate") != std::string::npos);
  CHECK(table.find("76.75%") != std::string::npos);
  CHECK(table.find("0.13") != std::string::npos);
}
