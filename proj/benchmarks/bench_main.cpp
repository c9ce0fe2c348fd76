#include <benchmark/benchmark.h>

#include "burngate/leakage.hpp"
#include "burngate/mnemonic.hpp"
#include "burngate/sealed.hpp"
#include "burngate/store.hpp"

using namespace burngate;

namespace {

canary::CanaryCorpus bench_corpus() {
  std::vector<canary::CanaryDocument> docs;
  Rng rng(404);
  for (int d = 0; d < 8; ++d) {
    canary::CanaryDocument doc;
    doc.id = "doc" + std::to_string(d);
    for (int line = 0; line < 40; ++line) {
      doc.text += "record line " + std::to_string(line) + " value " +
                  rng.alnum(12) + "\n";
    }
    doc.text += "marker CNRY-B-D" + std::to_string(d) + "-bench00" +
                std::to_string(d) + "\n";  // 8-char tag
    docs.push_back(std::move(doc));
  }
  return canary::CanaryCorpus::from_documents("B", std::move(docs));
}

void BM_LeakIndicatorClean(benchmark::State& state) {
  auto corpus = bench_corpus();
  std::string response =
      "This response paraphrases nothing and quotes no record lines at all; "
      "it talks about weather, scheduling and lunch plans instead.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(leakage::leak_indicator(response, corpus));
  }
}
BENCHMARK(BM_LeakIndicatorClean);

void BM_LeakIndicatorMarkerHit(benchmark::State& state) {
  auto corpus = bench_corpus();
  std::string response = "quoting " + corpus.documents[5].markers[0] + " here";
  for (auto _ : state) {
    benchmark::DoNotOptimize(leakage::leak_indicator(response, corpus));
  }
}
BENCHMARK(BM_LeakIndicatorMarkerHit);

void BM_RetrievalRanking(benchmark::State& state) {
  store::PassageStore passage_store("B", {"B", "secret", {}});
  auto corpus = bench_corpus();
  for (const auto& doc : corpus.documents) {
    passage_store.ingest_document(doc.id, doc.text);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        passage_store.retrieve_unchecked("record value line 17", 3));
  }
}
BENCHMARK(BM_RetrievalRanking);

void BM_SealUnseal4k(benchmark::State& state) {
  Rng rng(405);
  Bytes plaintext(4096);
  rng.fill(plaintext);
  crypto::Key256 seed{};
  auto window = timekey::TemporalWindow::make(0, 3600);
  auto cid = timekey::ContextId::random(rng);
  for (auto _ : state) {
    auto doc = timekey::seal(plaintext, seed, window, cid, rng);
    auto out = timekey::unseal(doc, seed, 10);
    benchmark::DoNotOptimize(out);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 4096);
}
BENCHMARK(BM_SealUnseal4k);

void BM_MnemonicRoundTrip(benchmark::State& state) {
  auto wordlist = mnemonic::Wordlist::load_file("fixtures/wordlist-2048.txt");
  Rng rng(406);
  auto seed = mnemonic::EntropySeed::random(rng);
  for (auto _ : state) {
    auto phrase = mnemonic::generate_mnemonic(seed, wordlist);
    benchmark::DoNotOptimize(mnemonic::parse_mnemonic(phrase, wordlist));
  }
}
BENCHMARK(BM_MnemonicRoundTrip);

}  // namespace

BENCHMARK_MAIN();
