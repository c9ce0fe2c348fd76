#include "burngate/store.hpp"

#include <algorithm>
#include <unordered_map>

#include "burngate/crypto.hpp"
#include "burngate/leakage.hpp"

namespace burngate::store {

namespace {
std::vector<std::string> terms_of(std::string_view text) {
  std::string normalized = leakage::normalize_for_ngrams(text);
  std::vector<std::string> terms;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    std::size_t space = normalized.find(' ', pos);
    if (space == std::string::npos) space = normalized.size();
    terms.emplace_back(normalized.substr(pos, space - pos));
    pos = space + 1;
  }
  return terms;
}

std::vector<std::string> split_paragraphs(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    if (line.empty()) {
      if (!current.empty()) {
        out.push_back(std::move(current));
        current.clear();
      }
    } else {
      if (!current.empty()) current.push_back('\n');
      current.append(line);
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}
}  // namespace

double score_passage(std::string_view query, const Passage& passage) {
  std::unordered_map<std::string, int> freq;
  for (auto& term : terms_of(passage.text)) ++freq[term];
  double score = 0;
  for (auto& term : terms_of(query)) {
    auto it = freq.find(term);
    if (it != freq.end()) score += it->second;
  }
  return score;
}

std::vector<Passage> rank_passages(std::string_view query,
                                   std::vector<Passage> candidates,
                                   std::size_t k) {
  std::vector<std::pair<double, Passage>> scored;
  scored.reserve(candidates.size());
  for (auto& passage : candidates) {
    double s = score_passage(query, passage);
    if (s > 0) scored.emplace_back(s, std::move(passage));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second.doc_id != b.second.doc_id) return a.second.doc_id < b.second.doc_id;
    return a.second.index < b.second.index;
  });
  std::vector<Passage> out;
  for (auto& [s, passage] : scored) {
    (void)s;
    if (out.size() == k) break;
    out.push_back(std::move(passage));
  }
  return out;
}

PassageStore::PassageStore(std::string tenant_id, Credential credential)
    : tenant_id_(std::move(tenant_id)), credential_(std::move(credential)) {}

void PassageStore::ingest_document(const std::string& doc_id,
                                   std::string_view text) {
  std::lock_guard lock(mu_);
  int index = 0;
  for (auto& para : split_paragraphs(text)) {
    passages_.push_back(Passage{tenant_id_, doc_id, index++, std::move(para)});
  }
}

void PassageStore::remove_document(const std::string& doc_id) {
  std::lock_guard lock(mu_);
  std::erase_if(passages_, [&](const Passage& p) { return p.doc_id == doc_id; });
}

std::size_t PassageStore::passage_count() const {
  std::lock_guard lock(mu_);
  return passages_.size();
}

RetrieveOutcome PassageStore::retrieve(const Credential& credential,
                                       std::string_view query,
                                       std::size_t k) const {
  RetrieveOutcome out;
  if (credential.tenant_id != tenant_id_ ||
      !crypto::ct_equal(as_bytes(credential.secret),
                        as_bytes(credential_.secret))) {
    out.status = RetrieveOutcome::Status::bad_credential;
    return out;
  }
  out.passages = retrieve_unchecked(query, k);
  return out;
}

std::vector<Passage> PassageStore::retrieve_unchecked(std::string_view query,
                                                      std::size_t k) const {
  std::lock_guard lock(mu_);
  return rank_passages(query, passages_, k);
}

}  // namespace burngate::store
