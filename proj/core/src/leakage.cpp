#include "burngate/leakage.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace burngate::leakage {

namespace {
char fold(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}
}  // namespace

std::string normalize_ws(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;  // also trims leading whitespace
  for (char raw : text) {
    char c = fold(raw);
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string normalize_for_ngrams(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;
  for (char raw : text) {
    char c = fold(raw);
    if (is_word_char(c)) {
      out.push_back(c);
      in_space = false;
    } else if (!in_space) {
      out.push_back(' ');
      in_space = true;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::unordered_set<std::string> word_trigrams(std::string_view text) {
  std::string normalized = normalize_for_ngrams(text);
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    std::size_t space = normalized.find(' ', pos);
    if (space == std::string::npos) space = normalized.size();
    words.emplace_back(normalized.data() + pos, space - pos);
    pos = space + 1;
  }
  std::unordered_set<std::string> grams;
  for (std::size_t i = 0; i + 3 <= words.size(); ++i) {
    std::string g(words[i]);
    g.push_back(' ');
    g.append(words[i + 1]);
    g.push_back(' ');
    g.append(words[i + 2]);
    grams.insert(std::move(g));
  }
  return grams;
}

double trigram_containment(const std::unordered_set<std::string>& text_grams,
                           const std::unordered_set<std::string>& doc_grams) {
  if (doc_grams.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& g : doc_grams) {
    if (text_grams.count(g)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(doc_grams.size());
}

const char* to_string(LeakVerdict::Basis basis) {
  switch (basis) {
    case LeakVerdict::Basis::exact_marker: return "exact_marker";
    case LeakVerdict::Basis::ngram_overlap: return "ngram_overlap";
    case LeakVerdict::Basis::none: return "none";
  }
  return "?";
}

LeakVerdict leak_indicator(std::string_view response_text,
                           const canary::CanaryCorpus& corpus) {
  LeakVerdict verdict;
  std::string haystack = normalize_ws(response_text);

  for (const auto& doc : corpus.documents) {
    for (const auto& marker : doc.markers) {
      std::string needle = normalize_ws(marker);
      if (haystack.find(needle) != std::string::npos) {
        verdict.value = 1;
        verdict.basis = LeakVerdict::Basis::exact_marker;
        verdict.matched = marker;
        return verdict;
      }
    }
  }

  auto text_grams = word_trigrams(response_text);
  for (const auto& doc : corpus.documents) {
    double score = trigram_containment(text_grams, word_trigrams(doc.text));
    if (score >= kParaphraseThreshold) {
      verdict.value = 1;
      verdict.basis = LeakVerdict::Basis::ngram_overlap;
      verdict.matched = doc.id;
      return verdict;
    }
  }
  return verdict;
}

}  // namespace burngate::leakage
