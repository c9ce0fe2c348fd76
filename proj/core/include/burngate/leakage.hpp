#pragma once

#include <string>
#include <unordered_set>

#include "burngate/canary.hpp"

namespace burngate::leakage {

/// Lowercase + collapse whitespace runs to single spaces, keep punctuation.
/// This is the normalization used for marker search and EDM equality.
std::string normalize_ws(std::string_view text);

/// Lowercase, punctuation to spaces, collapse. Feeds the 3-gram sets.
std::string normalize_for_ngrams(std::string_view text);

std::unordered_set<std::string> word_trigrams(std::string_view text);

/// Fraction of `doc`'s word 3-grams that appear in `text` (containment).
/// Monotone in `text`: appending content never lowers the score.
double trigram_containment(const std::unordered_set<std::string>& text_grams,
                           const std::unordered_set<std::string>& doc_grams);

inline constexpr double kParaphraseThreshold = 0.5;

struct LeakVerdict {
  enum class Basis { exact_marker, ngram_overlap, none };
  int value = 0;  // 1 iff basis != none
  Basis basis = Basis::none;
  std::string matched;  // marker text or document id

  bool leaked() const { return value == 1; }
};

const char* to_string(LeakVerdict::Basis basis);

/// The binary leak classifier shared by every metric: exact marker sighting
/// first (case-insensitive over whitespace-normalized text), then the 3-gram
/// paraphrase proxy at the 0.5 threshold.
LeakVerdict leak_indicator(std::string_view response_text,
                           const canary::CanaryCorpus& corpus);

}  // namespace burngate::leakage
