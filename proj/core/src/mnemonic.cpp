#include "burngate/mnemonic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "burngate/crypto.hpp"

namespace burngate::mnemonic {

namespace {
constexpr std::size_t kEntropyBits = 128;
constexpr std::size_t kChecksumBits = 4;
constexpr std::size_t kPayloadBits = kEntropyBits + kChecksumBits;

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

unsigned log2_exact(std::size_t n) {
  unsigned bits = 0;
  while (n > 1) {
    n >>= 1;
    ++bits;
  }
  return bits;
}
}  // namespace

Wordlist Wordlist::from_words(std::vector<std::string> words) {
  if (!is_power_of_two(words.size())) {
    throw DomainError("wordlist size must be a power of two >= 2");
  }
  Wordlist list;
  list.bits_per_word_ = log2_exact(words.size());
  list.index_.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string& w = words[i];
    if (w.empty() ||
        !std::all_of(w.begin(), w.end(), [](unsigned char c) {
          return c >= 'a' && c <= 'z';
        })) {
      throw DomainError("wordlist entries must be nonempty lowercase ascii: '" +
                        w + "'");
    }
    auto [it, inserted] = list.index_.emplace(w, static_cast<std::uint32_t>(i));
    (void)it;
    if (!inserted) throw DomainError("duplicate wordlist entry: '" + w + "'");
  }
  list.words_ = std::move(words);
  return list;
}

Wordlist Wordlist::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open wordlist: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return from_words(std::move(words));
}

std::optional<std::uint32_t> Wordlist::index_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint8_t checksum_nibble(const std::array<std::uint8_t, 16>& bits) {
  return static_cast<std::uint8_t>(crypto::sha256(bits).front() >> 4);
}

EntropySeed EntropySeed::from_entropy(const std::array<std::uint8_t, 16>& bits) {
  return EntropySeed{bits, checksum_nibble(bits)};
}

EntropySeed EntropySeed::random(Rng& rng) {
  std::array<std::uint8_t, 16> bits{};
  rng.fill(bits);
  return from_entropy(bits);
}

std::string MnemonicPhrase::joined() const {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

MnemonicPhrase MnemonicPhrase::split(std::string_view text) {
  MnemonicPhrase phrase;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) phrase.words.push_back(word);
  return phrase;
}

double entropy_strength(std::uint64_t dictionary_size,
                        std::uint64_t word_count) {
  if (dictionary_size < 2) throw DomainError("dictionary_size must be >= 2");
  if (word_count < 1) throw DomainError("word_count must be >= 1");
  return static_cast<double>(word_count) *
         std::log2(static_cast<double>(dictionary_size));
}

MnemonicPhrase generate_mnemonic(const EntropySeed& entropy,
                                 const Wordlist& wordlist) {
  const unsigned bits = wordlist.bits_per_word();
  if (kPayloadBits % bits != 0) {
    throw WordlistSizeMismatch("payload of 132 bits is not divisible by " +
                               std::to_string(bits) + "-bit words");
  }
  const std::size_t word_count = kPayloadBits / bits;

  // payload = entropy bits || checksum nibble, consumed MSB-first.
  std::vector<bool> payload;
  payload.reserve(kPayloadBits);
  for (std::uint8_t byte : entropy.bits) {
    for (int b = 7; b >= 0; --b) payload.push_back((byte >> b) & 1);
  }
  for (int b = 3; b >= 0; --b) payload.push_back((entropy.checksum >> b) & 1);

  MnemonicPhrase phrase;
  phrase.words.reserve(word_count);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < word_count; ++i) {
    std::uint32_t index = 0;
    for (unsigned b = 0; b < bits; ++b) index = index << 1 | payload[pos++];
    phrase.words.push_back(wordlist.word(index));
  }
  return phrase;
}

ParseOutcome parse_mnemonic(const MnemonicPhrase& phrase,
                            const Wordlist& wordlist) {
  const unsigned bits = wordlist.bits_per_word();
  if (phrase.words.size() * bits != kPayloadBits) {
    throw WordlistSizeMismatch("phrase carries " +
                               std::to_string(phrase.words.size() * bits) +
                               " bits, expected 132");
  }
  std::vector<bool> payload;
  payload.reserve(kPayloadBits);
  for (const std::string& w : phrase.words) {
    auto index = wordlist.index_of(w);
    if (!index) {
      ParseOutcome out;
      out.status = ParseOutcome::Status::unknown_word;
      out.offending_word = w;
      return out;
    }
    for (int b = static_cast<int>(bits) - 1; b >= 0; --b) {
      payload.push_back((*index >> b) & 1);
    }
  }

  ParseOutcome out;
  std::size_t pos = 0;
  for (auto& byte : out.seed.bits) {
    std::uint8_t v = 0;
    for (int b = 0; b < 8; ++b) v = static_cast<std::uint8_t>(v << 1 | payload[pos++]);
    byte = v;
  }
  std::uint8_t claimed = 0;
  for (int b = 0; b < 4; ++b) claimed = static_cast<std::uint8_t>(claimed << 1 | payload[pos++]);

  if (claimed != checksum_nibble(out.seed.bits)) {
    out.status = ParseOutcome::Status::checksum_mismatch;
    return out;
  }
  out.seed.checksum = claimed;
  return out;
}

}  // namespace burngate::mnemonic
