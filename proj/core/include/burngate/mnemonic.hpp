#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "burngate/common.hpp"
#include "burngate/rng.hpp"

namespace burngate::mnemonic {

/// D distinct lowercase words, 0-based stable indices. D must be a power of
/// two so each word encodes exactly log2(D) bits.
class Wordlist {
 public:
  static Wordlist from_words(std::vector<std::string> words);
  static Wordlist load_file(const std::filesystem::path& path);

  std::size_t size() const { return words_.size(); }
  unsigned bits_per_word() const { return bits_per_word_; }
  const std::string& word(std::uint32_t index) const { return words_.at(index); }
  std::optional<std::uint32_t> index_of(std::string_view word) const;

 private:
  Wordlist() = default;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> index_;
  unsigned bits_per_word_ = 0;
};

/// 128 entropy bits plus a 4-bit checksum taken from the first nibble of
/// sha256(bits).
struct EntropySeed {
  std::array<std::uint8_t, 16> bits{};
  std::uint8_t checksum = 0;

  static EntropySeed from_entropy(const std::array<std::uint8_t, 16>& bits);
  static EntropySeed random(Rng& rng);

  bool operator==(const EntropySeed&) const = default;
};

std::uint8_t checksum_nibble(const std::array<std::uint8_t, 16>& bits);

struct MnemonicPhrase {
  std::vector<std::string> words;

  std::string joined() const;
  static MnemonicPhrase split(std::string_view text);

  bool operator==(const MnemonicPhrase&) const = default;
};

/// S = word_count * log2(dictionary_size); exact for power-of-two sizes.
/// Throws DomainError when dictionary_size < 2 or word_count < 1.
double entropy_strength(std::uint64_t dictionary_size, std::uint64_t word_count);

/// Splits the 132-bit payload (entropy || checksum) into 12 word indices.
/// Throws WordlistSizeMismatch if the list's geometry cannot carry it.
class WordlistSizeMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};
MnemonicPhrase generate_mnemonic(const EntropySeed& entropy,
                                 const Wordlist& wordlist);

struct ParseOutcome {
  enum class Status { ok, unknown_word, checksum_mismatch };
  Status status = Status::ok;
  EntropySeed seed{};
  std::string offending_word;  // set for unknown_word

  bool ok() const { return status == Status::ok; }
};
ParseOutcome parse_mnemonic(const MnemonicPhrase& phrase,
                            const Wordlist& wordlist);

}  // namespace burngate::mnemonic
