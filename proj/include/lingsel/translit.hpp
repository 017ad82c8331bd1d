#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>

namespace lingsel {

struct TranslitReport {
  std::size_t passthrough = 0;  // codepoints outside the mapping
};

// Devanagari <-> WX notation. The table is immutable after construction
// and both directions are pure functions.
class TransliterationTable {
 public:
  enum class Unit { kConsonant, kVowel, kMatra, kMark };

  static const TransliterationTable &builtin();
  static TransliterationTable load(const std::string &path);
  // Parses the two-column CODEPOINT<TAB>WX format.
  static TransliterationTable parse(std::string_view data);

  std::string to_wx(std::string_view text, TranslitReport *r = nullptr) const;
  std::string from_wx(std::string_view text,
                      TranslitReport *r = nullptr) const;

  std::size_t entry_count() const { return encode_.size(); }

 private:
  struct Decoded {
    Unit unit;
    char32_t independent = 0;  // consonant / independent vowel / mark
    char32_t matra = 0;        // vowel form after a consonant; 0 = inherent
  };

  void insert(char32_t cp, const std::string &wx);

  std::unordered_map<char32_t, std::string> encode_;
  std::map<std::string, Decoded> decode_;  // WX image -> script unit
  std::size_t max_image_len_ = 1;
};

// Shorthands over the builtin table.
std::string to_wx(std::string_view text, TranslitReport *r = nullptr);
std::string from_wx(std::string_view text, TranslitReport *r = nullptr);

}  // namespace lingsel
