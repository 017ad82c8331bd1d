#include "lingsel/translit.hpp"

#include <fstream>
#include <sstream>

#include "lingsel/corpus.hpp"
#include "lingsel/utf8.hpp"

namespace lingsel {
namespace {

constexpr char32_t kHalant = 0x094D;

// WX notation for Devanagari, two columns: codepoint (hex), WX image.
// The halant is not listed; it is handled by the inherent-vowel rule.
constexpr const char *kBuiltinTable =
    // independent vowels
    "0905\ta\n"
    "0906\tA\n"
    "0907\ti\n"
    "0908\tI\n"
    "0909\tu\n"
    "090A\tU\n"
    "090B\tq\n"
    "0960\tQ\n"
    "090F\te\n"
    "0910\tE\n"
    "0913\to\n"
    "0914\tO\n"
    // vowel signs (matras)
    "093E\tA\n"
    "093F\ti\n"
    "0940\tI\n"
    "0941\tu\n"
    "0942\tU\n"
    "0943\tq\n"
    "0944\tQ\n"
    "0947\te\n"
    "0948\tE\n"
    "094B\to\n"
    "094C\tO\n"
    // consonants
    "0915\tk\n"
    "0916\tK\n"
    "0917\tg\n"
    "0918\tG\n"
    "0919\tf\n"
    "091A\tc\n"
    "091B\tC\n"
    "091C\tj\n"
    "091D\tJ\n"
    "091E\tF\n"
    "091F\tt\n"
    "0920\tT\n"
    "0921\td\n"
    "0922\tD\n"
    "0923\tN\n"
    "0924\tw\n"
    "0925\tW\n"
    "0926\tx\n"
    "0927\tX\n"
    "0928\tn\n"
    "092A\tp\n"
    "092B\tP\n"
    "092C\tb\n"
    "092D\tB\n"
    "092E\tm\n"
    "092F\ty\n"
    "0930\tr\n"
    "0932\tl\n"
    "0933\tlY\n"
    "0935\tv\n"
    "0936\tS\n"
    "0937\tR\n"
    "0938\ts\n"
    "0939\th\n"
    // modifiers
    "0901\tz\n"
    "0902\tM\n"
    "0903\tH\n"
    "093D\tZ\n";

TransliterationTable::Unit classify(char32_t cp) {
  using Unit = TransliterationTable::Unit;
  if (cp >= 0x0915 && cp <= 0x0939) return Unit::kConsonant;
  if (cp >= 0x0904 && cp <= 0x0914) return Unit::kVowel;
  if ((cp >= 0x0960 && cp <= 0x0961)) return Unit::kVowel;
  if (cp >= 0x093E && cp <= 0x094C) return Unit::kMatra;
  if (cp >= 0x0962 && cp <= 0x0963) return Unit::kMatra;
  return Unit::kMark;
}

}  // namespace

void TransliterationTable::insert(char32_t cp, const std::string &wx) {
  const Unit unit = classify(cp);
  if (!encode_.emplace(cp, wx).second)
    throw Error("duplicate transliteration entry for codepoint");
  Decoded &d = decode_[wx];
  switch (unit) {
    case Unit::kConsonant:
    case Unit::kMark:
      d.unit = unit;
      d.independent = cp;
      break;
    case Unit::kVowel:
      d.unit = Unit::kVowel;
      d.independent = cp;
      break;
    case Unit::kMatra:
      if (d.independent == 0) d.unit = Unit::kVowel;
      d.matra = cp;
      break;
  }
  if (wx.size() > max_image_len_) max_image_len_ = wx.size();
}

TransliterationTable TransliterationTable::parse(std::string_view data) {
  TransliterationTable table;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= data.size()) {
    std::size_t end = data.find('\n', start);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') {
      if (end == data.size()) break;
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error("transliteration table line " + std::to_string(line_no) +
                  ": expected CODEPOINT<TAB>WX");
    char32_t cp = 0;
    for (char c : line.substr(0, tab)) {
      cp <<= 4;
      if (c >= '0' && c <= '9')
        cp |= static_cast<char32_t>(c - '0');
      else if (c >= 'A' && c <= 'F')
        cp |= static_cast<char32_t>(c - 'A' + 10);
      else if (c >= 'a' && c <= 'f')
        cp |= static_cast<char32_t>(c - 'a' + 10);
      else
        throw Error("transliteration table line " + std::to_string(line_no) +
                    ": bad codepoint");
    }
    table.insert(cp, std::string(line.substr(tab + 1)));
    if (end == data.size()) break;
  }
  return table;
}

TransliterationTable TransliterationTable::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open transliteration table: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const TransliterationTable &TransliterationTable::builtin() {
  static const TransliterationTable table = parse(kBuiltinTable);
  return table;
}

std::string TransliterationTable::to_wx(std::string_view text,
                                        TranslitReport *r) const {
  std::string out;
  out.reserve(text.size());
  bool pending = false;       // consonant awaiting matra/halant
  bool after_halant = false;  // a halant just closed the cluster
  const auto resolve = [&] {
    if (pending) {
      out.push_back('a');  // inherent vowel
      pending = false;
    }
  };
  std::size_t i = 0;
  char32_t cp;
  while (i < text.size()) {
    const std::size_t at = i;
    const bool guard = after_halant;
    after_halant = false;
    if (!utf8::decode(text, i, cp)) {
      resolve();
      out.push_back(text[at]);
      i = at + 1;
      if (r) ++r->passthrough;
      continue;
    }
    if (cp == kHalant) {
      if (pending) {
        pending = false;
        after_halant = true;
      } else {
        utf8::append(out, cp);
        if (r) ++r->passthrough;
      }
      continue;
    }
    const auto it = encode_.find(cp);
    if (it == encode_.end()) {
      resolve();
      utf8::append(out, cp);
      if (r) ++r->passthrough;
      continue;
    }
    switch (classify(cp)) {
      case Unit::kConsonant:
        resolve();
        out += it->second;
        pending = true;
        break;
      case Unit::kMatra:
        if (pending) {
          out += it->second;
          pending = false;
        } else {
          // A matra with no consonant to attach to is outside the
          // mapping's domain; keep the raw codepoint.
          utf8::append(out, cp);
          if (r) ++r->passthrough;
        }
        break;
      case Unit::kVowel:
        resolve();
        if (guard) {
          // After an explicit halant the vowel letter would read back as
          // part of the cluster; keep the raw codepoint instead.
          utf8::append(out, cp);
        } else {
          out += it->second;
        }
        break;
      case Unit::kMark:
        resolve();
        out += it->second;
        break;
    }
  }
  resolve();
  return out;
}

std::string TransliterationTable::from_wx(std::string_view text,
                                          TranslitReport *r) const {
  std::string out;
  out.reserve(text.size() * 3);
  bool pending = false;
  const auto close_cluster = [&] {
    if (pending) {
      utf8::append(out, kHalant);
      pending = false;
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    // Longest-match lookup over ASCII WX images.
    const Decoded *match = nullptr;
    std::size_t match_len = 0;
    const std::size_t limit = std::min(max_image_len_, text.size() - i);
    for (std::size_t len = limit; len >= 1; --len) {
      const auto it = decode_.find(std::string(text.substr(i, len)));
      if (it != decode_.end()) {
        match = &it->second;
        match_len = len;
        break;
      }
    }
    if (!match) {
      close_cluster();
      std::size_t j = i;
      char32_t cp;
      if (utf8::decode(text, j, cp)) {
        utf8::append(out, cp);
        i = j;
      } else {
        out.push_back(text[i]);
        ++i;
      }
      if (r) ++r->passthrough;
      continue;
    }
    switch (match->unit) {
      case Unit::kConsonant:
        close_cluster();
        utf8::append(out, match->independent);
        pending = true;
        break;
      case Unit::kVowel:
      case Unit::kMatra:
        if (pending) {
          if (match->matra != 0) utf8::append(out, match->matra);
          pending = false;  // matra == 0 means the inherent vowel
        } else {
          utf8::append(out, match->independent);
        }
        break;
      case Unit::kMark:
        close_cluster();
        utf8::append(out, match->independent);
        break;
    }
    i += match_len;
  }
  close_cluster();
  return out;
}

std::string to_wx(std::string_view text, TranslitReport *r) {
  return TransliterationTable::builtin().to_wx(text, r);
}

std::string from_wx(std::string_view text, TranslitReport *r) {
  return TransliterationTable::builtin().from_wx(text, r);
}

}  // namespace lingsel
