#include "lingsel/utf8.hpp"

namespace lingsel::utf8 {

bool decode(std::string_view s, std::size_t &i, char32_t &cp) {
  if (i >= s.size()) return false;
  const unsigned char b0 = static_cast<unsigned char>(s[i]);
  std::size_t len;
  char32_t v;
  if (b0 < 0x80) {
    cp = b0;
    ++i;
    return true;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    v = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    v = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    v = b0 & 0x07;
  } else {
    return false;
  }
  if (i + len > s.size()) return false;
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return false;
    v = (v << 6) | (b & 0x3F);
  }
  // Reject overlong forms, surrogates and out-of-range values.
  if (len == 2 && v < 0x80) return false;
  if (len == 3 && v < 0x800) return false;
  if (len == 4 && v < 0x10000) return false;
  if (v >= 0xD800 && v <= 0xDFFF) return false;
  if (v > 0x10FFFF) return false;
  cp = v;
  i += len;
  return true;
}

void append(std::string &out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::optional<std::size_t> find_invalid(std::string_view s) {
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    const std::size_t at = i;
    if (!decode(s, i, cp)) return at;
  }
  return std::nullopt;
}

std::vector<char32_t> to_codepoints(std::string_view s) {
  std::vector<char32_t> out;
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    if (!decode(s, i, cp)) {
      cp = 0xFFFD;
      ++i;
    }
    out.push_back(cp);
  }
  return out;
}

std::string from_codepoints(const std::vector<char32_t> &cps) {
  std::string out;
  for (char32_t cp : cps) append(out, cp);
  return out;
}

}  // namespace lingsel::utf8
