#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lingsel::utf8 {

// Decodes the codepoint starting at byte offset i, advancing i past it.
// Returns false (leaving i unchanged) on an invalid sequence.
bool decode(std::string_view s, std::size_t &i, char32_t &cp);

void append(std::string &out, char32_t cp);

// Byte offset of the first invalid sequence, or nullopt if well formed.
std::optional<std::size_t> find_invalid(std::string_view s);

std::vector<char32_t> to_codepoints(std::string_view s);
std::string from_codepoints(const std::vector<char32_t> &cps);

}  // namespace lingsel::utf8
