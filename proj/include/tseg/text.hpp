#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tseg::text {

// Decodes one UTF-8 code point starting at `pos`, advancing `pos`.
// Malformed bytes decode as U+FFFD and consume one byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos) noexcept;
void append_utf8(std::string& out, char32_t cp);

bool is_separator(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;
bool is_letter(char32_t cp) noexcept;
char32_t fold_case(char32_t cp) noexcept;

/// Case-folded tokens split on Unicode whitespace and punctuation.
std::vector<std::string> tokenize(std::string_view s);

std::string_view trim(std::string_view s) noexcept;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

}  // namespace tseg::text
