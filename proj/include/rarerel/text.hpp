#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across modules.

namespace rarerel {

/// Byte offset of every code point in `utf8`, followed by utf8.size().
/// Invalid sequences count one byte per code point.
std::vector<std::size_t> utf8_offsets(std::string_view utf8);
std::size_t code_point_count(std::string_view utf8);
/// Decodes the first code point of `bytes`; invalid input yields the first byte.
char32_t decode_code_point(std::string_view bytes);

/// Splits on every occurrence of `sep`; keeps empty pieces.
std::vector<std::string_view> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);
/// ASCII lowercase; other bytes pass through.
std::string to_lower(std::string_view s);
/// Runs of ASCII whitespace become one space; ends are trimmed.
std::string collapse_whitespace(std::string_view s);

/// Letters, digits and every non-ASCII code point.
bool is_word_char(char32_t c);

/// Lowercased whitespace tokens with surrounding punctuation removed.
std::vector<std::string> word_tokens(std::string_view s);

}  // namespace rarerel
