#include "rarerel/text.hpp"

#include <cctype>

namespace rarerel {

namespace {

// Length of the UTF-8 sequence starting at s[i], or 1 when malformed.
std::size_t sequence_length(std::string_view s, std::size_t i) {
  const auto lead = static_cast<unsigned char>(s[i]);
  std::size_t len = 1;
  if (lead >= 0xF0 && lead <= 0xF4) len = 4;
  else if (lead >= 0xE0) len = 3;
  else if (lead >= 0xC2 && lead <= 0xDF) len = 2;
  if (len == 1 || i + len > s.size()) return 1;
  for (std::size_t k = 1; k < len; ++k)
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 1;
  return len;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<std::size_t> utf8_offsets(std::string_view utf8) {
  std::vector<std::size_t> offsets;
  offsets.reserve(utf8.size() + 1);
  for (std::size_t i = 0; i < utf8.size(); i += sequence_length(utf8, i)) offsets.push_back(i);
  offsets.push_back(utf8.size());
  return offsets;
}

std::size_t code_point_count(std::string_view utf8) { return utf8_offsets(utf8).size() - 1; }

char32_t decode_code_point(std::string_view bytes) {
  if (bytes.empty()) return 0;
  const std::size_t len = sequence_length(bytes, 0);
  const auto lead = static_cast<unsigned char>(bytes[0]);
  if (len == 1) return lead;
  char32_t cp = lead & (0xFF >> (len + 1));
  for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(bytes[k]) & 0x3F);
  return cp;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t pos = s.find(sep, begin);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(begin));
      return out;
    }
    out.push_back(s.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

bool is_word_char(char32_t c) {
  if (c >= 0x80) return true;
  return std::isalnum(static_cast<int>(c)) != 0;
}

std::vector<std::string> word_tokens(std::string_view s) {
  std::vector<std::string> out;
  const std::string lowered = to_lower(collapse_whitespace(s));
  for (std::string_view piece : split(lowered, ' ')) {
    piece = trim(piece);
    while (!piece.empty() && std::ispunct(static_cast<unsigned char>(piece.front()))) piece.remove_prefix(1);
    while (!piece.empty() && std::ispunct(static_cast<unsigned char>(piece.back()))) piece.remove_suffix(1);
    if (!piece.empty()) out.emplace_back(piece);
  }
  return out;
}

}  // namespace rarerel
