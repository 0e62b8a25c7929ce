#include "ruler/unicode.hpp"

namespace ruler::uni {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

Decoded decode(std::string_view text, std::size_t offset) {
  unsigned char b0 = static_cast<unsigned char>(text[offset]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t remaining = text.size() - offset;
  auto cont = [&](int i) {
    return static_cast<std::size_t>(i) < remaining &&
           is_continuation(static_cast<unsigned char>(text[offset + i]));
  };
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    char32_t cp = ((b0 & 0x1Fu) << 6) |
                  (static_cast<unsigned char>(text[offset + 1]) & 0x3Fu);
    if (cp >= 0x80) return {cp, 2};
  } else if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    char32_t cp = ((b0 & 0x0Fu) << 12) |
                  ((static_cast<unsigned char>(text[offset + 1]) & 0x3Fu) << 6) |
                  (static_cast<unsigned char>(text[offset + 2]) & 0x3Fu);
    if (cp >= 0x800 && !(cp >= 0xD800 && cp <= 0xDFFF)) return {cp, 3};
  } else if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    char32_t cp = ((b0 & 0x07u) << 18) |
                  ((static_cast<unsigned char>(text[offset + 1]) & 0x3Fu) << 12) |
                  ((static_cast<unsigned char>(text[offset + 2]) & 0x3Fu) << 6) |
                  (static_cast<unsigned char>(text[offset + 3]) & 0x3Fu);
    if (cp >= 0x10000 && cp <= 0x10FFFF) return {cp, 4};
  }
  return {kReplacement, 1};
}

void append_utf8(std::string& out, char32_t cp) {
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

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\f':
    case U'\v':
    case 0x00A0:  // no-break space
      return true;
    default:
      return false;
  }
}

bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_alpha(char32_t cp) {
  if (cp < 0x80) return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
  if (cp >= 0xC0 && cp <= 0xFF) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x100 && cp <= 0x24F) return true;   // Latin Extended-A/B
  if (cp >= 0x370 && cp <= 0x3FF) return cp != 0x374 && cp != 0x375 &&
                                         cp != 0x37E && cp != 0x384 &&
                                         cp != 0x385 && cp != 0x387;  // Greek
  if (cp >= 0x400 && cp <= 0x4FF) return true;   // Cyrillic
  if (cp >= 0x3040 && cp <= 0x30FF) return cp != 0x3097 && cp != 0x3098;  // Kana
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;  // CJK unified
  return false;
}

bool is_alnum(char32_t cp) { return is_alpha(cp) || is_digit(cp); }

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'!' && cp <= U'/') || (cp >= U':' && cp <= U'@') ||
           (cp >= U'[' && cp <= U'`') || (cp >= U'{' && cp <= U'~');
  }
  switch (cp) {
    case 0x2018:  // left single quote
    case 0x2019:  // right single quote
    case 0x201C:  // left double quote
    case 0x201D:  // right double quote
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2026:  // ellipsis
      return true;
    default:
      return false;
  }
}

char32_t to_upper(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return cp - 0x20;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 0x20;
  if (cp == 0xFF) return 0x178;
  return cp;
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x178) return 0xFF;
  return cp;
}

namespace {

template <char32_t (*Map)(char32_t)>
std::string map_copy(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    auto [cp, len] = decode(text, i);
    char32_t mapped = Map(cp);
    if (mapped == cp) {
      out.append(text.substr(i, len));
    } else {
      append_utf8(out, mapped);
    }
    i += len;
  }
  return out;
}

}  // namespace

std::string upper_copy(std::string_view text) { return map_copy<to_upper>(text); }
std::string lower_copy(std::string_view text) { return map_copy<to_lower>(text); }

std::size_t scalar_count(std::string_view text) {
  std::size_t n = 0, i = 0;
  while (i < text.size()) {
    i += decode(text, i).len;
    ++n;
  }
  return n;
}

}  // namespace ruler::uni
