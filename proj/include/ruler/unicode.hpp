#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Minimal Unicode support: UTF-8 codec, coarse character classes, and case
// maps for the scripts this pipeline meaningfully handles (ASCII, Latin-1,
// Latin Extended, Greek, Cyrillic, CJK). Everything beyond that is treated
// as an opaque non-letter so counts stay deterministic.
namespace ruler::uni {

struct Decoded {
  char32_t cp;
  int len;  // bytes consumed, always >= 1
};

// Decodes the scalar starting at `offset`. Invalid sequences yield U+FFFD
// with len 1, so a scan always terminates.
Decoded decode(std::string_view text, std::size_t offset);

void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);
bool is_digit(char32_t cp);
bool is_alpha(char32_t cp);
bool is_alnum(char32_t cp);

// ASCII punctuation plus the typographic marks prose actually uses:
// curly quotes, en/em dash, ellipsis.
bool is_punct(char32_t cp);

// Case maps cover ASCII and Latin-1 (plus the y-with-diaeresis pair);
// identity elsewhere.
char32_t to_upper(char32_t cp);
char32_t to_lower(char32_t cp);

std::string upper_copy(std::string_view text);
std::string lower_copy(std::string_view text);

std::size_t scalar_count(std::string_view text);

}  // namespace ruler::uni
