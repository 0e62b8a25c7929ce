#include "ruler/textseg.hpp"

#include <algorithm>
#include <unordered_set>

#include "ruler/unicode.hpp"

namespace ruler {

namespace {

bool is_token_char(char32_t cp) {
  return uni::is_alnum(cp) || cp == U'\'' || cp == 0x2019;
}

// Line = [begin, end) excluding the newline; returns offset past the '\n'.
struct Line {
  std::size_t begin, end, next;
};

Line next_line(std::string_view text, std::size_t from) {
  std::size_t nl = text.find('\n', from);
  if (nl == std::string_view::npos) return {from, text.size(), text.size()};
  return {from, nl, nl + 1};
}

bool line_blank(std::string_view text, const Line& ln) {
  for (std::size_t i = ln.begin; i < ln.end;) {
    auto [cp, len] = uni::decode(text, i);
    if (!uni::is_space(cp)) return false;
    i += len;
  }
  return true;
}

// True if the line opens with a bullet marker followed by whitespace/EOL.
bool line_is_bullet(std::string_view text, const Line& ln) {
  std::size_t i = ln.begin;
  while (i < ln.end) {
    auto [cp, len] = uni::decode(text, i);
    if (!uni::is_space(cp)) break;
    i += len;
  }
  if (i >= ln.end) return false;
  auto [cp, len] = uni::decode(text, i);
  std::size_t after = i + len;
  if (cp == U'-' || cp == U'*' || cp == 0x2022) {
    if (after >= ln.end) return true;
    return uni::is_space(uni::decode(text, after).cp);
  }
  if (uni::is_digit(cp)) {
    std::size_t j = after;
    while (j < ln.end && uni::is_digit(uni::decode(text, j).cp))
      j += uni::decode(text, j).len;
    if (j >= ln.end) return false;
    auto [mark, mlen] = uni::decode(text, j);
    if (mark != U'.' && mark != U')') return false;
    std::size_t k = j + mlen;
    if (k >= ln.end) return true;
    return uni::is_space(uni::decode(text, k).cp);
  }
  return false;
}

Span trimmed_span(std::string_view text, std::size_t begin, std::size_t end) {
  std::size_t s = begin;
  while (s < end) {
    auto [cp, len] = uni::decode(text, s);
    if (!uni::is_space(cp)) break;
    s += len;
  }
  std::size_t e = end;
  while (e > s) {
    // Walk back to the previous scalar's start.
    std::size_t p = e - 1;
    while (p > s && (static_cast<unsigned char>(text[p]) & 0xC0) == 0x80) --p;
    if (!uni::is_space(uni::decode(text, p).cp)) break;
    e = p;
  }
  return {s, e};
}

}  // namespace

std::vector<WordToken> tokenize_words(std::string_view text) {
  std::vector<WordToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto [cp, len] = uni::decode(text, i);
    if (!is_token_char(cp)) {
      i += len;
      continue;
    }
    std::size_t start = i;
    while (i < text.size()) {
      auto [c, l] = uni::decode(text, i);
      if (!is_token_char(c)) break;
      i += l;
    }
    out.push_back({std::string(text.substr(start, i - start)), {start, i}});
  }
  return out;
}

std::vector<Span> segment_paragraphs(std::string_view text) {
  std::vector<Span> out;
  std::size_t pos = 0;
  std::size_t block_start = std::string_view::npos;
  std::size_t block_end = 0;
  while (pos < text.size()) {
    Line ln = next_line(text, pos);
    if (line_blank(text, ln)) {
      if (block_start != std::string_view::npos) {
        Span s = trimmed_span(text, block_start, block_end);
        if (s.start < s.end) out.push_back(s);
        block_start = std::string_view::npos;
      }
    } else {
      if (block_start == std::string_view::npos) block_start = ln.begin;
      block_end = ln.end;
    }
    pos = ln.next;
  }
  if (block_start != std::string_view::npos) {
    Span s = trimmed_span(text, block_start, block_end);
    if (s.start < s.end) out.push_back(s);
  }
  return out;
}

std::vector<Span> extract_bullets(std::string_view text) {
  std::vector<Span> out;
  std::size_t pos = 0;
  std::size_t bullet_start = std::string_view::npos;
  std::size_t bullet_end = 0;
  auto flush = [&] {
    if (bullet_start != std::string_view::npos) {
      Span s = trimmed_span(text, bullet_start, bullet_end);
      if (s.start < s.end) out.push_back(s);
      bullet_start = std::string_view::npos;
    }
  };
  while (pos < text.size()) {
    Line ln = next_line(text, pos);
    if (line_blank(text, ln)) {
      flush();
    } else if (line_is_bullet(text, ln)) {
      flush();
      bullet_start = ln.begin;
      bullet_end = ln.end;
    } else if (bullet_start != std::string_view::npos) {
      bullet_end = ln.end;  // continuation line
    }
    pos = ln.next;
  }
  flush();
  return out;
}

UnitCounts count_units(std::string_view text) {
  UnitCounts c;
  std::size_t i = 0;
  while (i < text.size()) {
    auto [cp, len] = uni::decode(text, i);
    ++c.chars;
    if (uni::is_alpha(cp)) ++c.letters;
    i += len;
  }
  c.words = tokenize_words(text).size();
  return c;
}

std::vector<Span> keyword_occurrences(std::string_view text,
                                      std::string_view lower_keyword) {
  std::vector<Span> out;
  for (const WordToken& w : tokenize_words(text)) {
    if (uni::lower_copy(w.text) == lower_keyword) out.push_back(w.span);
  }
  return out;
}

TextAnalyzer::TextAnalyzer(LangTables tables) : tables_(std::move(tables)) {}

std::vector<Span> TextAnalyzer::segment_sentences(std::string_view text) const {
  std::vector<Span> out;
  for (const Span& para : segment_paragraphs(text)) {
    std::size_t i = para.start;
    std::size_t sent_start = std::string_view::npos;
    std::size_t last_nonspace_end = para.start;
    while (i < para.end) {
      auto [cp, len] = uni::decode(text, i);
      if (uni::is_space(cp)) {
        i += len;
        continue;
      }
      if (sent_start == std::string_view::npos) sent_start = i;
      last_nonspace_end = i + len;
      bool terminal = (cp == U'.' || cp == U'!' || cp == U'?');
      if (terminal && cp == U'.') {
        // Decimal point: digit on both sides.
        bool prev_digit = false;
        if (i > para.start) {
          std::size_t p = i - 1;
          while (p > para.start &&
                 (static_cast<unsigned char>(text[p]) & 0xC0) == 0x80)
            --p;
          prev_digit = uni::is_digit(uni::decode(text, p).cp);
        }
        bool next_digit = i + len < para.end &&
                          uni::is_digit(uni::decode(text, i + len).cp);
        if (prev_digit && next_digit) terminal = false;
        if (terminal) {
          // Abbreviation: some list entry matches the text ending at this
          // dot, with a non-letter (or start) just before the match.
          for (const std::string& abbr : tables_.abbreviations) {
            std::size_t alen = abbr.size();
            std::size_t dot_end = i + len;
            if (dot_end - para.start < alen) continue;
            std::size_t from = dot_end - alen;
            std::string cand =
                uni::lower_copy(text.substr(from, alen));
            if (cand != abbr) continue;
            if (from > para.start) {
              std::size_t p = from - 1;
              while (p > para.start &&
                     (static_cast<unsigned char>(text[p]) & 0xC0) == 0x80)
                --p;
              char32_t before = uni::decode(text, p).cp;
              if (uni::is_alpha(before) || before == U'.') continue;
            }
            terminal = false;
            break;
          }
        }
      }
      i += len;
      if (!terminal) continue;
      // Absorb any directly trailing symbol run (closing quotes, wrap
      // markers). The run must end at whitespace or paragraph end for the
      // boundary to count; otherwise ("file.txt") keep scanning.
      std::size_t j = i;
      while (j < para.end) {
        auto [c, l] = uni::decode(text, j);
        if (uni::is_space(c) || uni::is_alnum(c)) break;
        j += l;
      }
      bool at_break = j >= para.end || uni::is_space(uni::decode(text, j).cp);
      if (!at_break) continue;
      out.push_back({sent_start, j});
      sent_start = std::string_view::npos;
      i = j;
    }
    if (sent_start != std::string_view::npos)
      out.push_back({sent_start, last_nonspace_end});
  }
  return out;
}

std::optional<PosTag> TextAnalyzer::tag_token(
    std::string_view lower_token) const {
  std::string key(lower_token);
  auto it = tables_.lexicon.find(key);
  if (it != tables_.lexicon.end()) return it->second;
  // Possessive: look up the stem of token's.
  if (key.size() > 2 && key.compare(key.size() - 2, 2, "'s") == 0) {
    it = tables_.lexicon.find(key.substr(0, key.size() - 2));
    if (it != tables_.lexicon.end()) return it->second;
  }
  auto ends_with = [&](std::string_view suf) {
    return key.size() >= suf.size() + 3 &&
           key.compare(key.size() - suf.size(), suf.size(), suf) == 0;
  };
  for (char c : key)
    if (!(c >= 'a' && c <= 'z')) return std::nullopt;  // heuristics are ASCII
  if (ends_with("ous") || ends_with("ful") || ends_with("ive"))
    return PosTag::adjective;
  if (ends_with("tion") || ends_with("ness") || ends_with("ment"))
    return PosTag::noun;
  if (ends_with("ize") || ends_with("ed")) return PosTag::verb;
  return std::nullopt;
}

PosCounts TextAnalyzer::pos_counts(std::string_view text) const {
  PosCounts c;
  for (const WordToken& w : tokenize_words(text)) {
    auto tag = tag_token(uni::lower_copy(w.text));
    if (!tag) continue;
    switch (*tag) {
      case PosTag::adjective: ++c.adjective; break;
      case PosTag::noun: ++c.noun; break;
      case PosTag::verb: ++c.verb; break;
    }
  }
  return c;
}

TextProfile TextAnalyzer::profile(std::string_view text) const {
  TextProfile p;
  UnitCounts units = count_units(text);
  p.char_count = units.chars;
  p.letter_count = units.letters;
  p.words = tokenize_words(text);
  p.word_count = p.words.size();
  p.sentences = segment_sentences(text);
  p.paragraphs = segment_paragraphs(text);
  p.bullets = extract_bullets(text);
  p.pos = pos_counts(text);
  std::size_t i = 0;
  while (i < text.size()) {
    auto [cp, len] = uni::decode(text, i);
    if (uni::is_punct(cp))
      ++p.punctuation_histogram[std::string(text.substr(i, len))];
    i += len;
  }
  std::unordered_set<std::string> seen;
  for (const WordToken& w : p.words) {
    std::string lower = uni::lower_copy(w.text);
    if (uni::scalar_count(lower) < 3) continue;
    bool alphabetic = true;
    std::size_t j = 0;
    while (j < lower.size()) {
      auto [cp, len] = uni::decode(lower, j);
      if (!uni::is_alpha(cp)) {
        alphabetic = false;
        break;
      }
      j += len;
    }
    if (!alphabetic) continue;
    if (tables_.stopwords.count(lower)) continue;
    if (seen.insert(lower).second) p.keyword_candidates.push_back(lower);
  }
  return p;
}

}  // namespace ruler
