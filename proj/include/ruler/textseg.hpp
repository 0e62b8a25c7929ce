#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruler/tables.hpp"

namespace ruler {

// Half-open byte range [start, end) on UTF-8 character boundaries.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
  std::size_t size() const { return end - start; }
};

struct WordToken {
  std::string text;
  Span span;
  bool operator==(const WordToken&) const = default;
};

struct PosCounts {
  std::size_t adjective = 0;
  std::size_t noun = 0;
  std::size_t verb = 0;
  bool operator==(const PosCounts&) const = default;
};

struct UnitCounts {
  std::size_t chars = 0;    // Unicode scalar values
  std::size_t letters = 0;  // alphabetic scalars
  std::size_t words = 0;
};

// Everything rule binding needs to know about a response.
struct TextProfile {
  std::size_t char_count = 0;
  std::size_t letter_count = 0;
  std::size_t word_count = 0;
  std::vector<WordToken> words;
  std::vector<Span> sentences;
  std::vector<Span> paragraphs;
  std::vector<Span> bullets;
  PosCounts pos;
  // Keyed by the punctuation character's UTF-8 encoding; ordered map so
  // iteration order is stable for binding and serialization.
  std::map<std::string, std::size_t> punctuation_histogram;
  // Lowercased, alphabetic, length >= 3, non-stopword; first-occurrence
  // order, no duplicates.
  std::vector<std::string> keyword_candidates;
};

// Table-free analyses. Tokens are maximal runs of letters, digits, and
// apostrophes; gaps + tokens concatenate back to the input.
std::vector<WordToken> tokenize_words(std::string_view text);

// Maximal blocks separated by blank lines; spans trimmed of surrounding
// whitespace.
std::vector<Span> segment_paragraphs(std::string_view text);

// A bullet is a line whose first non-indent characters are "-", "*", "•",
// "N." or "N)" followed by whitespace; its span runs through continuation
// lines until the next bullet, blank line, or end.
std::vector<Span> extract_bullets(std::string_view text);

UnitCounts count_units(std::string_view text);

// Spans of tokens equal to `lower_keyword` under case folding, in text
// order. Whole-word by construction: tokens are maximal runs.
std::vector<Span> keyword_occurrences(std::string_view text,
                                      std::string_view lower_keyword);

// Table-dependent analyses: sentence segmentation (abbreviation list), POS
// tallies (lexicon), keyword candidates (stopwords).
class TextAnalyzer {
 public:
  explicit TextAnalyzer(LangTables tables);

  // Sentences partition the non-whitespace of each paragraph. A sentence
  // ends at '.', '!' or '?' (plus any directly trailing symbol run, so
  // wrap markers do not change counts) followed by whitespace or end;
  // abbreviation dots and digit.digit decimals do not end sentences.
  std::vector<Span> segment_sentences(std::string_view text) const;

  PosCounts pos_counts(std::string_view text) const;

  // Tag for one already-lowercased token, if any.
  std::optional<PosTag> tag_token(std::string_view lower_token) const;

  TextProfile profile(std::string_view text) const;

  const LangTables& tables() const { return tables_; }

 private:
  LangTables tables_;
};

}  // namespace ruler
