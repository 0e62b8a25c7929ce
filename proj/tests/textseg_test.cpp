#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "ruler/textseg.hpp"
#include "ruler/unicode.hpp"
#include "support.hpp"

using namespace ruler;
using testsup::Env;

namespace {

std::vector<std::string> cut(std::string_view text,
                             const std::vector<Span>& spans) {
  std::vector<std::string> out;
  for (const Span& s : spans)
    out.emplace_back(text.substr(s.start, s.end - s.start));
  return out;
}

}  // namespace

TEST_CASE("tokenize_words basics") {
  CHECK(tokenize_words("").empty());

  auto toks = tokenize_words("a b!");
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].text == "a");
  CHECK(toks[0].span == Span{0, 1});
  CHECK(toks[1].text == "b");
  CHECK(toks[1].span == Span{2, 3});

  auto poss = tokenize_words("knight's sword");
  REQUIRE(poss.size() == 2);
  CHECK(poss[0].text == "knight's");
  CHECK(poss[1].text == "sword");

  // Hyphens split; digits join.
  auto hyph = tokenize_words("fire-breathing x42");
  REQUIRE(hyph.size() == 3);
  CHECK(hyph[0].text == "fire");
  CHECK(hyph[1].text == "breathing");
  CHECK(hyph[2].text == "x42");
}

TEST_CASE("tokenize_words reconstruction") {
  auto corpus = testsup::make_corpus(20, 404);
  for (const auto& s : corpus) {
    const std::string& text = s.response;
    auto toks = tokenize_words(text);
    std::string rebuilt;
    std::size_t pos = 0;
    for (const auto& w : toks) {
      REQUIRE(w.span.start >= pos);
      REQUIRE(w.span.end <= text.size());
      rebuilt += text.substr(pos, w.span.start - pos);
      rebuilt += w.text;
      CHECK(text.substr(w.span.start, w.span.size()) == w.text);
      pos = w.span.end;
    }
    rebuilt += text.substr(pos);
    CHECK(rebuilt == text);
  }
}

TEST_CASE("segment_paragraphs") {
  CHECK(segment_paragraphs("").empty());
  CHECK(segment_paragraphs("  \n \n").empty());

  auto two = segment_paragraphs("A\n\nB");
  REQUIRE(two.size() == 2);
  CHECK(cut("A\n\nB", two) == std::vector<std::string>{"A", "B"});

  auto runs = segment_paragraphs("A\n\n\n\nB\nC");
  REQUIRE(runs.size() == 2);
  CHECK(cut("A\n\n\n\nB\nC", runs) ==
        std::vector<std::string>{"A", "B\nC"});

  // Spans are trimmed of surrounding whitespace.
  std::string padded = "  hello there  \n\n  next  ";
  auto p = segment_paragraphs(padded);
  REQUIRE(p.size() == 2);
  CHECK(cut(padded, p) == std::vector<std::string>{"hello there", "next"});

  auto knight = segment_paragraphs(testsup::kKnightStory);
  CHECK(knight.size() == 3);
  auto team = segment_paragraphs(testsup::kTeamResponse);
  CHECK(team.size() == 1);
}

TEST_CASE("extract_bullets") {
  CHECK(extract_bullets("no bullets here").empty());

  auto dash = extract_bullets("- a\n- b");
  REQUIRE(dash.size() == 2);
  CHECK(cut("- a\n- b", dash) == std::vector<std::string>{"- a", "- b"});

  auto nums = extract_bullets("1. x\n2. y\n3. z");
  CHECK(nums.size() == 3);

  auto mixed = extract_bullets("* star\n\xE2\x80\xA2 dot\n4) paren");
  CHECK(mixed.size() == 3);

  // Continuation lines extend the span; a blank line or next bullet ends it.
  std::string cont = "intro line\n- first item\n  wraps here\n- second\n\ntail";
  auto b = extract_bullets(cont);
  REQUIRE(b.size() == 2);
  CHECK(cut(cont, b) == std::vector<std::string>{"- first item\n  wraps here",
                                                 "- second"});

  // Marker must be followed by whitespace or end of line.
  CHECK(extract_bullets("-|Wielding a sword").empty());
  CHECK(extract_bullets("*bold* text").empty());
  CHECK(extract_bullets("3.14 is not a bullet").empty());
  CHECK(extract_bullets("-").size() == 1);
}

TEST_CASE("count_units") {
  auto abc = count_units("abc");
  CHECK(abc.chars == 3);
  CHECK(abc.letters == 3);
  CHECK(abc.words == 1);

  auto ab = count_units("a b!");
  CHECK(ab.chars == 4);
  CHECK(ab.letters == 2);
  CHECK(ab.words == 2);

  auto empty = count_units("");
  CHECK(empty.chars == 0);
  CHECK(empty.letters == 0);
  CHECK(empty.words == 0);

  // Scalars, not bytes.
  auto cafe = count_units("caf\xC3\xA9!");
  CHECK(cafe.chars == 5);
  CHECK(cafe.letters == 4);
  CHECK(cafe.words == 1);
}

TEST_CASE("keyword_occurrences is whole-word and case-insensitive") {
  std::string text = "Way leads on to way, but ways differ. The WAY is long.";
  auto occ = keyword_occurrences(text, "way");
  REQUIRE(occ.size() == 3);
  CHECK(text.substr(occ[0].start, occ[0].size()) == "Way");
  CHECK(text.substr(occ[1].start, occ[1].size()) == "way");
  CHECK(text.substr(occ[2].start, occ[2].size()) == "WAY");

  CHECK(keyword_occurrences(testsup::kTeamResponse, "way").size() == 1);
  CHECK(keyword_occurrences("sideways motion", "way").empty());
}

TEST_CASE("segment_sentences oracle table") {
  const TextAnalyzer& an = Env::get().analyzer;
  struct Case {
    std::string text;
    std::vector<std::string> expected;
  };
  // Hand-segmented fixtures; 50 sentences in total.
  const std::vector<Case> cases = {
      {"One. Two!", {"One.", "Two!"}},
      {"Dr. Smith left. He ran.", {"Dr. Smith left.", "He ran."}},
      {"Pi is about 3.14. Carry on.", {"Pi is about 3.14.", "Carry on."}},
      {"Wait... Then what? Go!", {"Wait...", "Then what?", "Go!"}},
      {"He said \"Stop.\" She heard it.",
       {"He said \"Stop.\"", "She heard it."}},
      {"Mr. and Mrs. Hale met Prof. Voss at 9 a.m. sharp. They talked.",
       {"Mr. and Mrs. Hale met Prof. Voss at 9 a.m. sharp.", "They talked."}},
      {"The file is data.txt and it loads. Good.",
       {"The file is data.txt and it loads.", "Good."}},
      {"We visited the U.S. in May. It rained.",
       {"We visited the U.S. in May.", "It rained."}},
      {"She holds a Ph.D. from Arvan College. He does not.",
       {"She holds a Ph.D. from Arvan College.", "He does not."}},
      {"It costs 4.50 now! Prices rose 2.5 percent. Amazing?",
       {"It costs 4.50 now!", "Prices rose 2.5 percent.", "Amazing?"}},
      {"First here.\n\nSecond there. Third too.\n\nFourth ends",
       {"First here.", "Second there.", "Third too.", "Fourth ends"}},
      {"No. 7 won the race. No. 8 quit.",
       {"No. 7 won the race.", "No. 8 quit."}},
      {"$One day.$ $$Next bit.$ ##Third.# Done.",
       {"$One day.$", "$$Next bit.$", "##Third.#", "Done."}},
      {"They met at St. Mary Road. The road was long.",
       {"They met at St. Mary Road.", "The road was long."}},
      // "lost." ends like the abbreviation "St." but follows a letter.
      {"Nothing was lost. All was found.",
       {"Nothing was lost.", "All was found."}},
      {"Is it done yet", {"Is it done yet"}},
      {"Really?! Yes!!", {"Really?!", "Yes!!"}},
      // Trailing abbreviation dots never split, by design.
      {"e.g. apples, i.e. fruit, etc. They vanished.",
       {"e.g. apples, i.e. fruit, etc. They vanished."}},
      {"Visit 221B Baker Rd. Mon. to Fri. only. OK.",
       {"Visit 221B Baker Rd. Mon. to Fri. only.", "OK."}},
      {"A dash break. Quote 'test.' End.",
       {"A dash break.", "Quote 'test.'", "End."}},
      {"The knight runs. The dragon sleeps. The castle stands. The river "
       "flows. The storm ends.",
       {"The knight runs.", "The dragon sleeps.", "The castle stands.",
        "The river flows.", "The storm ends."}},
  };
  std::size_t total = 0;
  for (const auto& c : cases) {
    CAPTURE(c.text);
    auto spans = an.segment_sentences(c.text);
    CHECK(cut(c.text, spans) == c.expected);
    total += c.expected.size();
  }
  CHECK(total == 50);
}

TEST_CASE("segment_sentences on the worked-example texts") {
  const TextAnalyzer& an = Env::get().analyzer;
  auto knight = an.segment_sentences(testsup::kKnightStory);
  CHECK(knight.size() == 9);
  // Sentence 4 opens the second paragraph.
  CHECK(testsup::kKnightStory.substr(knight[3].start, 8) == "Wielding");

  auto team = an.segment_sentences(testsup::kTeamResponse);
  CHECK(team.size() == 6);
  CHECK(testsup::kTeamResponse.substr(team[4].start, 11) == "This helped");
}

TEST_CASE("sentence counts survive wrap markers") {
  const TextAnalyzer& an = Env::get().analyzer;
  // The absorbed symbol run keeps the boundary where it was.
  std::string plain = "One day came. The battle was fierce. All was well.";
  std::string marked = "$$One day came.$ The battle was fierce. ##All was well.#";
  CHECK(an.segment_sentences(plain).size() == 3);
  CHECK(an.segment_sentences(marked).size() == 3);
}

TEST_CASE("sentence segmentation properties") {
  const TextAnalyzer& an = Env::get().analyzer;
  auto corpus = testsup::make_corpus(30, 505);
  for (const auto& s : corpus) {
    const std::string& text = s.response;
    auto sents = an.segment_sentences(text);
    auto paras = segment_paragraphs(text);

    // Ordered, non-overlapping, in-bounds.
    for (std::size_t i = 0; i < sents.size(); ++i) {
      REQUIRE(sents[i].start < sents[i].end);
      REQUIRE(sents[i].end <= text.size());
      if (i) REQUIRE(sents[i - 1].end <= sents[i].start);
    }

    // Containment: each sentence inside exactly one paragraph.
    for (const Span& sp : sents) {
      int owners = 0;
      for (const Span& pp : paras)
        if (pp.start <= sp.start && sp.end <= pp.end) ++owners;
      CHECK(owners == 1);
    }

    // Every non-whitespace scalar belongs to some sentence.
    std::size_t covered = 0, nonspace = 0;
    for (const Span& sp : sents) {
      std::size_t i = sp.start;
      while (i < sp.end) {
        auto [cp, len] = uni::decode(text, i);
        if (!uni::is_space(cp)) ++covered;
        i += len;
      }
    }
    std::size_t i = 0;
    while (i < text.size()) {
      auto [cp, len] = uni::decode(text, i);
      if (!uni::is_space(cp)) ++nonspace;
      i += len;
    }
    CHECK(covered == nonspace);
  }
}

TEST_CASE("monotone counts under append") {
  auto corpus = testsup::make_corpus(10, 606);
  for (const auto& s : corpus) {
    auto before = count_units(s.response);
    auto after = count_units(s.response + " More words arrive.");
    CHECK(after.chars >= before.chars);
    CHECK(after.letters >= before.letters);
    CHECK(after.words >= before.words);
  }
}

TEST_CASE("segmentation is case-stable without abbreviations") {
  const TextAnalyzer& an = Env::get().analyzer;
  const std::vector<std::string> texts = {
      "The fierce dragon defends the castle. The storm ends! Done?",
      "One here.\n\nTwo there. Three beyond.",
      testsup::kTeamResponse,
  };
  for (const auto& t : texts) {
    auto base = an.segment_sentences(t).size();
    CHECK(an.segment_sentences(uni::upper_copy(t)).size() == base);
    CHECK(an.segment_sentences(uni::lower_copy(t)).size() == base);
  }
}

TEST_CASE("pos_counts") {
  const TextAnalyzer& an = Env::get().analyzer;
  auto zero = an.pos_counts("");
  CHECK(zero.adjective == 0);
  CHECK(zero.noun == 0);
  CHECK(zero.verb == 0);

  auto red = an.pos_counts("the red dragon");
  CHECK(red.adjective >= 1);
  CHECK(red.noun >= 1);

  auto verby = an.pos_counts("the knight defends the castle");
  CHECK(verby.verb >= 1);

  // Suffix fallback for words outside the lexicon.
  CHECK(an.tag_token("zorblious") == PosTag::adjective);
  CHECK(an.tag_token("zorbliness") == PosTag::noun);
  CHECK(an.tag_token("zorblize") == PosTag::verb);
  CHECK(an.tag_token("zzq") == std::nullopt);

  // Possessive stem lookup.
  CHECK(an.tag_token("dragon's") == PosTag::noun);

  // Lexicon wins over suffix: "red" has no matching suffix but is listed.
  CHECK(an.tag_token("red") == PosTag::adjective);

  auto corpus = testsup::make_corpus(10, 707);
  for (const auto& s : corpus) {
    auto pc = an.pos_counts(s.response);
    auto wc = count_units(s.response).words;
    CHECK(pc.adjective + pc.noun + pc.verb <= wc);
  }
}

TEST_CASE("profile composes the pieces") {
  const TextAnalyzer& an = Env::get().analyzer;

  auto empty = an.profile("");
  CHECK(empty.char_count == 0);
  CHECK(empty.letter_count == 0);
  CHECK(empty.word_count == 0);
  CHECK(empty.words.empty());
  CHECK(empty.sentences.empty());
  CHECK(empty.paragraphs.empty());
  CHECK(empty.bullets.empty());
  CHECK(empty.punctuation_histogram.empty());
  CHECK(empty.keyword_candidates.empty());

  auto team = an.profile(testsup::kTeamResponse);
  CHECK(team.word_count == team.words.size());
  CHECK(team.sentences.size() == 6);
  CHECK(team.paragraphs.size() == 1);
  bool has_way = false;
  for (const auto& k : team.keyword_candidates)
    if (k == "way") has_way = true;
  CHECK(has_way);
  // Candidates are lowercase, alphabetic, length >= 3, non-stopword, unique.
  std::set<std::string> seen;
  for (const auto& k : team.keyword_candidates) {
    CHECK(uni::lower_copy(k) == k);
    CHECK(uni::scalar_count(k) >= 3);
    CHECK(an.tables().stopwords.count(k) == 0);
    CHECK(seen.insert(k).second);
  }
  CHECK(team.punctuation_histogram.at(".") == 6);

  auto knight = an.profile(testsup::kKnightStory);
  CHECK(knight.sentences.size() == 9);
  CHECK(knight.paragraphs.size() == 3);
  CHECK(knight.char_count == uni::scalar_count(testsup::kKnightStory));
  CHECK(knight.letter_count <= knight.char_count);
  for (const auto& c : knight.keyword_candidates) CHECK(c != "the");

  // Determinism: same input, identical structure.
  auto again = an.profile(testsup::kKnightStory);
  CHECK(again.words == knight.words);
  CHECK(again.sentences == knight.sentences);
  CHECK(again.paragraphs == knight.paragraphs);
  CHECK(again.punctuation_histogram == knight.punctuation_histogram);
  CHECK(again.keyword_candidates == knight.keyword_candidates);
}
