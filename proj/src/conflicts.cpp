#include "ruler/conflicts.hpp"

#include <initializer_list>

#include "ruler/unicode.hpp"

namespace ruler {

namespace {

using R = RuleId;

bool in(R r, std::initializer_list<R> set) {
  for (R s : set) {
    if (r == s) return true;
  }
  return false;
}

// (a in A and b in B) or (a in B and b in A)
bool cross(R a, R b, std::initializer_list<R> A, std::initializer_list<R> B) {
  return (in(a, A) && in(b, B)) || (in(a, B) && in(b, A));
}

constexpr std::initializer_list<R> kCounts = {
    R::NumAdjectives, R::NumNouns,      R::NumVerbs,
    R::NumCharacters, R::NumLetters,    R::NumWords,
    R::NumSentences,  R::NumParagraphs, R::NumBullets};

constexpr std::initializer_list<R> kWraps = {
    R::KeywordWrapping, R::SentenceWrapping, R::BulletWrapping,
    R::ParagraphWrapping};

constexpr std::initializer_list<R> kPunct = {
    R::PunctAllRemoval, R::PunctAllReplacement, R::PunctTargetRemoval,
    R::PunctTargetReplacement};

// Does this instance's punctuation target occur in the other's markers?
bool target_in_markers(const RuleInstance& punct, const RuleInstance& other) {
  if (!punct.params.target_punct || !other.params.format) return false;
  const FormatPair& f = *other.params.format;
  return (f.open + f.close).find(*punct.params.target_punct) !=
         std::string::npos;
}

}  // namespace

bool conflicts(const RuleInstance& a, const RuleInstance& b) {
  R ra = a.rule, rb = b.rule;

  // A rule joins a sample at most once; the keyword rules that may repeat
  // need distinct keywords.
  if (ra == rb) {
    if (in(ra, {R::KeywordAppearance, R::KeywordWrapping}) &&
        a.params.keyword && b.params.keyword)
      return uni::lower_copy(*a.params.keyword) ==
             uni::lower_copy(*b.params.keyword);
    return true;
  }

  // Prefixing the instruction onto the response invalidates any constraint
  // measured over the whole text; only presence (KeywordAppearance) and
  // whole-text repetition survive it.
  if (in(ra, {R::InstructionRepetition, R::InstructionWrapping}) ||
      in(rb, {R::InstructionRepetition, R::InstructionWrapping})) {
    R other = in(ra, {R::InstructionRepetition, R::InstructionWrapping}) ? rb : ra;
    return !in(other, {R::KeywordAppearance, R::ResponseRepetition});
  }

  // Whole-text and span case rules overwrite each other's target regions.
  if (in(ra, {R::UpCase, R::LowCase, R::SentenceCase, R::ParagraphCase}) &&
      in(rb, {R::UpCase, R::LowCase, R::SentenceCase, R::ParagraphCase}))
    return true;

  // Lowercasing everything undoes the targeted uppercase rules. (UpCase
  // composes with them: uppercasing more than required still satisfies.)
  if (cross(ra, rb, {R::LowCase}, {R::LetterCase, R::KeywordCase})) return true;

  // Punctuation rules all edit the same marks.
  if (in(ra, kPunct) && in(rb, kPunct)) return true;

  // Punctuation edits destroy sentence boundaries and bullet markers, merge
  // or split word tokens (hyphens, apostrophes), and can spawn keyword
  // occurrences after the case phase already ran.
  if (cross(ra, rb, kPunct,
            {R::NumSentences, R::SentenceCase, R::SentenceWrapping,
             R::NumBullets, R::BulletWrapping, R::NumWords, R::NumAdjectives,
             R::NumNouns, R::NumVerbs, R::KeywordFrequency,
             R::KeywordAppearance, R::KeywordCase}))
    return true;

  // Removals change the character count; one-for-one replacements keep it.
  if (cross(ra, rb, {R::PunctAllRemoval, R::PunctTargetRemoval},
            {R::NumCharacters}))
    return true;

  // All-punctuation checks cannot tolerate wrap markers, which are
  // punctuation themselves.
  if (cross(ra, rb, {R::PunctAllRemoval, R::PunctAllReplacement},
            {R::KeywordWrapping, R::SentenceWrapping, R::BulletWrapping,
             R::ParagraphWrapping, R::ResponseWrapping}))
    return true;

  // Targeted punctuation checks clash with markers only when the target
  // character actually occurs in them.
  if (in(ra, {R::PunctTargetRemoval, R::PunctTargetReplacement}) &&
      in(rb, {R::KeywordWrapping, R::SentenceWrapping, R::BulletWrapping,
              R::ParagraphWrapping, R::ResponseWrapping}))
    return target_in_markers(a, b);
  if (in(rb, {R::PunctTargetRemoval, R::PunctTargetReplacement}) &&
      in(ra, {R::KeywordWrapping, R::SentenceWrapping, R::BulletWrapping,
              R::ParagraphWrapping, R::ResponseWrapping}))
    return target_in_markers(b, a);

  // Repeating the response multiplies every count and cannot be combined
  // with the other repetition form.
  if (cross(ra, rb, {R::ResponseRepetition, R::ResponseWrapping},
            {R::ResponseRepetition, R::ResponseWrapping}))
    return true;
  if (cross(ra, rb, {R::ResponseRepetition, R::ResponseWrapping}, kCounts))
    return true;
  if (cross(ra, rb, {R::ResponseRepetition, R::ResponseWrapping},
            {R::KeywordFrequency}))
    return true;

  // Wrapped repetition splices markers between copies, which shifts the
  // indexed units the span rules were bound against.
  if (cross(ra, rb, {R::ResponseWrapping},
            {R::SentenceCase, R::ParagraphCase, R::SentenceWrapping,
             R::BulletWrapping, R::ParagraphWrapping}))
    return true;

  // Markers add characters.
  if (cross(ra, rb, kWraps, {R::NumCharacters})) return true;

  // Sentence/paragraph open markers land in front of bullet markers,
  // un-bulleting the line.
  if (cross(ra, rb, {R::SentenceWrapping, R::ParagraphWrapping},
            {R::NumBullets, R::BulletWrapping}))
    return true;

  return false;
}

}  // namespace ruler
