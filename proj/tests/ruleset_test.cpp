#include "doctest.h"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "ruler/errors.hpp"
#include "ruler/rules.hpp"
#include "ruler/verify.hpp"
#include "support.hpp"

using namespace ruler;
using testsup::Env;

namespace {

SftSample sample_of(std::string response) {
  SftSample s;
  s.instruction = "Write something.";
  s.response = std::move(response);
  return s;
}

// Draws fresh instances until the comparator kind matches; the kind is
// picked uniformly so this terminates fast.
RuleInstance bind_with_kind(const Catalog& cat, RuleId id,
                            const SftSample& smp, const TextProfile& prof,
                            CmpKind kind) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    RuleInstance inst = cat.bind(id, smp, prof, rng);
    if (inst.params.comparator && inst.params.comparator->kind == kind)
      return inst;
  }
  REQUIRE(false);
  return {};
}

}  // namespace

TEST_CASE("registry holds all 29 rules in enum order") {
  const Catalog& cat = Env::get().catalog;
  const auto& reg = cat.registry();
  REQUIRE(reg.size() == 29);
  auto ids = all_rules();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    CHECK(reg[i].id == ids[i]);
    CHECK(reg[i].templates.size() == 10);
    CHECK(to_string(reg[i].family) == to_string(family_of(reg[i].id)));
  }

  CHECK(cat.spec(RuleId::UpCase).mutates_response);
  CHECK(!cat.spec(RuleId::NumWords).mutates_response);

  // The count/keyword constraints leave the response alone; everything
  // else rewrites it.
  const std::set<RuleId> non_mutating = {
      RuleId::KeywordAppearance, RuleId::KeywordFrequency,
      RuleId::NumAdjectives,     RuleId::NumNouns,
      RuleId::NumVerbs,          RuleId::NumCharacters,
      RuleId::NumLetters,        RuleId::NumWords,
      RuleId::NumSentences,      RuleId::NumParagraphs,
      RuleId::NumBullets};
  CHECK(non_mutating.size() == 11);
  for (const auto& spec : reg)
    CHECK(spec.mutates_response == (non_mutating.count(spec.id) == 0));

  const std::set<RuleId> repeatable = {
      RuleId::KeywordAppearance, RuleId::KeywordFrequency,
      RuleId::LetterCase, RuleId::KeywordWrapping};
  for (const auto& spec : reg)
    CHECK(spec.repeatable == (repeatable.count(spec.id) > 0));
}

TEST_CASE("rule names round-trip and families partition") {
  std::set<std::string> names;
  std::map<RuleFamily, int> family_sizes;
  for (RuleId id : all_rules()) {
    std::string name(to_string(id));
    CHECK(names.insert(name).second);
    auto back = rule_from_string(name);
    REQUIRE(back.has_value());
    CHECK(*back == id);
    ++family_sizes[family_of(id)];
  }
  CHECK(!rule_from_string("NoSuchRule").has_value());

  REQUIRE(family_sizes.size() == 9);
  CHECK(family_sizes[RuleFamily::KeywordFrequency] == 2);
  CHECK(family_sizes[RuleFamily::NumberConstraint] == 9);
  CHECK(family_sizes[RuleFamily::Repetition] == 2);
  CHECK(family_sizes[RuleFamily::CaseAll] == 2);
  CHECK(family_sizes[RuleFamily::CaseTarget] == 4);
  CHECK(family_sizes[RuleFamily::PunctuationAll] == 2);
  CHECK(family_sizes[RuleFamily::PunctuationTarget] == 2);
  CHECK(family_sizes[RuleFamily::FormatWrapping] == 4);
  CHECK(family_sizes[RuleFamily::FormattedRepeating] == 2);
}

TEST_CASE("applicability follows the response's characteristics") {
  const Catalog& cat = Env::get().catalog;
  const TextAnalyzer& an = Env::get().analyzer;

  SftSample no_bullets = sample_of("Just a line. And another.");
  auto prof = an.profile(no_bullets.response);
  CHECK(!cat.applicable(RuleId::NumBullets, no_bullets, prof));
  CHECK(!cat.applicable(RuleId::BulletWrapping, no_bullets, prof));
  CHECK(cat.applicable(RuleId::NumSentences, no_bullets, prof));

  SftSample team = sample_of(testsup::kTeamResponse);
  auto team_prof = an.profile(team.response);
  CHECK(cat.applicable(RuleId::KeywordWrapping, team, team_prof));
  CHECK(cat.applicable(RuleId::KeywordAppearance, team, team_prof));

  SftSample empty = sample_of("");
  auto empty_prof = an.profile(empty.response);
  for (RuleId id : all_rules()) CHECK(!cat.applicable(id, empty, empty_prof));

  // No letter reaches three occurrences, so LetterCase cannot bind.
  SftSample sparse = sample_of("Ab cd");
  CHECK(!cat.applicable(RuleId::LetterCase, sparse,
                        an.profile(sparse.response)));

  // No punctuation at all: nothing to remove or target.
  SftSample bare = sample_of("just words no stops");
  auto bare_prof = an.profile(bare.response);
  CHECK(!cat.applicable(RuleId::PunctTargetRemoval, bare, bare_prof));
  CHECK(!cat.applicable(RuleId::PunctAllRemoval, bare, bare_prof));
}

TEST_CASE("bind draws thresholds around the true count") {
  const Catalog& cat = Env::get().catalog;
  const TextAnalyzer& an = Env::get().analyzer;
  SftSample knight = sample_of(testsup::kKnightStory);
  auto prof = an.profile(knight.response);
  REQUIRE(prof.sentences.size() == 9);

  auto exact = bind_with_kind(cat, RuleId::NumSentences, knight, prof,
                              CmpKind::exact);
  CHECK(exact.params.comparator->threshold == 9);

  // Slack stays within [1, max(2, ceil(count/5))] and thresholds positive.
  const long max_slack = 2;  // ceil(9/5) = 2
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng rng(seed);
    auto inst = cat.bind(RuleId::NumSentences, knight, prof, rng);
    const auto& cmp = *inst.params.comparator;
    if (cmp.kind == CmpKind::exact) {
      CHECK(cmp.threshold == 9);
    } else if (cmp.kind == CmpKind::more) {
      CHECK(cmp.threshold < 9);
      CHECK(cmp.threshold >= 9 - max_slack);
      CHECK(cmp.threshold >= 1);
    } else {
      CHECK(cmp.threshold > 9);
      CHECK(cmp.threshold <= 9 + max_slack);
    }
  }
}

TEST_CASE("bind keyword and index draws come from the response") {
  const Catalog& cat = Env::get().catalog;
  const TextAnalyzer& an = Env::get().analyzer;

  SftSample team = sample_of(testsup::kTeamResponse);
  auto team_prof = an.profile(team.response);
  std::set<std::string> cands(team_prof.keyword_candidates.begin(),
                              team_prof.keyword_candidates.end());
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    Rng rng(seed);
    auto inst = cat.bind(RuleId::KeywordAppearance, team, team_prof, rng);
    REQUIRE(inst.params.keyword.has_value());
    CHECK(cands.count(*inst.params.keyword) == 1);
  }

  SftSample five = sample_of(
      "One stands. Two walk. Three run. Four rest. Five sleep.");
  auto five_prof = an.profile(five.response);
  REQUIRE(five_prof.sentences.size() == 5);
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    Rng rng(seed);
    auto inst = cat.bind(RuleId::SentenceWrapping, five, five_prof, rng);
    REQUIRE(inst.params.index.has_value());
    CHECK(*inst.params.index >= 1);
    CHECK(*inst.params.index <= 5);
    REQUIRE(inst.params.format.has_value());
  }
}

TEST_CASE("bind refuses inapplicable rules") {
  const Catalog& cat = Env::get().catalog;
  const TextAnalyzer& an = Env::get().analyzer;
  SftSample s = sample_of("No bullets in sight.");
  auto prof = an.profile(s.response);
  Rng rng(1);
  CHECK_THROWS_AS(cat.bind(RuleId::NumBullets, s, prof, rng), NotApplicable);
}

TEST_CASE("render produces the published keyword-wrapping phrasing") {
  const Catalog& cat = Env::get().catalog;
  RuleInstance inst;
  inst.rule = RuleId::KeywordWrapping;
  inst.params.keyword = "way";
  inst.params.format = FormatPair{"@", "@"};
  std::string text = cat.render_with_template(inst, 1);
  CHECK(text ==
        "Keep the word \"way\" bounded by \"@ @\" in the response if it "
        "appears.");
  CHECK(inst.rendered_instruction == text);
  CHECK(inst.template_index == 1);
}

TEST_CASE("render is total and deterministic") {
  const Catalog& cat = Env::get().catalog;
  const TextAnalyzer& an = Env::get().analyzer;
  auto corpus = testsup::make_corpus(6, 808);
  for (const auto& smp : corpus) {
    auto prof = an.profile(smp.response);
    for (RuleId id : all_rules()) {
      if (!cat.applicable(id, smp, prof)) continue;
      Rng rng(smp.id * 31 + 7);
      RuleInstance inst = cat.bind(id, smp, prof, rng);
      // Every template of the rule substitutes cleanly.
      for (int t = 0; t < 10; ++t) {
        std::string r = cat.render_with_template(inst, t);
        CAPTURE(to_string(id));
        CHECK(r.find('{') == std::string::npos);
        CHECK(r.find('}') == std::string::npos);
        CHECK(!r.empty());
      }
      // Diverse-mode draw is a pure function of the stream.
      Rng ra(99), rb(99);
      RuleInstance ia = inst, ib = inst;
      std::string sa = cat.render_instruction(ia, TemplateMode::diverse, ra);
      std::string sb = cat.render_instruction(ib, TemplateMode::diverse, rb);
      CHECK(sa == sb);
      CHECK(ia.template_index == ib.template_index);
      // Single mode pins template 0.
      Rng rc(5);
      cat.render_instruction(ia, TemplateMode::single, rc);
      CHECK(ia.template_index == 0);
    }
  }
}

TEST_CASE("transform examples") {
  const Catalog& cat = Env::get().catalog;

  RuleInstance kw;
  kw.rule = RuleId::KeywordWrapping;
  kw.params.keyword = "way";
  kw.params.format = FormatPair{"@", "@"};
  std::string wrapped = cat.transform_response(kw, testsup::kTeamResponse);
  CHECK(wrapped.find("most efficient @way@ possible") != std::string::npos);
  // Locality: removing the inserted markers recovers the input.
  std::string scrubbed = wrapped;
  std::string::size_type at;
  while ((at = scrubbed.find('@')) != std::string::npos)
    scrubbed.erase(at, 1);
  CHECK(scrubbed == testsup::kTeamResponse);

  RuleInstance up;
  up.rule = RuleId::UpCase;
  CHECK(cat.transform_response(up, "abc.") == "ABC.");

  RuleInstance low;
  low.rule = RuleId::LowCase;
  CHECK(cat.transform_response(low, "AbC!") == "abc!");

  RuleInstance ptrep;
  ptrep.rule = RuleId::PunctTargetReplacement;
  ptrep.params.target_punct = ",";
  ptrep.params.symbol = ";";
  CHECK(cat.transform_response(ptrep, "a, b, c") == "a; b; c");

  RuleInstance rr;
  rr.rule = RuleId::ResponseRepetition;
  rr.params.count = 2;
  CHECK(cat.transform_response(rr, "hi") == "hi\n\nhi");

  RuleInstance letc;
  letc.rule = RuleId::LetterCase;
  letc.params.letter = "a";
  CHECK(cat.transform_response(letc, "a banana and Ada") ==
        "A bAnAnA And AdA");

  RuleInstance kc;
  kc.rule = RuleId::KeywordCase;
  kc.params.keyword = "way";
  CHECK(cat.transform_response(kc, "the way leads this way.") ==
        "the WAY leads this WAY.");

  RuleInstance sc;
  sc.rule = RuleId::SentenceCase;
  sc.params.index = 2;
  CHECK(cat.transform_response(sc, "One here. Two there. Three end.") ==
        "One here. TWO THERE. Three end.");

  RuleInstance pc;
  pc.rule = RuleId::ParagraphCase;
  pc.params.index = 1;
  CHECK(cat.transform_response(pc, "first block\n\nsecond block") ==
        "FIRST BLOCK\n\nsecond block");

  RuleInstance par;
  par.rule = RuleId::PunctAllRemoval;
  CHECK(cat.transform_response(par, "Stop, look. And go!") ==
        "Stop look And go");

  RuleInstance parep;
  parep.rule = RuleId::PunctAllReplacement;
  parep.params.symbol = "~";
  CHECK(cat.transform_response(parep, "a, b.") == "a~ b~");

  RuleInstance ptr;
  ptr.rule = RuleId::PunctTargetRemoval;
  ptr.params.target_punct = ",";
  CHECK(cat.transform_response(ptr, "a, b. c,") == "a b. c");

  RuleInstance ir;
  ir.rule = RuleId::InstructionRepetition;
  ir.params.instruction_ref = "Name a color.";
  CHECK(cat.transform_response(ir, "Red.") == "Name a color.\n\nRed.");

  RuleInstance iw;
  iw.rule = RuleId::InstructionWrapping;
  iw.params.instruction_ref = "Name a color.";
  iw.params.format = FormatPair{"<<", ">>"};
  CHECK(cat.transform_response(iw, "Red.") == "<<Name a color.>>\n\nRed.");

  RuleInstance rw;
  rw.rule = RuleId::ResponseWrapping;
  rw.params.count = 2;
  rw.params.format = FormatPair{"[[", "]]"};
  CHECK(cat.transform_response(rw, "hi") == "[[hi]]\n\n[[hi]]");

  RuleInstance sw;
  sw.rule = RuleId::SentenceWrapping;
  sw.params.index = 2;
  sw.params.format = FormatPair{"##", "#"};
  CHECK(cat.transform_response(sw, "One here. Two there. Three end.") ==
        "One here. ##Two there.# Three end.");

  RuleInstance pw;
  pw.rule = RuleId::ParagraphWrapping;
  pw.params.index = 2;
  pw.params.format = FormatPair{"-|", "|-"};
  CHECK(cat.transform_response(pw, "first block\n\nsecond block") ==
        "first block\n\n-|second block|-");

  RuleInstance bw;
  bw.rule = RuleId::BulletWrapping;
  bw.params.index = 2;
  bw.params.format = FormatPair{"[[", "]]"};
  CHECK(cat.transform_response(bw, "- one\n- two\n- three") ==
        "- one\n- [[two]]\n- three");
  // Numbered markers keep their numerals outside the wrap.
  CHECK(cat.transform_response(bw, "1. one\n2. two\n3. three") ==
        "1. one\n2. [[two]]\n3. three");

  // Out-of-range composition target is a conflict, not silent misbehavior.
  RuleInstance sc_bad;
  sc_bad.rule = RuleId::SentenceCase;
  sc_bad.params.index = 5;
  CHECK_THROWS_AS(cat.transform_response(sc_bad, "Only one."),
                  CompositionConflict);
}

TEST_CASE("non-mutating rules return the response unchanged") {
  const Catalog& cat = Env::get().catalog;
  const TextAnalyzer& an = Env::get().analyzer;
  auto corpus = testsup::make_corpus(12, 909);
  for (const auto& smp : corpus) {
    auto prof = an.profile(smp.response);
    for (const auto& spec : cat.registry()) {
      if (spec.mutates_response) continue;
      if (!cat.applicable(spec.id, smp, prof)) continue;
      Rng rng(smp.id + 41);
      auto inst = cat.bind(spec.id, smp, prof, rng);
      CHECK(cat.transform_response(inst, smp.response) == smp.response);
    }
  }
}

TEST_CASE("exact comparators equal the profiled counts") {
  const Catalog& cat = Env::get().catalog;
  const TextAnalyzer& an = Env::get().analyzer;
  SftSample smp = sample_of(testsup::kKnightStory);
  auto prof = an.profile(smp.response);

  const std::vector<std::pair<RuleId, long>> expectations = {
      {RuleId::NumCharacters, static_cast<long>(prof.char_count)},
      {RuleId::NumLetters, static_cast<long>(prof.letter_count)},
      {RuleId::NumWords, static_cast<long>(prof.word_count)},
      {RuleId::NumSentences, static_cast<long>(prof.sentences.size())},
      {RuleId::NumParagraphs, static_cast<long>(prof.paragraphs.size())},
      {RuleId::NumAdjectives, static_cast<long>(prof.pos.adjective)},
      {RuleId::NumNouns, static_cast<long>(prof.pos.noun)},
      {RuleId::NumVerbs, static_cast<long>(prof.pos.verb)},
  };
  for (auto [id, want] : expectations) {
    CAPTURE(to_string(id));
    auto inst = bind_with_kind(cat, id, smp, prof, CmpKind::exact);
    CHECK(inst.params.comparator->threshold == want);
  }
}

TEST_CASE("every applicable rule satisfies its own constraint") {
  const Catalog& cat = Env::get().catalog;
  const TextAnalyzer& an = Env::get().analyzer;
  Verifier verifier(an);
  auto corpus = testsup::make_corpus(60, 2024);
  std::map<RuleId, int> hits;
  for (const auto& smp : corpus) {
    auto prof = an.profile(smp.response);
    for (RuleId id : all_rules()) {
      if (!cat.applicable(id, smp, prof)) continue;
      Rng rng(smp.id * 131 + static_cast<std::uint64_t>(id));
      RuleInstance inst = cat.bind(id, smp, prof, rng);
      std::string response_aug = cat.transform_response(inst, smp.response);
      std::string instruction_aug =
          smp.instruction + "\n" + inst.rendered_instruction;
      auto res = verifier.verify_constraint(inst, instruction_aug,
                                            response_aug);
      CAPTURE(to_string(id));
      CAPTURE(smp.id);
      CAPTURE(response_aug);
      CHECK(res.satisfied);
      ++hits[id];
    }
  }
  // The sweep must actually exercise the whole catalog.
  for (RuleId id : all_rules()) {
    CAPTURE(to_string(id));
    CHECK(hits[id] > 0);
  }
}

TEST_CASE("template files are validated at load") {
  const TextAnalyzer& an = Env::get().analyzer;
  testsup::TempDir tmp;

  // A file missing whole rule sections is rejected.
  std::string missing = tmp.file("missing.ini");
  testsup::spit(missing, "[NumWords]\nUse exactly {N} words.\n");
  CHECK_THROWS_AS(
      (Catalog(an, load_rule_data(RULER_TEST_DATA_DIR, missing))),
      MalformedTemplate);

  // A complete file with one wrong-placeholder line is rejected too:
  // NumWords takes {N} only, {Keyword} does not belong.
  std::string full = testsup::slurp(std::string(RULER_TEST_DATA_DIR) +
                                    "/templates.ini");
  std::string bad = tmp.file("bad.ini");
  testsup::spit(bad, full + "\n[NumWords]\nUse {Keyword} and {N} words.\n");
  CHECK_THROWS_AS(
      (Catalog(an, load_rule_data(RULER_TEST_DATA_DIR, bad))),
      MalformedTemplate);
}

TEST_CASE("marker and symbol catalogs are validated") {
  const TextAnalyzer& an = Env::get().analyzer;
  RuleData good = load_rule_data(RULER_TEST_DATA_DIR);

  RuleData bad_fmt = good;
  bad_fmt.formats.push_back({"ab", "ba"});  // letters break run absorption
  CHECK_THROWS_AS((Catalog(an, bad_fmt)), ParseError);

  RuleData bad_sym = good;
  bad_sym.symbols.push_back("xx");
  CHECK_THROWS_AS((Catalog(an, bad_sym)), ParseError);
}
