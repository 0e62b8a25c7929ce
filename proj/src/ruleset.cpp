#include "ruler/rules.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "ruler/errors.hpp"
#include "ruler/unicode.hpp"

namespace ruler {

namespace {

struct RuleRow {
  RuleId id;
  RuleFamily family;
  std::string_view name;
  bool mutates;
  std::string_view conflict_group;
  bool repeatable;
};

// Catalog skeleton in RuleId order. mutates_response is false exactly for
// the keyword/count rules; repeatable marks the rules whose description
// allows several applications to one sample.
constexpr RuleRow kRows[kRuleCount] = {
    {RuleId::KeywordAppearance, RuleFamily::KeywordFrequency,
     "KeywordAppearance", false, "", true},
    {RuleId::KeywordFrequency, RuleFamily::KeywordFrequency,
     "KeywordFrequency", false, "", true},
    {RuleId::NumAdjectives, RuleFamily::NumberConstraint, "NumAdjectives",
     false, "", false},
    {RuleId::NumNouns, RuleFamily::NumberConstraint, "NumNouns", false, "",
     false},
    {RuleId::NumVerbs, RuleFamily::NumberConstraint, "NumVerbs", false, "",
     false},
    {RuleId::NumCharacters, RuleFamily::NumberConstraint, "NumCharacters",
     false, "", false},
    {RuleId::NumLetters, RuleFamily::NumberConstraint, "NumLetters", false,
     "", false},
    {RuleId::NumWords, RuleFamily::NumberConstraint, "NumWords", false, "",
     false},
    {RuleId::NumSentences, RuleFamily::NumberConstraint, "NumSentences",
     false, "", false},
    {RuleId::NumParagraphs, RuleFamily::NumberConstraint, "NumParagraphs",
     false, "", false},
    {RuleId::NumBullets, RuleFamily::NumberConstraint, "NumBullets", false,
     "", false},
    {RuleId::InstructionRepetition, RuleFamily::Repetition,
     "InstructionRepetition", true, "instruction-prefix", false},
    {RuleId::ResponseRepetition, RuleFamily::Repetition, "ResponseRepetition",
     true, "response-repeat", false},
    {RuleId::UpCase, RuleFamily::CaseAll, "UpCase", true, "case-exclusive",
     false},
    {RuleId::LowCase, RuleFamily::CaseAll, "LowCase", true, "case-exclusive",
     false},
    {RuleId::LetterCase, RuleFamily::CaseTarget, "LetterCase", true, "", true},
    {RuleId::KeywordCase, RuleFamily::CaseTarget, "KeywordCase", true, "",
     false},
    {RuleId::SentenceCase, RuleFamily::CaseTarget, "SentenceCase", true,
     "case-exclusive", false},
    {RuleId::ParagraphCase, RuleFamily::CaseTarget, "ParagraphCase", true,
     "case-exclusive", false},
    {RuleId::PunctAllRemoval, RuleFamily::PunctuationAll, "PunctAllRemoval",
     true, "punctuation", false},
    {RuleId::PunctAllReplacement, RuleFamily::PunctuationAll,
     "PunctAllReplacement", true, "punctuation", false},
    {RuleId::PunctTargetRemoval, RuleFamily::PunctuationTarget,
     "PunctTargetRemoval", true, "punctuation", false},
    {RuleId::PunctTargetReplacement, RuleFamily::PunctuationTarget,
     "PunctTargetReplacement", true, "punctuation", false},
    {RuleId::KeywordWrapping, RuleFamily::FormatWrapping, "KeywordWrapping",
     true, "", true},
    {RuleId::SentenceWrapping, RuleFamily::FormatWrapping, "SentenceWrapping",
     true, "", false},
    {RuleId::BulletWrapping, RuleFamily::FormatWrapping, "BulletWrapping",
     true, "", false},
    {RuleId::ParagraphWrapping, RuleFamily::FormatWrapping,
     "ParagraphWrapping", true, "", false},
    {RuleId::InstructionWrapping, RuleFamily::FormattedRepeating,
     "InstructionWrapping", true, "instruction-prefix", false},
    {RuleId::ResponseWrapping, RuleFamily::FormattedRepeating,
     "ResponseWrapping", true, "response-repeat", false},
};

// Placeholder names each rule's templates must contain, and nothing else.
std::vector<std::string> required_placeholders(RuleId id) {
  switch (id) {
    case RuleId::KeywordAppearance: return {"Keyword"};
    case RuleId::KeywordFrequency: return {"N", "Keyword"};
    case RuleId::NumAdjectives:
    case RuleId::NumNouns:
    case RuleId::NumVerbs:
    case RuleId::NumCharacters:
    case RuleId::NumLetters:
    case RuleId::NumWords:
    case RuleId::NumSentences:
    case RuleId::NumParagraphs:
    case RuleId::NumBullets: return {"N"};
    case RuleId::InstructionRepetition: return {};
    case RuleId::ResponseRepetition: return {"N"};
    case RuleId::UpCase:
    case RuleId::LowCase: return {};
    case RuleId::LetterCase: return {"x"};
    case RuleId::KeywordCase: return {"Keyword"};
    case RuleId::SentenceCase:
    case RuleId::ParagraphCase: return {"i"};
    case RuleId::PunctAllRemoval: return {};
    case RuleId::PunctAllReplacement: return {"Symbol"};
    case RuleId::PunctTargetRemoval: return {"Punctuation"};
    case RuleId::PunctTargetReplacement: return {"Symbol", "Punctuation"};
    case RuleId::KeywordWrapping: return {"Keyword", "Format"};
    case RuleId::SentenceWrapping:
    case RuleId::BulletWrapping:
    case RuleId::ParagraphWrapping: return {"i", "Format"};
    case RuleId::InstructionWrapping: return {"Format"};
    case RuleId::ResponseWrapping: return {"N", "Format"};
  }
  return {};
}

std::set<std::string> placeholders_in(std::string_view tmpl) {
  std::set<std::string> found;
  std::size_t i = 0;
  while ((i = tmpl.find('{', i)) != std::string_view::npos) {
    std::size_t close = tmpl.find('}', i + 1);
    if (close == std::string_view::npos) {
      found.insert(std::string(tmpl.substr(i)));  // reported as malformed
      break;
    }
    found.insert(std::string(tmpl.substr(i + 1, close - i - 1)));
    i = close + 1;
  }
  return found;
}

std::string wrap_spans(std::string_view text, const std::vector<Span>& spans,
                       const std::string& open, const std::string& close) {
  std::string out;
  out.reserve(text.size() + spans.size() * (open.size() + close.size()));
  std::size_t pos = 0;
  for (const Span& s : spans) {
    out.append(text.substr(pos, s.start - pos));
    out.append(open);
    out.append(text.substr(s.start, s.end - s.start));
    out.append(close);
    pos = s.end;
  }
  out.append(text.substr(pos));
  return out;
}

std::string uppercase_span(std::string_view text, Span s) {
  std::string out(text.substr(0, s.start));
  out += uni::upper_copy(text.substr(s.start, s.end - s.start));
  out += text.substr(s.end);
  return out;
}

// First content offset of a bullet: past the marker and the whitespace
// separating it from the item text.
std::size_t bullet_content_start(std::string_view text, Span bullet) {
  std::size_t i = bullet.start;
  auto [cp, len] = uni::decode(text, i);
  if (uni::is_digit(cp)) {
    while (i < bullet.end && uni::is_digit(uni::decode(text, i).cp))
      i += uni::decode(text, i).len;
    if (i < bullet.end) i += uni::decode(text, i).len;  // '.' or ')'
  } else {
    i += len;  // '-', '*', or bullet dot
  }
  while (i < bullet.end) {
    auto [c, l] = uni::decode(text, i);
    if (!uni::is_space(c)) break;
    i += l;
  }
  return i;
}

bool occurs(std::string_view text, const std::string& needle) {
  return text.find(needle) != std::string_view::npos;
}

std::vector<int> available_format_indices(const std::vector<FormatPair>& pool,
                                          std::string_view response) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
    if (!occurs(response, pool[i].open) && !occurs(response, pool[i].close))
      out.push_back(i);
  }
  return out;
}

std::vector<int> available_symbol_indices(const std::vector<std::string>& pool,
                                          std::string_view response) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
    if (!occurs(response, pool[i])) out.push_back(i);
  }
  return out;
}

// ASCII letters with at least three case-insensitive occurrences, in
// alphabetical order.
std::vector<char> frequent_letters(std::string_view text) {
  int counts[26] = {};
  for (char c : text) {
    if (c >= 'a' && c <= 'z') ++counts[c - 'a'];
    else if (c >= 'A' && c <= 'Z') ++counts[c - 'A'];
  }
  std::vector<char> out;
  for (int i = 0; i < 26; ++i) {
    if (counts[i] >= 3) out.push_back(static_cast<char>('a' + i));
  }
  return out;
}

long ceil_fifth(long t) { return (t + 4) / 5; }

// kinds listed in fixed order so the draw sequence is reproducible.
Comparator draw_comparator(long true_count, Rng& rng) {
  std::vector<CmpKind> kinds{CmpKind::exact};
  if (true_count >= 2) kinds.push_back(CmpKind::more);
  kinds.push_back(CmpKind::less);
  CmpKind kind = kinds[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1))];
  if (kind == CmpKind::exact) return {kind, true_count};
  long x = static_cast<long>(
      rng.uniform_int(1, std::max<long>(2, ceil_fifth(true_count))));
  if (kind == CmpKind::more) return {kind, std::max<long>(1, true_count - x)};
  return {kind, true_count + x};
}

std::string repeat_join(std::string_view piece, long n,
                        std::string_view sep) {
  std::string out;
  out.reserve(piece.size() * static_cast<std::size_t>(n) +
              sep.size() * static_cast<std::size_t>(n - 1));
  for (long i = 0; i < n; ++i) {
    if (i) out.append(sep);
    out.append(piece);
  }
  return out;
}

}  // namespace

std::string_view to_string(RuleId id) {
  return kRows[static_cast<int>(id)].name;
}

std::optional<RuleId> rule_from_string(std::string_view name) {
  for (const RuleRow& r : kRows) {
    if (r.name == name) return r.id;
  }
  return std::nullopt;
}

std::array<RuleId, kRuleCount> all_rules() {
  std::array<RuleId, kRuleCount> out{};
  for (int i = 0; i < kRuleCount; ++i) out[static_cast<std::size_t>(i)] = kRows[i].id;
  return out;
}

RuleFamily family_of(RuleId id) {
  return kRows[static_cast<int>(id)].family;
}

std::string_view to_string(RuleFamily family) {
  switch (family) {
    case RuleFamily::KeywordFrequency: return "Keyword Frequency";
    case RuleFamily::NumberConstraint: return "Number Constraint";
    case RuleFamily::Repetition: return "Repetition";
    case RuleFamily::CaseAll: return "Case All";
    case RuleFamily::CaseTarget: return "Case Target";
    case RuleFamily::PunctuationAll: return "Punctuation All";
    case RuleFamily::PunctuationTarget: return "Punctuation Target";
    case RuleFamily::FormatWrapping: return "Format Wrapping";
    case RuleFamily::FormattedRepeating: return "Formatted Repeating";
  }
  return "";
}

std::string_view to_string(CmpKind kind) {
  switch (kind) {
    case CmpKind::more: return "more";
    case CmpKind::less: return "less";
    case CmpKind::exact: return "exact";
  }
  return "";
}

std::string substitute_placeholders(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out.push_back(tmpl[i++]);
      continue;
    }
    std::size_t close = tmpl.find('}', i + 1);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    std::string_view name = tmpl.substr(i + 1, close - i - 1);
    auto it = std::find_if(values.begin(), values.end(),
                           [&](const auto& kv) { return kv.first == name; });
    if (it == values.end())
      throw MalformedTemplate("no value for placeholder {" +
                              std::string(name) + "}");
    out.append(it->second);
    i = close + 1;
  }
  return out;
}

std::string ordinal(long n) {
  std::string num = std::to_string(n);
  long mod100 = n % 100;
  long mod10 = n % 10;
  if (mod100 >= 11 && mod100 <= 13) return num + "th";
  if (mod10 == 1) return num + "st";
  if (mod10 == 2) return num + "nd";
  if (mod10 == 3) return num + "rd";
  return num + "th";
}

std::string comparator_phrase(const Comparator& cmp) {
  switch (cmp.kind) {
    case CmpKind::more: return "more than " + std::to_string(cmp.threshold);
    case CmpKind::less: return "fewer than " + std::to_string(cmp.threshold);
    case CmpKind::exact: return "exactly " + std::to_string(cmp.threshold);
  }
  return "";
}

Catalog::Catalog(const TextAnalyzer& analyzer, RuleData data)
    : analyzer_(analyzer), data_(std::move(data)) {
  for (const FormatPair& f : data_.formats) {
    for (const std::string* m : {&f.open, &f.close}) {
      std::size_t i = 0;
      while (i < m->size()) {
        auto [cp, len] = uni::decode(*m, i);
        if (uni::is_alnum(cp) || uni::is_space(cp))
          throw ParseError("format markers must be symbol-only: " + *m);
        i += len;
      }
    }
  }
  for (const std::string& s : data_.symbols) {
    if (uni::scalar_count(s) != 1 || uni::is_alnum(uni::decode(s, 0).cp) ||
        uni::is_space(uni::decode(s, 0).cp))
      throw ParseError("symbols must be single non-alphanumeric marks: " + s);
  }

  specs_.reserve(kRuleCount);
  for (const RuleRow& row : kRows) {
    auto it = data_.templates.find(std::string(row.name));
    if (it == data_.templates.end() || it->second.empty())
      throw MalformedTemplate("no templates for rule " + std::string(row.name));
    std::set<std::string> required;
    for (auto& p : required_placeholders(row.id)) required.insert(p);
    for (const std::string& t : it->second) {
      if (placeholders_in(t) != required)
        throw MalformedTemplate("template placeholders mismatch for " +
                                std::string(row.name) + ": " + t);
    }
    specs_.push_back({row.id, row.family, it->second, row.mutates,
                      std::string(row.conflict_group), row.repeatable});
  }
}

const RuleSpec& Catalog::spec(RuleId id) const {
  return specs_[static_cast<std::size_t>(id)];
}

bool Catalog::applicable(RuleId id, const SftSample& sample,
                         const TextProfile& prof) const {
  if (sample.response.empty()) return false;
  const std::string& resp = sample.response;
  auto format_free = [&] {
    return !available_format_indices(data_.formats, resp).empty();
  };
  auto symbol_free = [&] {
    return !available_symbol_indices(data_.symbols, resp).empty();
  };
  switch (id) {
    case RuleId::KeywordAppearance:
    case RuleId::KeywordFrequency:
    case RuleId::KeywordCase:
      return !prof.keyword_candidates.empty();
    case RuleId::NumAdjectives: return prof.pos.adjective >= 1;
    case RuleId::NumNouns: return prof.pos.noun >= 1;
    case RuleId::NumVerbs: return prof.pos.verb >= 1;
    case RuleId::NumCharacters: return prof.char_count >= 1;
    case RuleId::NumLetters: return prof.letter_count >= 1;
    case RuleId::NumWords: return prof.word_count >= 1;
    case RuleId::NumSentences: return !prof.sentences.empty();
    case RuleId::NumParagraphs: return !prof.paragraphs.empty();
    case RuleId::NumBullets: return !prof.bullets.empty();
    case RuleId::InstructionRepetition: return !sample.instruction.empty();
    case RuleId::ResponseRepetition: return true;
    case RuleId::UpCase:
    case RuleId::LowCase:
      return prof.letter_count >= 1;
    case RuleId::LetterCase: return !frequent_letters(resp).empty();
    case RuleId::SentenceCase: return !prof.sentences.empty();
    case RuleId::ParagraphCase: return !prof.paragraphs.empty();
    case RuleId::PunctAllRemoval: return !prof.punctuation_histogram.empty();
    case RuleId::PunctAllReplacement:
      return !prof.punctuation_histogram.empty() && symbol_free();
    case RuleId::PunctTargetRemoval:
      return !prof.punctuation_histogram.empty();
    case RuleId::PunctTargetReplacement:
      return !prof.punctuation_histogram.empty() && symbol_free();
    case RuleId::KeywordWrapping:
      return !prof.keyword_candidates.empty() && format_free();
    case RuleId::SentenceWrapping:
      return !prof.sentences.empty() && format_free();
    case RuleId::BulletWrapping:
      return !prof.bullets.empty() && format_free();
    case RuleId::ParagraphWrapping:
      return !prof.paragraphs.empty() && format_free();
    case RuleId::InstructionWrapping:
      return !sample.instruction.empty() && format_free();
    case RuleId::ResponseWrapping: return format_free();
  }
  return false;
}

RuleInstance Catalog::bind(RuleId id, const SftSample& sample,
                           const TextProfile& prof, Rng& rng) const {
  if (!applicable(id, sample, prof))
    throw NotApplicable("rule " + std::string(to_string(id)) +
                        " is not applicable to sample " +
                        std::to_string(sample.id));
  const std::string& resp = sample.response;
  RuleInstance inst;
  inst.rule = id;
  RuleParams& p = inst.params;

  auto pick_keyword = [&] {
    const auto& c = prof.keyword_candidates;
    return c[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(c.size()) - 1))];
  };
  auto pick_format = [&] {
    std::vector<int> avail = available_format_indices(data_.formats, resp);
    int idx = avail[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(avail.size()) - 1))];
    return data_.formats[static_cast<std::size_t>(idx)];
  };
  auto pick_symbol = [&] {
    std::vector<int> avail = available_symbol_indices(data_.symbols, resp);
    int idx = avail[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(avail.size()) - 1))];
    return data_.symbols[static_cast<std::size_t>(idx)];
  };
  auto pick_index = [&](std::size_t unit_count) {
    return static_cast<long>(
        rng.uniform_int(1, static_cast<std::int64_t>(unit_count)));
  };
  auto pick_target = [&] {
    std::vector<std::string> keys;
    keys.reserve(prof.punctuation_histogram.size());
    for (const auto& [k, v] : prof.punctuation_histogram) keys.push_back(k);
    return keys[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(keys.size()) - 1))];
  };

  switch (id) {
    case RuleId::KeywordAppearance:
      p.keyword = pick_keyword();
      break;
    case RuleId::KeywordFrequency: {
      p.keyword = pick_keyword();
      long t = static_cast<long>(keyword_occurrences(resp, *p.keyword).size());
      p.comparator = draw_comparator(t, rng);
      break;
    }
    case RuleId::NumAdjectives:
      p.comparator = draw_comparator(static_cast<long>(prof.pos.adjective), rng);
      break;
    case RuleId::NumNouns:
      p.comparator = draw_comparator(static_cast<long>(prof.pos.noun), rng);
      break;
    case RuleId::NumVerbs:
      p.comparator = draw_comparator(static_cast<long>(prof.pos.verb), rng);
      break;
    case RuleId::NumCharacters:
      p.comparator = draw_comparator(static_cast<long>(prof.char_count), rng);
      break;
    case RuleId::NumLetters:
      p.comparator = draw_comparator(static_cast<long>(prof.letter_count), rng);
      break;
    case RuleId::NumWords:
      p.comparator = draw_comparator(static_cast<long>(prof.word_count), rng);
      break;
    case RuleId::NumSentences:
      p.comparator =
          draw_comparator(static_cast<long>(prof.sentences.size()), rng);
      break;
    case RuleId::NumParagraphs:
      p.comparator =
          draw_comparator(static_cast<long>(prof.paragraphs.size()), rng);
      break;
    case RuleId::NumBullets:
      p.comparator =
          draw_comparator(static_cast<long>(prof.bullets.size()), rng);
      break;
    case RuleId::InstructionRepetition:
      p.instruction_ref = sample.instruction;
      break;
    case RuleId::ResponseRepetition:
      p.count = static_cast<long>(rng.uniform_int(2, 4));
      break;
    case RuleId::UpCase:
    case RuleId::LowCase:
      break;
    case RuleId::LetterCase: {
      std::vector<char> letters = frequent_letters(resp);
      char c = letters[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(letters.size()) - 1))];
      p.letter = std::string(1, c);
      break;
    }
    case RuleId::KeywordCase:
      p.keyword = pick_keyword();
      break;
    case RuleId::SentenceCase:
      p.index = pick_index(prof.sentences.size());
      break;
    case RuleId::ParagraphCase:
      p.index = pick_index(prof.paragraphs.size());
      break;
    case RuleId::PunctAllRemoval:
      break;
    case RuleId::PunctAllReplacement:
      p.symbol = pick_symbol();
      break;
    case RuleId::PunctTargetRemoval:
      p.target_punct = pick_target();
      break;
    case RuleId::PunctTargetReplacement:
      p.target_punct = pick_target();
      p.symbol = pick_symbol();
      break;
    case RuleId::KeywordWrapping:
      p.keyword = pick_keyword();
      p.format = pick_format();
      break;
    case RuleId::SentenceWrapping:
      p.index = pick_index(prof.sentences.size());
      p.format = pick_format();
      break;
    case RuleId::BulletWrapping:
      p.index = pick_index(prof.bullets.size());
      p.format = pick_format();
      break;
    case RuleId::ParagraphWrapping:
      p.index = pick_index(prof.paragraphs.size());
      p.format = pick_format();
      break;
    case RuleId::InstructionWrapping:
      p.instruction_ref = sample.instruction;
      p.format = pick_format();
      break;
    case RuleId::ResponseWrapping:
      p.count = static_cast<long>(rng.uniform_int(2, 4));
      p.format = pick_format();
      break;
  }
  inst.placement = rng.bernoulli(0.5) ? Placement::prepend : Placement::append;
  Rng unused(0);
  render_instruction(inst, TemplateMode::single, unused);
  return inst;
}

std::string Catalog::render_instruction(RuleInstance& instance,
                                        TemplateMode mode, Rng& rng) const {
  const RuleSpec& s = spec(instance.rule);
  int idx = 0;
  if (mode == TemplateMode::diverse) {
    idx = static_cast<int>(
        rng.uniform_int(0, static_cast<std::int64_t>(s.templates.size()) - 1));
  }
  return render_with_template(instance, idx);
}

std::string Catalog::render_with_template(RuleInstance& instance,
                                          int template_index) const {
  const RuleSpec& s = spec(instance.rule);
  instance.template_index = template_index;
  const RuleParams& p = instance.params;
  std::vector<std::pair<std::string, std::string>> values;
  if (p.keyword) values.emplace_back("Keyword", *p.keyword);
  if (p.comparator) values.emplace_back("N", comparator_phrase(*p.comparator));
  if (p.count) values.emplace_back("N", std::to_string(*p.count));
  if (p.index) values.emplace_back("i", ordinal(*p.index));
  if (p.format)
    values.emplace_back("Format", p.format->open + " " + p.format->close);
  if (p.symbol) values.emplace_back("Symbol", *p.symbol);
  if (p.target_punct) values.emplace_back("Punctuation", *p.target_punct);
  if (p.letter) values.emplace_back("x", *p.letter);
  instance.rendered_instruction = substitute_placeholders(
      s.templates[static_cast<std::size_t>(instance.template_index)], values);
  return instance.rendered_instruction;
}

std::string Catalog::transform_response(const RuleInstance& instance,
                                        std::string_view response) const {
  const RuleParams& p = instance.params;
  auto unit_span = [&](const std::vector<Span>& units,
                       std::string_view what) -> Span {
    long idx = p.index.value_or(0);
    if (idx < 1 || static_cast<std::size_t>(idx) > units.size())
      throw CompositionConflict(
          std::string(to_string(instance.rule)) + ": bound " +
          std::string(what) + " index " + std::to_string(idx) +
          " does not resolve (have " + std::to_string(units.size()) + ")");
    return units[static_cast<std::size_t>(idx - 1)];
  };

  switch (instance.rule) {
    case RuleId::KeywordAppearance:
    case RuleId::KeywordFrequency:
    case RuleId::NumAdjectives:
    case RuleId::NumNouns:
    case RuleId::NumVerbs:
    case RuleId::NumCharacters:
    case RuleId::NumLetters:
    case RuleId::NumWords:
    case RuleId::NumSentences:
    case RuleId::NumParagraphs:
    case RuleId::NumBullets:
      return std::string(response);

    case RuleId::InstructionRepetition:
      return *p.instruction_ref + "\n\n" + std::string(response);

    case RuleId::ResponseRepetition:
      return repeat_join(response, *p.count, "\n\n");

    case RuleId::UpCase:
      return uni::upper_copy(response);

    case RuleId::LowCase:
      return uni::lower_copy(response);

    case RuleId::LetterCase: {
      char target = (*p.letter)[0];
      std::string out;
      out.reserve(response.size());
      std::size_t i = 0;
      while (i < response.size()) {
        auto [cp, len] = uni::decode(response, i);
        if (uni::to_lower(cp) == static_cast<char32_t>(target)) {
          uni::append_utf8(out, uni::to_upper(cp));
        } else {
          out.append(response.substr(i, len));
        }
        i += len;
      }
      return out;
    }

    case RuleId::KeywordCase: {
      std::string out(response);
      // Right-to-left so earlier spans stay valid.
      std::vector<Span> spans = keyword_occurrences(response, *p.keyword);
      for (auto it = spans.rbegin(); it != spans.rend(); ++it)
        out = uppercase_span(out, *it);
      return out;
    }

    case RuleId::SentenceCase:
      return uppercase_span(
          response, unit_span(analyzer_.segment_sentences(response), "sentence"));

    case RuleId::ParagraphCase:
      return uppercase_span(
          response,
          unit_span(segment_paragraphs(response), "paragraph"));

    case RuleId::PunctAllRemoval:
    case RuleId::PunctAllReplacement: {
      std::string out;
      out.reserve(response.size());
      std::size_t i = 0;
      while (i < response.size()) {
        auto [cp, len] = uni::decode(response, i);
        if (uni::is_punct(cp)) {
          if (instance.rule == RuleId::PunctAllReplacement) out += *p.symbol;
        } else {
          out.append(response.substr(i, len));
        }
        i += len;
      }
      return out;
    }

    case RuleId::PunctTargetRemoval:
    case RuleId::PunctTargetReplacement: {
      std::string out;
      out.reserve(response.size());
      const std::string& target = *p.target_punct;
      std::size_t i = 0;
      while (i < response.size()) {
        auto [cp, len] = uni::decode(response, i);
        if (response.substr(i, len) == target) {
          if (instance.rule == RuleId::PunctTargetReplacement)
            out += *p.symbol;
        } else {
          out.append(response.substr(i, len));
        }
        i += len;
      }
      return out;
    }

    case RuleId::KeywordWrapping:
      return wrap_spans(response, keyword_occurrences(response, *p.keyword),
                        p.format->open, p.format->close);

    case RuleId::SentenceWrapping: {
      Span s = unit_span(analyzer_.segment_sentences(response), "sentence");
      return wrap_spans(response, {s}, p.format->open, p.format->close);
    }

    case RuleId::BulletWrapping: {
      Span b = unit_span(extract_bullets(response), "bullet");
      // Wrap the item text, not the marker, so the line keeps reading as a
      // bullet afterwards.
      std::size_t content = bullet_content_start(response, b);
      return wrap_spans(response, {{content, b.end}}, p.format->open,
                        p.format->close);
    }

    case RuleId::ParagraphWrapping: {
      Span s = unit_span(segment_paragraphs(response), "paragraph");
      return wrap_spans(response, {s}, p.format->open, p.format->close);
    }

    case RuleId::InstructionWrapping:
      return p.format->open + *p.instruction_ref + p.format->close + "\n\n" +
             std::string(response);

    case RuleId::ResponseWrapping:
      return repeat_join(
          p.format->open + std::string(response) + p.format->close, *p.count,
          "\n\n");
  }
  return std::string(response);
}

}  // namespace ruler
