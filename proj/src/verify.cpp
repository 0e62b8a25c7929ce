#include "ruler/verify.hpp"

#include <string>

#include "ruler/unicode.hpp"

namespace ruler {

namespace {

bool is_symbol_scalar(char32_t cp) {
  return !uni::is_alnum(cp) && !uni::is_space(cp);
}

// Longest all-symbol run beginning at span.start.
Span leading_symbol_run(std::string_view text, Span span) {
  std::size_t i = span.start;
  while (i < span.end) {
    auto [cp, len] = uni::decode(text, i);
    if (!is_symbol_scalar(cp)) break;
    i += len;
  }
  return {span.start, i};
}

// Longest all-symbol run ending exactly at span.end.
Span trailing_symbol_run(std::string_view text, Span span) {
  std::size_t i = span.start;
  std::size_t run_start = span.end;
  while (i < span.end) {
    auto [cp, len] = uni::decode(text, i);
    if (is_symbol_scalar(cp)) {
      if (run_start == span.end) run_start = i;
    } else {
      run_start = span.end;
    }
    i += len;
  }
  return {run_start, span.end};
}

bool run_contains(std::string_view text, Span run, const std::string& needle) {
  return text.substr(run.start, run.size()).find(needle) !=
         std::string_view::npos;
}

// True when no scalar changes under the given case map, i.e. the text is
// already fully in that case. First counterexample span goes to *evidence.
template <char32_t (*Map)(char32_t)>
bool fully_cased(std::string_view text, Span span, std::vector<Span>* evidence) {
  std::size_t i = span.start;
  while (i < span.end) {
    auto [cp, len] = uni::decode(text, i);
    if (Map(cp) != cp) {
      if (evidence) evidence->push_back({i, i + len});
      return false;
    }
    i += len;
  }
  return true;
}

bool compare(const Comparator& cmp, long observed) {
  switch (cmp.kind) {
    case CmpKind::more: return observed > cmp.threshold;
    case CmpKind::less: return observed < cmp.threshold;
    case CmpKind::exact: return observed == cmp.threshold;
  }
  return false;
}

std::string count_observed(long observed, std::string_view unit,
                           const Comparator& cmp) {
  return std::to_string(observed) + " " + std::string(unit) + " vs " +
         comparator_phrase(cmp);
}

// N copies of one piece joined by blank lines, each copy framed by
// open/close when given. Reconstructed by length arithmetic, then compared
// byte-for-byte.
bool repetition_holds(std::string_view text, long n, const std::string& open,
                      const std::string& close, std::string* observed) {
  constexpr std::size_t kSep = 2;  // "\n\n"
  if (n < 1) {
    *observed = "repeat count " + std::to_string(n) + " is not positive";
    return false;
  }
  std::size_t un = static_cast<std::size_t>(n);
  std::size_t seps = kSep * (un - 1);
  if (text.size() < seps || (text.size() - seps) % un != 0) {
    *observed = "length " + std::to_string(text.size()) +
                " does not split into " + std::to_string(n) + " copies";
    return false;
  }
  std::size_t piece_len = (text.size() - seps) / un;
  std::string_view piece = text.substr(0, piece_len);
  if (piece.size() < open.size() + close.size() ||
      piece.substr(0, open.size()) != open ||
      piece.substr(piece.size() - close.size()) != close) {
    *observed = "copy lacks the framing markers";
    return false;
  }
  std::size_t pos = piece_len;
  for (long j = 1; j < n; ++j) {
    if (text.substr(pos, kSep) != "\n\n" ||
        text.substr(pos + kSep, piece_len) != piece) {
      *observed = "copy " + std::to_string(j + 1) + " differs from copy 1";
      return false;
    }
    pos += kSep + piece_len;
  }
  *observed = std::to_string(n) + " identical copies of " +
              std::to_string(piece_len) + " bytes";
  return true;
}

}  // namespace

ConstraintResult Verifier::verify_constraint(const RuleInstance& instance,
                                             std::string_view instruction_aug,
                                             std::string_view response_aug) const {
  (void)instruction_aug;  // constraints are measured over the response
  const RuleParams& p = instance.params;
  ConstraintResult r;
  r.rule = instance.rule;

  auto count_rule = [&](long observed, std::string_view unit) {
    r.satisfied = compare(*p.comparator, observed);
    r.observed = count_observed(observed, unit, *p.comparator);
  };
  auto indexed_unit = [&](const std::vector<Span>& units,
                          std::string_view what) -> std::optional<Span> {
    long idx = p.index.value_or(0);
    if (idx < 1 || static_cast<std::size_t>(idx) > units.size()) {
      r.satisfied = false;
      r.observed = std::string(what) + " " + std::to_string(idx) +
                   " out of range (" + std::to_string(units.size()) + " " +
                   std::string(what) + "s)";
      return std::nullopt;
    }
    return units[static_cast<std::size_t>(idx - 1)];
  };

  switch (instance.rule) {
    case RuleId::KeywordAppearance: {
      std::vector<Span> occ = keyword_occurrences(response_aug, *p.keyword);
      r.satisfied = !occ.empty();
      r.observed = std::to_string(occ.size()) + " occurrences of \"" +
                   *p.keyword + "\"";
      r.span_evidence = std::move(occ);
      break;
    }
    case RuleId::KeywordFrequency: {
      std::vector<Span> occ = keyword_occurrences(response_aug, *p.keyword);
      long n = static_cast<long>(occ.size());
      r.satisfied = compare(*p.comparator, n);
      r.observed = count_observed(n, "occurrences of \"" + *p.keyword + "\"",
                                  *p.comparator);
      r.span_evidence = std::move(occ);
      break;
    }
    case RuleId::NumAdjectives:
      count_rule(static_cast<long>(analyzer_.pos_counts(response_aug).adjective),
                 "adjectives");
      break;
    case RuleId::NumNouns:
      count_rule(static_cast<long>(analyzer_.pos_counts(response_aug).noun),
                 "nouns");
      break;
    case RuleId::NumVerbs:
      count_rule(static_cast<long>(analyzer_.pos_counts(response_aug).verb),
                 "verbs");
      break;
    case RuleId::NumCharacters:
      count_rule(static_cast<long>(count_units(response_aug).chars),
                 "characters");
      break;
    case RuleId::NumLetters:
      count_rule(static_cast<long>(count_units(response_aug).letters),
                 "letters");
      break;
    case RuleId::NumWords:
      count_rule(static_cast<long>(count_units(response_aug).words), "words");
      break;
    case RuleId::NumSentences:
      count_rule(
          static_cast<long>(analyzer_.segment_sentences(response_aug).size()),
          "sentences");
      break;
    case RuleId::NumParagraphs:
      count_rule(static_cast<long>(segment_paragraphs(response_aug).size()),
                 "paragraphs");
      break;
    case RuleId::NumBullets:
      count_rule(static_cast<long>(extract_bullets(response_aug).size()),
                 "bullets");
      break;

    case RuleId::InstructionRepetition: {
      std::string prefix = *p.instruction_ref + "\n\n";
      r.satisfied = response_aug.substr(0, prefix.size()) == prefix;
      r.observed = r.satisfied ? "instruction precedes the response"
                               : "instruction prefix missing";
      if (r.satisfied) r.span_evidence.push_back({0, prefix.size()});
      break;
    }
    case RuleId::ResponseRepetition:
      r.satisfied = repetition_holds(response_aug, *p.count, "", "", &r.observed);
      break;

    case RuleId::UpCase:
      r.satisfied = fully_cased<uni::to_upper>(
          response_aug, {0, response_aug.size()}, &r.span_evidence);
      r.observed = r.satisfied ? "no lowercase letters" : "lowercase letter found";
      break;
    case RuleId::LowCase:
      r.satisfied = fully_cased<uni::to_lower>(
          response_aug, {0, response_aug.size()}, &r.span_evidence);
      r.observed = r.satisfied ? "no uppercase letters" : "uppercase letter found";
      break;

    case RuleId::LetterCase: {
      char32_t target = static_cast<char32_t>((*p.letter)[0]);
      r.satisfied = true;
      std::size_t total = 0;
      std::size_t i = 0;
      while (i < response_aug.size()) {
        auto [cp, len] = uni::decode(response_aug, i);
        if (uni::to_lower(cp) == target) {
          ++total;
          if (cp != uni::to_upper(cp)) {
            r.satisfied = false;
            r.span_evidence.push_back({i, i + len});
          }
        }
        i += len;
      }
      r.observed = std::to_string(total) + " occurrences of letter '" +
                   *p.letter + "'" +
                   (r.satisfied ? ", all uppercase" : ", not all uppercase");
      break;
    }

    case RuleId::KeywordCase: {
      std::vector<Span> occ = keyword_occurrences(response_aug, *p.keyword);
      r.satisfied = true;
      for (const Span& s : occ) {
        if (!fully_cased<uni::to_upper>(response_aug, s, &r.span_evidence))
          r.satisfied = false;
      }
      r.observed = std::to_string(occ.size()) + " occurrences of \"" +
                   *p.keyword + "\"" +
                   (r.satisfied ? ", all uppercase" : ", not all uppercase");
      break;
    }

    case RuleId::SentenceCase: {
      auto span =
          indexed_unit(analyzer_.segment_sentences(response_aug), "sentence");
      if (!span) break;
      r.satisfied =
          fully_cased<uni::to_upper>(response_aug, *span, &r.span_evidence);
      r.observed = "sentence " + std::to_string(*p.index) +
                   (r.satisfied ? " fully uppercase" : " not fully uppercase");
      if (r.satisfied) r.span_evidence.push_back(*span);
      break;
    }
    case RuleId::ParagraphCase: {
      auto span = indexed_unit(segment_paragraphs(response_aug), "paragraph");
      if (!span) break;
      r.satisfied =
          fully_cased<uni::to_upper>(response_aug, *span, &r.span_evidence);
      r.observed = "paragraph " + std::to_string(*p.index) +
                   (r.satisfied ? " fully uppercase" : " not fully uppercase");
      if (r.satisfied) r.span_evidence.push_back(*span);
      break;
    }

    case RuleId::PunctAllRemoval:
    case RuleId::PunctAllReplacement: {
      // After removal no punctuation may remain; after replacement the only
      // surviving punctuation is the replacement symbol itself.
      const std::string* allowed =
          instance.rule == RuleId::PunctAllReplacement ? &*p.symbol : nullptr;
      std::size_t offenders = 0;
      std::size_t i = 0;
      while (i < response_aug.size()) {
        auto [cp, len] = uni::decode(response_aug, i);
        if (uni::is_punct(cp)) {
          std::string_view enc = response_aug.substr(i, len);
          if (!allowed || enc != *allowed) {
            ++offenders;
            if (r.span_evidence.size() < 8) r.span_evidence.push_back({i, i + len});
          }
        }
        i += len;
      }
      r.satisfied = offenders == 0;
      r.observed = std::to_string(offenders) + " stray punctuation marks";
      break;
    }

    case RuleId::PunctTargetRemoval:
    case RuleId::PunctTargetReplacement: {
      const std::string& target = *p.target_punct;
      std::size_t remaining = 0;
      std::size_t i = 0;
      while (i < response_aug.size()) {
        auto [cp, len] = uni::decode(response_aug, i);
        if (response_aug.substr(i, len) == target) {
          ++remaining;
          if (r.span_evidence.size() < 8) r.span_evidence.push_back({i, i + len});
        }
        i += len;
      }
      r.satisfied = remaining == 0;
      r.observed = std::to_string(remaining) + " occurrences of \"" + target +
                   "\" remain";
      break;
    }

    case RuleId::KeywordWrapping: {
      // Markers must sit immediately against every occurrence; zero
      // occurrences satisfy vacuously ("if it appears").
      const std::string& open = p.format->open;
      const std::string& close = p.format->close;
      std::vector<Span> occ = keyword_occurrences(response_aug, *p.keyword);
      r.satisfied = true;
      for (const Span& s : occ) {
        bool ok = s.start >= open.size() &&
                  response_aug.substr(s.start - open.size(), open.size()) ==
                      open &&
                  response_aug.substr(s.end, close.size()) == close;
        if (!ok) {
          r.satisfied = false;
          r.span_evidence.push_back(s);
        }
      }
      r.observed = std::to_string(occ.size()) + " occurrences of \"" +
                   *p.keyword + "\"" +
                   (r.satisfied ? ", all wrapped" : ", not all wrapped");
      if (r.satisfied) r.span_evidence = std::move(occ);
      break;
    }

    case RuleId::SentenceWrapping:
    case RuleId::BulletWrapping:
    case RuleId::ParagraphWrapping: {
      std::vector<Span> units;
      std::string_view what;
      if (instance.rule == RuleId::SentenceWrapping) {
        units = analyzer_.segment_sentences(response_aug);
        what = "sentence";
      } else if (instance.rule == RuleId::BulletWrapping) {
        units = extract_bullets(response_aug);
        what = "bullet";
      } else {
        units = segment_paragraphs(response_aug);
        what = "paragraph";
      }
      auto span = indexed_unit(units, what);
      if (!span) break;
      Span content = *span;
      if (instance.rule == RuleId::BulletWrapping) {
        // The marker and its separator stay outside the wrap.
        std::size_t i = content.start;
        auto first = uni::decode(response_aug, i);
        if (uni::is_digit(first.cp)) {
          while (i < content.end && uni::is_digit(uni::decode(response_aug, i).cp))
            i += uni::decode(response_aug, i).len;
          if (i < content.end) i += uni::decode(response_aug, i).len;
        } else {
          i += first.len;
        }
        while (i < content.end) {
          auto [cp, len] = uni::decode(response_aug, i);
          if (!uni::is_space(cp)) break;
          i += len;
        }
        content.start = i;
      }
      Span lead = leading_symbol_run(response_aug, content);
      Span trail = trailing_symbol_run(response_aug, content);
      bool has_open = run_contains(response_aug, lead, p.format->open);
      bool has_close = run_contains(response_aug, trail, p.format->close);
      r.satisfied = has_open && has_close;
      r.observed = std::string(what) + " " + std::to_string(*p.index) +
                   (r.satisfied ? " carries both markers"
                    : has_open   ? " lacks the closing marker"
                    : has_close  ? " lacks the opening marker"
                                 : " lacks both markers");
      r.span_evidence.push_back(*span);
      break;
    }

    case RuleId::InstructionWrapping: {
      std::string prefix =
          p.format->open + *p.instruction_ref + p.format->close + "\n\n";
      r.satisfied = response_aug.substr(0, prefix.size()) == prefix;
      r.observed = r.satisfied ? "wrapped instruction precedes the response"
                               : "wrapped instruction prefix missing";
      if (r.satisfied) r.span_evidence.push_back({0, prefix.size()});
      break;
    }

    case RuleId::ResponseWrapping:
      r.satisfied = repetition_holds(response_aug, *p.count, p.format->open,
                                     p.format->close, &r.observed);
      break;
  }
  return r;
}

VerificationReport Verifier::verify_sample(const AugmentedSample& aug) const {
  VerificationReport report;
  report.sample_ref = aug.source_id;
  report.pass = true;
  report.results.reserve(aug.applied.size());
  for (const RuleInstance& inst : aug.applied) {
    ConstraintResult r =
        verify_constraint(inst, aug.instruction_aug, aug.response_aug);
    report.pass = report.pass && r.satisfied;
    report.results.push_back(std::move(r));
  }
  return report;
}

DatasetSummary Verifier::verify_dataset(
    const std::vector<AugmentedSample>& augs) const {
  DatasetSummary summary;
  summary.total_samples = augs.size();
  for (std::size_t i = 0; i < augs.size(); ++i) {
    VerificationReport report = verify_sample(augs[i]);
    if (report.pass) {
      ++summary.passed_samples;
    } else {
      summary.failing_samples.push_back(i);
    }
    for (const ConstraintResult& r : report.results) {
      RulePassCount& c = summary.per_rule[r.rule];
      ++c.total;
      if (r.satisfied) ++c.passed;
    }
  }
  if (summary.total_samples > 0) {
    summary.overall_pass_rate =
        static_cast<double>(summary.passed_samples) /
        static_cast<double>(summary.total_samples);
  }
  return summary;
}

}  // namespace ruler
