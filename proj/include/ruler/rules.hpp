#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruler/rng.hpp"
#include "ruler/tables.hpp"
#include "ruler/textseg.hpp"

namespace ruler {

enum class RuleId {
  KeywordAppearance,
  KeywordFrequency,
  NumAdjectives,
  NumNouns,
  NumVerbs,
  NumCharacters,
  NumLetters,
  NumWords,
  NumSentences,
  NumParagraphs,
  NumBullets,
  InstructionRepetition,
  ResponseRepetition,
  UpCase,
  LowCase,
  LetterCase,
  KeywordCase,
  SentenceCase,
  ParagraphCase,
  PunctAllRemoval,
  PunctAllReplacement,
  PunctTargetRemoval,
  PunctTargetReplacement,
  KeywordWrapping,
  SentenceWrapping,
  BulletWrapping,
  ParagraphWrapping,
  InstructionWrapping,
  ResponseWrapping,
};

inline constexpr int kRuleCount = 29;

std::string_view to_string(RuleId id);
std::optional<RuleId> rule_from_string(std::string_view name);
std::array<RuleId, kRuleCount> all_rules();

enum class RuleFamily {
  KeywordFrequency,
  NumberConstraint,
  Repetition,
  CaseAll,
  CaseTarget,
  PunctuationAll,
  PunctuationTarget,
  FormatWrapping,
  FormattedRepeating,
};

std::string_view to_string(RuleFamily family);
RuleFamily family_of(RuleId id);

enum class CmpKind { more, less, exact };

std::string_view to_string(CmpKind kind);

struct Comparator {
  CmpKind kind = CmpKind::exact;
  long threshold = 0;
  bool operator==(const Comparator&) const = default;
};

enum class Placement { prepend, append };

enum class TemplateMode { single, diverse };

// Bound parameters; exactly the fields a given rule needs are set.
struct RuleParams {
  std::optional<std::string> keyword;
  std::optional<Comparator> comparator;
  std::optional<long> count;            // repetition count N
  std::optional<long> index;            // 1-based unit index
  std::optional<FormatPair> format;
  std::optional<std::string> symbol;
  std::optional<std::string> target_punct;
  std::optional<std::string> letter;    // single lowercase letter
  // Original instruction x_i, captured at bind time; the response transform
  // and checker for the instruction-prefix rules are defined on x_i, which
  // the augmented instruction alone no longer exposes.
  std::optional<std::string> instruction_ref;
  bool operator==(const RuleParams&) const = default;
};

struct RuleInstance {
  RuleId rule = RuleId::KeywordAppearance;
  RuleParams params;
  std::string rendered_instruction;
  Placement placement = Placement::append;
  int template_index = 0;
  bool operator==(const RuleInstance&) const = default;
};

struct RuleSpec {
  RuleId id;
  RuleFamily family;
  std::vector<std::string> templates;
  bool mutates_response = false;
  // Coarse mutual-exclusion label; "" = unconstrained. The fine-grained
  // pairwise test lives in conflicts().
  std::string conflict_group;
  bool repeatable = false;  // false = at most one application per sample
};

struct SftSample {
  std::string instruction;
  std::string input;
  std::string response;
  std::size_t id = 0;
};

// The 29-rule catalog: applicability, parameter binding, instruction
// rendering, and response transformation.
class Catalog {
 public:
  Catalog(const TextAnalyzer& analyzer, RuleData data);

  const std::vector<RuleSpec>& registry() const { return specs_; }
  const RuleSpec& spec(RuleId id) const;

  bool applicable(RuleId id, const SftSample& sample,
                  const TextProfile& prof) const;

  // Draw order per rule is fixed (params first, placement last) so streams
  // replay identically. Renders with template 0; diverse-mode engines call
  // render_instruction afterwards to redraw the template.
  RuleInstance bind(RuleId id, const SftSample& sample,
                    const TextProfile& prof, Rng& rng) const;

  // Substitutes params into the chosen template. Updates instance's
  // template_index and rendered_instruction, and returns the text.
  std::string render_instruction(RuleInstance& instance, TemplateMode mode,
                                 Rng& rng) const;

  // Same substitution against an explicit template index (no draw).
  std::string render_with_template(RuleInstance& instance,
                                   int template_index) const;

  // Applies g_k. Non-mutating rules return the input unchanged. Throws
  // CompositionConflict when a bound unit index no longer resolves.
  std::string transform_response(const RuleInstance& instance,
                                 std::string_view response) const;

  const TextAnalyzer& analyzer() const { return analyzer_; }
  const RuleData& data() const { return data_; }

 private:
  const TextAnalyzer& analyzer_;
  RuleData data_;
  std::vector<RuleSpec> specs_;
};

// Substitute one rendered value for each placeholder occurrence. Exposed for
// template validation and tests.
std::string substitute_placeholders(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& values);

// English ordinal: 1 -> "1st", 2 -> "2nd", 11 -> "11th", 23 -> "23rd".
std::string ordinal(long n);

// Comparison phrase: "more than 3" / "fewer than 5" / "exactly 4".
std::string comparator_phrase(const Comparator& cmp);

}  // namespace ruler
