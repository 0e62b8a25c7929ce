#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ruler {

enum class PosTag { adjective, noun, verb };

// Language tables backing segmentation and tagging. Immutable after load.
struct LangTables {
  std::unordered_set<std::string> stopwords;          // lowercase
  std::unordered_map<std::string, PosTag> lexicon;    // lowercase token -> tag
  std::vector<std::string> abbreviations;             // lowercase, trailing '.'
};

struct FormatPair {
  std::string open;
  std::string close;
  bool operator==(const FormatPair&) const = default;
};

// Rule-catalog payload: instruction templates plus the marker/symbol pools.
struct RuleData {
  std::map<std::string, std::vector<std::string>> templates;  // rule name -> lines
  std::vector<FormatPair> formats;
  std::vector<std::string> symbols;
};

// Resolution order: RULER_DATA_DIR environment variable, then the directory
// compiled in from the source tree.
std::string default_data_dir();

// Throws IoError on unreadable files, ParseError on malformed lines.
LangTables load_lang_tables(const std::string& dir);
RuleData load_rule_data(const std::string& dir,
                        const std::string& templates_file = "");

}  // namespace ruler
