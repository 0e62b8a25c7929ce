#include "ruler/tables.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ruler/errors.hpp"
#include "ruler/unicode.hpp"

#ifndef RULER_DATA_DIR_DEFAULT
#define RULER_DATA_DIR_DEFAULT "data"
#endif

namespace ruler {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

// Splits into lines, dropping a trailing '\r' on each (data files may be
// checked out with CRLF endings).
std::vector<std::string> read_lines(const std::string& path) {
  std::string content = read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t nl = content.find('\n', start);
    if (nl == std::string::npos) {
      if (start < content.size()) lines.push_back(content.substr(start));
      break;
    }
    std::string line = content.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string default_data_dir() {
  if (const char* env = std::getenv("RULER_DATA_DIR"); env && *env) return env;
  return RULER_DATA_DIR_DEFAULT;
}

LangTables load_lang_tables(const std::string& dir) {
  LangTables t;
  for (const auto& line : read_lines(dir + "/stopwords.txt")) {
    std::string w = trim(line);
    if (!w.empty()) t.stopwords.insert(uni::lower_copy(w));
  }
  std::size_t lineno = 0;
  for (const auto& line : read_lines(dir + "/pos_lexicon.tsv")) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("pos_lexicon.tsv: expected TAB separator", lineno);
    std::string token = uni::lower_copy(trim(line.substr(0, tab)));
    std::string tag = trim(line.substr(tab + 1));
    PosTag pos;
    if (tag == "adjective") {
      pos = PosTag::adjective;
    } else if (tag == "noun") {
      pos = PosTag::noun;
    } else if (tag == "verb") {
      pos = PosTag::verb;
    } else {
      throw ParseError("pos_lexicon.tsv: unknown tag \"" + tag + "\"", lineno);
    }
    if (token.empty())
      throw ParseError("pos_lexicon.tsv: empty token", lineno);
    t.lexicon.emplace(std::move(token), pos);  // first entry wins
  }
  for (const auto& line : read_lines(dir + "/abbreviations.txt")) {
    std::string a = trim(line);
    if (a.empty()) continue;
    if (a.back() != '.')
      throw ParseError("abbreviations.txt: entry must end with '.': " + a);
    t.abbreviations.push_back(uni::lower_copy(a));
  }
  return t;
}

RuleData load_rule_data(const std::string& dir,
                        const std::string& templates_file) {
  RuleData d;
  std::string tpath =
      templates_file.empty() ? dir + "/templates.ini" : templates_file;
  std::string section;
  std::size_t lineno = 0;
  for (const auto& raw : read_lines(tpath)) {
    ++lineno;
    if (raw.empty() || raw[0] == '#') continue;
    if (raw.front() == '[') {
      std::size_t close = raw.find(']');
      if (close == std::string::npos)
        throw ParseError(tpath + ": unterminated section header", lineno);
      section = trim(raw.substr(1, close - 1));
      if (section.empty())
        throw ParseError(tpath + ": empty section name", lineno);
      d.templates[section];  // register even if it ends up empty
      continue;
    }
    std::string line = raw;
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (line.empty()) continue;
    if (section.empty())
      throw ParseError(tpath + ": template line outside any [Rule] section",
                       lineno);
    d.templates[section].push_back(line);
  }

  lineno = 0;
  for (const auto& line : read_lines(dir + "/formats.txt")) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("formats.txt: expected TAB separator", lineno);
    FormatPair p{line.substr(0, tab), line.substr(tab + 1)};
    if (p.open.empty() || p.close.empty())
      throw ParseError("formats.txt: empty marker", lineno);
    d.formats.push_back(std::move(p));
  }
  if (d.formats.empty()) throw ParseError("formats.txt: no entries");

  for (const auto& line : read_lines(dir + "/symbols.txt")) {
    std::string s = trim(line);
    if (!s.empty()) d.symbols.push_back(s);
  }
  if (d.symbols.empty()) throw ParseError("symbols.txt: no entries");
  return d;
}

}  // namespace ruler
