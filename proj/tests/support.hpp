#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ruler/tables.hpp"
#include "ruler/rules.hpp"
#include "ruler/textseg.hpp"

namespace testsup {

// Analyzer and catalog are expensive to load (19k-entry lexicon), so tests
// share one instance.
struct Env {
  ruler::TextAnalyzer analyzer;
  ruler::Catalog catalog;

  Env()
      : analyzer(ruler::load_lang_tables(RULER_TEST_DATA_DIR)),
        catalog(analyzer, ruler::load_rule_data(RULER_TEST_DATA_DIR)) {}

  static Env& get() {
    static Env env;
    return env;
  }
};

inline std::string fixture_path(const std::string& name) {
  return std::string(RULER_TEST_FIXTURE_DIR) + "/" + name;
}

// Fresh scratch directory per construction, removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto cand = base / ("ruler_test_" + std::to_string(counter_++));
      std::error_code ec;
      if (std::filesystem::create_directory(cand, ec)) {
        path_ = cand;
        return;
      }
    }
    throw std::runtime_error("could not create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Captures std::cout for the duration of a callback (CLI subcommands print
// reports to stdout).
template <typename Fn>
std::string capture_stdout(Fn&& fn) {
  std::ostringstream sink;
  std::streambuf* old = std::cout.rdbuf(sink.rdbuf());
  try {
    fn();
  } catch (...) {
    std::cout.rdbuf(old);
    throw;
  }
  std::cout.rdbuf(old);
  return sink.str();
}

}  // namespace testsup
