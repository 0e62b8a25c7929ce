#include "ruler/cli.hpp"

#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "ruler/dataio.hpp"
#include "ruler/engine.hpp"
#include "ruler/errors.hpp"
#include "ruler/verify.hpp"

namespace ruler {

namespace {

struct Options {
  std::string input;
  std::string output;
  std::string format = "jsonl";
  std::string template_mode = "diverse";
  std::string templates_file;
  std::string source;
  std::uint64_t seed = 0;
  double aug_rate = 0.9;
  int max_rules = 3;
  int epochs = 3;
  std::vector<std::string> enable_rules;
  std::vector<std::string> disable_rules;
  bool provenance = true;
  bool json_output = false;
};

// Tables, analyzer, and catalog wired together with the right lifetimes.
struct Runtime {
  TextAnalyzer analyzer;
  Catalog catalog;

  explicit Runtime(const std::string& templates_file)
      : analyzer(load_lang_tables(default_data_dir())),
        catalog(analyzer,
                load_rule_data(default_data_dir(), templates_file)) {}
};

std::set<RuleId> resolve_rule_set(const Options& o) {
  std::set<RuleId> s;
  if (o.enable_rules.empty()) {
    for (RuleId id : all_rules()) s.insert(id);
  } else {
    for (const std::string& name : o.enable_rules) {
      auto id = rule_from_string(name);
      if (!id) throw ParseError("unknown rule \"" + name + "\"");
      s.insert(*id);
    }
  }
  for (const std::string& name : o.disable_rules) {
    auto id = rule_from_string(name);
    if (!id) throw ParseError("unknown rule \"" + name + "\"");
    s.erase(*id);
  }
  if (s.size() == static_cast<std::size_t>(kRuleCount)) return {};
  return s;
}

AugmentConfig build_config(const Options& o) {
  AugmentConfig cfg;
  cfg.aug_rate = o.aug_rate;
  cfg.max_rules = o.max_rules;
  cfg.template_mode = o.template_mode == "single" ? TemplateMode::single
                                                  : TemplateMode::diverse;
  cfg.epochs = o.epochs;
  cfg.seed = o.seed;
  cfg.enabled_rules = resolve_rule_set(o);
  return cfg;
}

int run_augment(const Options& o) {
  DatasetFormat fmt = *format_from_string(o.format);
  std::vector<SftSample> samples = read_dataset(o.input, fmt);
  Runtime rt(o.templates_file);
  Engine engine(rt.catalog, build_config(o));
  std::vector<AugmentedSample> augs = engine.augment_dataset(samples);

  Verifier verifier(rt.analyzer);
  DatasetSummary summary = verifier.verify_dataset(augs);
  if (summary.passed_samples != summary.total_samples) {
    std::cerr << "error: self-verification failed for "
              << summary.failing_samples.size() << " of "
              << summary.total_samples << " records; no output written\n";
    for (const auto& [rule, counts] : summary.per_rule) {
      if (counts.passed != counts.total)
        std::cerr << "  " << to_string(rule) << ": " << counts.passed << "/"
                  << counts.total << " passed\n";
    }
    return 1;
  }

  write_dataset(augs, o.output, fmt, o.provenance);
  StatsReport rep = stats(augs, &samples);
  std::cerr << "augmented " << samples.size() << " samples into "
            << augs.size() << " records; gate fraction " << rep.gate_fraction
            << "; " << rep.total_applications << " rule applications\n";
  return 0;
}

nlohmann::json summary_to_json(const DatasetSummary& summary) {
  nlohmann::json per_rule = nlohmann::json::object();
  std::vector<std::string> failing_rules;
  for (const auto& [rule, counts] : summary.per_rule) {
    per_rule[std::string(to_string(rule))] = {{"passed", counts.passed},
                                              {"total", counts.total}};
    if (counts.passed != counts.total)
      failing_rules.push_back(std::string(to_string(rule)));
  }
  return {{"total_samples", summary.total_samples},
          {"passed_samples", summary.passed_samples},
          {"overall_pass_rate", summary.overall_pass_rate},
          {"per_rule", per_rule},
          {"failing_rules", failing_rules},
          {"failing_samples", summary.failing_samples}};
}

int run_verify(const Options& o) {
  DatasetFormat fmt = *format_from_string(o.format);
  std::vector<AugmentedSample> augs = read_augmented(o.input, fmt);
  Runtime rt(o.templates_file);
  Verifier verifier(rt.analyzer);
  DatasetSummary summary = verifier.verify_dataset(augs);
  std::cout << summary_to_json(summary).dump(2) << "\n";
  return summary.overall_pass_rate == 1.0 ? 0 : 1;
}

int run_stats(const Options& o) {
  DatasetFormat fmt = *format_from_string(o.format);
  std::vector<AugmentedSample> augs = read_augmented(o.input, fmt);
  std::vector<SftSample> sources;
  bool have_sources = !o.source.empty();
  if (have_sources) sources = read_dataset(o.source, fmt);
  std::cout << stats_to_json(stats(augs, have_sources ? &sources : nullptr))
            << "\n";
  return 0;
}

int run_list_rules(const Options& o) {
  Runtime rt(o.templates_file);
  std::set<RuleId> enabled = resolve_rule_set(o);
  auto is_enabled = [&](RuleId id) {
    return enabled.empty() || enabled.count(id) > 0;
  };
  if (o.json_output) {
    nlohmann::json rules = nlohmann::json::array();
    for (const RuleSpec& s : rt.catalog.registry()) {
      rules.push_back({{"rule", std::string(to_string(s.id))},
                       {"family", std::string(to_string(s.family))},
                       {"templates", s.templates.size()},
                       {"mutates_response", s.mutates_response},
                       {"repeatable", s.repeatable},
                       {"enabled", is_enabled(s.id)}});
    }
    std::cout << rules.dump(2) << "\n";
    return 0;
  }
  for (const RuleSpec& s : rt.catalog.registry()) {
    std::string name(to_string(s.id));
    name.resize(24, ' ');
    std::string family(to_string(s.family));
    family.resize(22, ' ');
    std::cout << name << family << s.templates.size() << " templates  "
              << (s.mutates_response ? "mutates response" : "keeps response ")
              << (s.repeatable ? "  repeatable" : "")
              << (is_enabled(s.id) ? "" : "  [disabled]") << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Recycle instruction-tuning data by attaching verifiable "
               "formatting constraints and transformed responses"};
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Dataset format")
        ->check(CLI::IsMember({"alpaca", "jsonl"}))
        ->capture_default_str();
  };
  auto add_rule_filters = [&](CLI::App* sub) {
    sub->add_option("--enable-rule", o.enable_rules,
                    "Restrict augmentation to these rules (repeatable)");
    sub->add_option("--disable-rule", o.disable_rules,
                    "Remove rules from the eligible set (repeatable)");
  };
  auto add_templates_file = [&](CLI::App* sub) {
    sub->add_option("--templates-file", o.templates_file,
                    "Alternative instruction-template file");
  };

  CLI::App* augment =
      app.add_subcommand("augment", "Augment a dataset with rule constraints");
  augment->add_option("-i,--input", o.input, "Source dataset")->required();
  augment->add_option("-o,--output", o.output, "Augmented dataset")->required();
  add_format(augment);
  augment->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  augment->add_option("--aug-rate", o.aug_rate,
                      "Probability a sample is augmented")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  augment->add_option("--max-rules", o.max_rules,
                      "Upper bound of rules per sample")
      ->check(CLI::Range(0, 1000))
      ->capture_default_str();
  augment->add_option("--epochs", o.epochs, "Augmentation passes to emit")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  augment->add_option("--template-mode", o.template_mode,
                      "Instruction template selection")
      ->check(CLI::IsMember({"single", "diverse"}))
      ->capture_default_str();
  add_rule_filters(augment);
  augment->add_flag("--provenance,!--no-provenance", o.provenance,
                    "Write the provenance sidecar (default on)");
  add_templates_file(augment);
  augment->set_config("--config", "", "Config file mirroring these flags");

  CLI::App* verify = app.add_subcommand(
      "verify", "Check an augmented dataset against its provenance");
  verify->add_option("-i,--input", o.input, "Augmented dataset")->required();
  add_format(verify);
  add_templates_file(verify);

  CLI::App* stats_cmd =
      app.add_subcommand("stats", "Corpus statistics from provenance");
  stats_cmd->add_option("-i,--input", o.input, "Augmented dataset")->required();
  add_format(stats_cmd);
  stats_cmd->add_option("--source", o.source,
                        "Original dataset, enables response length deltas");
  add_templates_file(stats_cmd);

  CLI::App* list_rules =
      app.add_subcommand("list-rules", "Print the rule catalog");
  list_rules->add_flag("--json", o.json_output, "Machine-readable output");
  add_rule_filters(list_rules);
  add_templates_file(list_rules);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (augment->parsed()) return run_augment(o);
    if (verify->parsed()) return run_verify(o);
    if (stats_cmd->parsed()) return run_stats(o);
    if (list_rules->parsed()) return run_list_rules(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace ruler
