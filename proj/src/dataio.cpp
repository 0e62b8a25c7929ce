#include "ruler/dataio.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ruler/errors.hpp"

namespace ruler {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_file_atomically(const std::string& path,
                           const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw IoError("cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp + " to " + path);
  }
}

std::string require_string(const json& o, const char* field,
                           std::size_t record) {
  if (!o.contains(field)) throw SchemaError(field, record);
  const json& v = o.at(field);
  if (!v.is_string())
    throw ParseError("field \"" + std::string(field) + "\" is not a string",
                     record);
  return v.get<std::string>();
}

std::string optional_string(const json& o, const char* field,
                            std::size_t record) {
  if (!o.contains(field) || o.at(field).is_null()) return "";
  const json& v = o.at(field);
  if (!v.is_string())
    throw ParseError("field \"" + std::string(field) + "\" is not a string",
                     record);
  return v.get<std::string>();
}

json parse_json(const std::string& text, std::size_t record) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) throw ParseError("invalid JSON", record);
  return v;
}

// Record triples in file order, independent of container format.
struct RawRecord {
  std::string instruction;
  std::string input;
  std::string response;
};

std::vector<RawRecord> read_records(const std::string& path,
                                    DatasetFormat fmt) {
  std::vector<RawRecord> out;
  std::string text = read_file(path);
  if (fmt == DatasetFormat::alpaca) {
    json root = parse_json(text, 0);
    if (!root.is_array())
      throw ParseError(path + ": top-level JSON value is not an array");
    std::size_t record = 0;
    for (const json& o : root) {
      ++record;
      if (!o.is_object()) throw ParseError("record is not an object", record);
      RawRecord r;
      r.instruction = require_string(o, "instruction", record);
      r.response = require_string(o, "output", record);
      r.input = optional_string(o, "input", record);
      out.push_back(std::move(r));
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t record = 0;
  while (std::getline(lines, line)) {
    ++record;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json o = parse_json(line, record);
    if (!o.is_object()) throw ParseError("record is not an object", record);
    RawRecord r;
    r.instruction = require_string(o, "instruction", record);
    r.response = require_string(o, "response", record);
    r.input = optional_string(o, "input", record);
    out.push_back(std::move(r));
  }
  return out;
}

json params_to_json(const RuleParams& p) {
  json o = json::object();
  if (p.keyword) o["keyword"] = *p.keyword;
  if (p.comparator)
    o["comparator"] = {{"kind", std::string(to_string(p.comparator->kind))},
                       {"threshold", p.comparator->threshold}};
  if (p.count) o["count"] = *p.count;
  if (p.index) o["index"] = *p.index;
  if (p.format)
    o["format"] = {{"open", p.format->open}, {"close", p.format->close}};
  if (p.symbol) o["symbol"] = *p.symbol;
  if (p.target_punct) o["target_punct"] = *p.target_punct;
  if (p.letter) o["letter"] = *p.letter;
  if (p.instruction_ref) o["instruction_ref"] = *p.instruction_ref;
  return o;
}

RuleParams params_from_json(const json& o, std::size_t record) {
  RuleParams p;
  if (o.contains("keyword")) p.keyword = o.at("keyword").get<std::string>();
  if (o.contains("comparator")) {
    const json& c = o.at("comparator");
    std::string kind = c.at("kind").get<std::string>();
    Comparator cmp;
    if (kind == "more") cmp.kind = CmpKind::more;
    else if (kind == "less") cmp.kind = CmpKind::less;
    else if (kind == "exact") cmp.kind = CmpKind::exact;
    else throw ParseError("unknown comparator kind \"" + kind + "\"", record);
    cmp.threshold = c.at("threshold").get<long>();
    p.comparator = cmp;
  }
  if (o.contains("count")) p.count = o.at("count").get<long>();
  if (o.contains("index")) p.index = o.at("index").get<long>();
  if (o.contains("format")) {
    const json& f = o.at("format");
    p.format = FormatPair{f.at("open").get<std::string>(),
                          f.at("close").get<std::string>()};
  }
  if (o.contains("symbol")) p.symbol = o.at("symbol").get<std::string>();
  if (o.contains("target_punct"))
    p.target_punct = o.at("target_punct").get<std::string>();
  if (o.contains("letter")) p.letter = o.at("letter").get<std::string>();
  if (o.contains("instruction_ref"))
    p.instruction_ref = o.at("instruction_ref").get<std::string>();
  return p;
}

json provenance_to_json(const AugmentedSample& aug) {
  json applied = json::array();
  for (const RuleInstance& inst : aug.applied) {
    applied.push_back(
        {{"rule", std::string(to_string(inst.rule))},
         {"params", params_to_json(inst.params)},
         {"instruction", inst.rendered_instruction},
         {"placement",
          inst.placement == Placement::prepend ? "prepend" : "append"},
         {"template_index", inst.template_index}});
  }
  return {{"v", 1},
          {"source_id", aug.source_id},
          {"epoch", aug.epoch},
          {"gated", aug.gated},
          {"seed_path",
           {{"seed", aug.seed_path.seed},
            {"epoch", aug.seed_path.epoch},
            {"index", aug.seed_path.index}}},
          {"applied", applied}};
}

void provenance_from_json(const json& o, AugmentedSample& aug,
                          std::size_t record) {
  if (!o.contains("v") || o.at("v").get<int>() != 1)
    throw ParseError("unsupported provenance version", record);
  aug.source_id = o.at("source_id").get<std::size_t>();
  aug.epoch = o.at("epoch").get<std::size_t>();
  aug.gated = o.at("gated").get<bool>();
  const json& sp = o.at("seed_path");
  aug.seed_path = {sp.at("seed").get<std::uint64_t>(),
                   sp.at("epoch").get<std::size_t>(),
                   sp.at("index").get<std::size_t>()};
  for (const json& a : o.at("applied")) {
    RuleInstance inst;
    std::string name = a.at("rule").get<std::string>();
    auto id = rule_from_string(name);
    if (!id) throw ParseError("unknown rule \"" + name + "\"", record);
    inst.rule = *id;
    inst.params = params_from_json(a.at("params"), record);
    inst.rendered_instruction = a.at("instruction").get<std::string>();
    std::string placement = a.at("placement").get<std::string>();
    if (placement == "prepend") inst.placement = Placement::prepend;
    else if (placement == "append") inst.placement = Placement::append;
    else throw ParseError("unknown placement \"" + placement + "\"", record);
    inst.template_index = a.at("template_index").get<int>();
    aug.applied.push_back(std::move(inst));
  }
}

std::string sidecar_path(const std::string& path) {
  return path + ".prov.jsonl";
}

}  // namespace

std::string_view to_string(DatasetFormat fmt) {
  return fmt == DatasetFormat::alpaca ? "alpaca" : "jsonl";
}

std::optional<DatasetFormat> format_from_string(std::string_view name) {
  if (name == "alpaca") return DatasetFormat::alpaca;
  if (name == "jsonl") return DatasetFormat::jsonl;
  return std::nullopt;
}

std::vector<SftSample> read_dataset(const std::string& path,
                                    DatasetFormat fmt) {
  std::vector<SftSample> out;
  std::size_t id = 0;
  for (RawRecord& r : read_records(path, fmt)) {
    out.push_back({std::move(r.instruction), std::move(r.input),
                   std::move(r.response), id++});
  }
  return out;
}

void write_dataset(const std::vector<AugmentedSample>& augs,
                   const std::string& path, DatasetFormat fmt,
                   bool with_provenance) {
  std::string main_content;
  if (fmt == DatasetFormat::alpaca) {
    json root = json::array();
    for (const AugmentedSample& a : augs) {
      root.push_back({{"instruction", a.instruction_aug},
                      {"input", a.input},
                      {"output", a.response_aug}});
    }
    main_content = root.dump(2);
    main_content += "\n";
  } else {
    std::ostringstream buf;
    for (const AugmentedSample& a : augs) {
      buf << json{{"instruction", a.instruction_aug},
                  {"input", a.input},
                  {"response", a.response_aug}}
                 .dump()
          << "\n";
    }
    main_content = buf.str();
  }
  write_file_atomically(path, main_content);

  if (!with_provenance) return;
  std::ostringstream prov;
  for (const AugmentedSample& a : augs) prov << provenance_to_json(a).dump() << "\n";
  write_file_atomically(sidecar_path(path), prov.str());
}

std::vector<AugmentedSample> read_augmented(const std::string& path,
                                            DatasetFormat fmt) {
  std::vector<RawRecord> records = read_records(path, fmt);

  std::string prov_path = sidecar_path(path);
  if (!std::filesystem::exists(prov_path))
    throw IoError("provenance sidecar " + prov_path + " not found");
  std::string text = read_file(prov_path);

  std::vector<AugmentedSample> out;
  out.reserve(records.size());
  std::istringstream lines(text);
  std::string line;
  std::size_t record = 0;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++record;
    if (record > records.size())
      throw ParseError(prov_path + " has more records than " + path, record);
    AugmentedSample aug;
    RawRecord& r = records[record - 1];
    aug.instruction_aug = std::move(r.instruction);
    aug.input = std::move(r.input);
    aug.response_aug = std::move(r.response);
    try {
      provenance_from_json(parse_json(line, record), aug, record);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad provenance record: ") + e.what(),
                       record);
    }
    out.push_back(std::move(aug));
  }
  if (record != records.size())
    throw ParseError(prov_path + " has fewer records than " + path);
  return out;
}

StatsReport stats(const std::vector<AugmentedSample>& augs,
                  const std::vector<SftSample>* sources) {
  StatsReport rep;
  rep.total_samples = augs.size();
  for (RuleId id : all_rules()) rep.per_rule[std::string(to_string(id))] = 0;
  for (RuleFamily f :
       {RuleFamily::KeywordFrequency, RuleFamily::NumberConstraint,
        RuleFamily::Repetition, RuleFamily::CaseAll, RuleFamily::CaseTarget,
        RuleFamily::PunctuationAll, RuleFamily::PunctuationTarget,
        RuleFamily::FormatWrapping, RuleFamily::FormattedRepeating})
    rep.per_family[std::string(to_string(f))] = 0;

  double instruction_added = 0.0;
  double response_delta = 0.0;
  bool response_delta_valid = sources != nullptr;
  for (const AugmentedSample& a : augs) {
    if (a.gated) ++rep.gated_samples;
    ++rep.rule_count_histogram[a.applied.size()];
    rep.total_applications += a.applied.size();
    for (const RuleInstance& inst : a.applied) {
      ++rep.per_rule[std::string(to_string(inst.rule))];
      ++rep.per_family[std::string(to_string(family_of(inst.rule)))];
      // Each rendered instruction joins the assembled text with one newline.
      instruction_added +=
          static_cast<double>(inst.rendered_instruction.size()) + 1.0;
    }
    if (response_delta_valid) {
      if (a.source_id >= sources->size()) {
        response_delta_valid = false;
      } else {
        response_delta +=
            static_cast<double>(a.response_aug.size()) -
            static_cast<double>((*sources)[a.source_id].response.size());
      }
    }
  }
  if (rep.total_samples > 0) {
    rep.gate_fraction = static_cast<double>(rep.gated_samples) /
                        static_cast<double>(rep.total_samples);
    rep.mean_instruction_delta =
        instruction_added / static_cast<double>(rep.total_samples);
    if (response_delta_valid)
      rep.mean_response_delta =
          response_delta / static_cast<double>(rep.total_samples);
  }
  return rep;
}

std::string stats_to_json(const StatsReport& report) {
  json o;
  o["total_samples"] = report.total_samples;
  o["gated_samples"] = report.gated_samples;
  o["gate_fraction"] = report.gate_fraction;
  o["total_applications"] = report.total_applications;
  o["per_rule"] = report.per_rule;
  o["per_family"] = report.per_family;
  json hist = json::object();
  for (const auto& [k, v] : report.rule_count_histogram)
    hist[std::to_string(k)] = v;
  o["rule_count_histogram"] = hist;
  o["mean_instruction_delta"] = report.mean_instruction_delta;
  if (report.mean_response_delta)
    o["mean_response_delta"] = *report.mean_response_delta;
  else
    o["mean_response_delta"] = nullptr;
  return o.dump(2);
}

}  // namespace ruler
