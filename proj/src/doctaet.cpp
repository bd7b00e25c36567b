#include "tdm/doctaet.hpp"

#include "tdm/digest.hpp"
#include "tdm/error.hpp"
#include "tdm/text.hpp"

namespace tdm {

namespace {

struct PartName {
  Part part;
  std::string_view name;
  std::string_view label;
};

constexpr PartName kPartNames[] = {
    {Part::kTitle, "title", "Title"},
    {Part::kAbstract, "abstract", "Abstract"},
    {Part::kExpSetup, "exp_setup", "ExpSetup"},
    {Part::kTableInfo, "table_info", "TableInfo"},
};

}  // namespace

PartSet PartSet::parse(std::string_view list) {
  PartSet set;
  std::string normalized = text::ascii_lower(list);
  for (char& c : normalized) {
    if (c == ',' || c == '+') c = ' ';
  }
  for (auto token : text::tokenize(normalized)) {
    if (token == "all") {
      set = all();
      continue;
    }
    bool known = false;
    for (const auto& p : kPartNames) {
      std::string compact(p.name);
      std::erase(compact, '_');
      if (token == p.name || token == compact) {
        set = set.with(p.part);
        known = true;
      }
    }
    if (!known) throw Error("unknown feature part '" + std::string(token) + "'");
  }
  return set;
}

std::string PartSet::to_string() const {
  std::vector<std::string> names;
  for (const auto& p : kPartNames) {
    if (contains(p.part)) names.emplace_back(p.name);
  }
  return text::join(names, ",");
}

std::string PartSet::label() const {
  std::vector<std::string> names;
  for (const auto& p : kPartNames) {
    if (contains(p.part)) names.emplace_back(p.label);
  }
  return text::join(names, " + ");
}

std::vector<PartSet> standard_ablation_parts() {
  const auto base = PartSet::title_abstract();
  return {base, base.with(Part::kExpSetup), base.with(Part::kTableInfo), PartSet::all()};
}

std::vector<std::string> default_exp_setup_patterns() {
  return {"experiment", "experimental setup", "evaluation setup", "setup", "training details"};
}

void FeatureConfig::validate() const {
  if (total_budget < 1) throw Error("feature total_budget must be at least 1 token");
}

std::string FeatureConfig::fingerprint() const {
  std::string canonical = "total=" + std::to_string(total_budget) + ";part=" + std::to_string(part_budget) +
                          ";parts=" + enabled_parts.to_string() + ";patterns=";
  for (const auto& p : exp_setup_patterns) {
    canonical += p;
    canonical += '\x1f';
  }
  return sha256_hex(canonical).substr(0, 16);
}

std::string extract_exp_setup(const Document& document, const std::vector<std::string>& patterns) {
  for (const auto& section : document.sections) {
    const auto heading = text::ascii_lower(section.heading);
    for (const auto& pattern : patterns) {
      if (!pattern.empty() && heading.find(text::ascii_lower(pattern)) != std::string::npos) {
        return section.body;
      }
    }
  }
  return {};
}

std::string serialize_tables(const std::vector<TableInfo>& tables) {
  std::string raw;
  for (const auto& table : tables) {
    raw += table.caption;
    raw += ' ';
    for (const auto& row : table.cells) {
      for (const auto& cell : row) {
        raw += cell;
        raw += ' ';
      }
    }
  }
  return text::normalize_whitespace(raw);
}

std::string truncate_tokens(std::string_view text, std::size_t budget) {
  auto tokens = text::tokenize(text);
  if (tokens.size() > budget) tokens.resize(budget);
  return text::join(tokens, " ");
}

DocTaetFeature build_feature(const Document& document, const FeatureConfig& config) {
  config.validate();
  const auto& parts = config.enabled_parts;
  DocTaetFeature f;
  f.title = text::normalize_whitespace(document.title);
  f.abstract = text::normalize_whitespace(document.abstract);
  if (parts.contains(Part::kExpSetup)) {
    f.exp_setup = truncate_tokens(extract_exp_setup(document, config.exp_setup_patterns), config.part_budget);
  }
  if (parts.contains(Part::kTableInfo)) {
    f.table_info = truncate_tokens(serialize_tables(document.tables), config.part_budget);
  }
  std::vector<std::string_view> pieces;
  for (const std::string* piece : {&f.title, &f.abstract, &f.exp_setup, &f.table_info}) {
    if (!piece->empty()) pieces.push_back(*piece);
  }
  // Trimming keeps the head, so table info is the first thing to go.
  f.combined = truncate_tokens(text::join(pieces, " "), config.total_budget);
  return f;
}

io::Json to_json(const DocTaetFeature& feature, const std::string& paper_id, const FeatureConfig& config) {
  io::Json out;
  out["paper_id"] = paper_id;
  out["title"] = feature.title;
  out["abstract"] = feature.abstract;
  out["exp_setup"] = feature.exp_setup;
  out["table_info"] = feature.table_info;
  out["combined"] = feature.combined;
  out["config"] = config.fingerprint();
  return out;
}

DocTaetFeature feature_from_json(const io::Json& j) {
  try {
    DocTaetFeature f;
    f.title = j.at("title").get<std::string>();
    f.abstract = j.at("abstract").get<std::string>();
    f.exp_setup = j.at("exp_setup").get<std::string>();
    f.table_info = j.at("table_info").get<std::string>();
    f.combined = j.at("combined").get<std::string>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed feature record: ") + e.what());
  }
}

}  // namespace tdm
