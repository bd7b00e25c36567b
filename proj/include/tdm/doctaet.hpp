#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tdm/document.hpp"
#include "tdm/io.hpp"

namespace tdm {

enum class Part : unsigned { kTitle = 1u << 0, kAbstract = 1u << 1, kExpSetup = 1u << 2, kTableInfo = 1u << 3 };

/// Bit set over Part. Title and abstract are always present.
class PartSet {
 public:
  constexpr PartSet() = default;

  static constexpr PartSet title_abstract() { return PartSet(); }
  static constexpr PartSet all() { return PartSet().with(Part::kExpSetup).with(Part::kTableInfo); }

  constexpr PartSet with(Part p) const { return PartSet(bits_ | static_cast<unsigned>(p)); }
  constexpr bool contains(Part p) const { return (bits_ & static_cast<unsigned>(p)) != 0; }

  /// "title,abstract,exp_setup,table_info" style list; title/abstract implied.
  static PartSet parse(std::string_view list);
  std::string to_string() const;
  /// Human label, e.g. "Title + Abstract + TableInfo".
  std::string label() const;

  constexpr bool operator==(const PartSet&) const = default;

 private:
  static constexpr unsigned kBase = static_cast<unsigned>(Part::kTitle) | static_cast<unsigned>(Part::kAbstract);
  constexpr explicit PartSet(unsigned bits) : bits_(bits | kBase) {}

  unsigned bits_ = kBase;
};

/// The four context variants of the feature ablation, in reporting order.
std::vector<PartSet> standard_ablation_parts();

std::vector<std::string> default_exp_setup_patterns();

struct FeatureConfig {
  std::size_t total_budget = 512;
  std::size_t part_budget = 150;
  PartSet enabled_parts = PartSet::all();
  /// Lower-case substrings matched against section headings.
  std::vector<std::string> exp_setup_patterns = default_exp_setup_patterns();

  /// Throws tdm::Error on total_budget == 0.
  void validate() const;

  /// Short stable digest over every field.
  std::string fingerprint() const;
};

struct DocTaetFeature {
  std::string title;
  std::string abstract;
  std::string exp_setup;
  std::string table_info;
  std::string combined;

  bool operator==(const DocTaetFeature&) const = default;
};

/// Body of the first section whose heading contains one of `patterns`
/// (ASCII case-insensitive), or "".
std::string extract_exp_setup(const Document& document,
                              const std::vector<std::string>& patterns = default_exp_setup_patterns());

/// Caption then cells row-major, per table, everything space-joined.
std::string serialize_tables(const std::vector<TableInfo>& tables);

/// First `budget` whitespace tokens, single-space joined.
std::string truncate_tokens(std::string_view text, std::size_t budget);

DocTaetFeature build_feature(const Document& document, const FeatureConfig& config);

io::Json to_json(const DocTaetFeature& feature, const std::string& paper_id, const FeatureConfig& config);
DocTaetFeature feature_from_json(const io::Json& j);

}  // namespace tdm
