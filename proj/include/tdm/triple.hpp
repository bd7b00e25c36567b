#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tdm/io.hpp"

namespace tdm {

/// One (task, dataset, metric) leaderboard label, or the distinguished Unknown.
///
/// Fields are whitespace-collapsed and NFC-normalized on construction, so
/// equality is plain string equality. Unknown orders before every real triple.
class TdmTriple {
 public:
  /// Throws tdm::Error if any field is empty after normalization.
  TdmTriple(std::string_view task, std::string_view dataset, std::string_view metric);

  static TdmTriple unknown() { return TdmTriple(); }

  bool is_unknown() const noexcept { return !fields_.has_value(); }

  /// Precondition: !is_unknown().
  const std::string& task() const;
  const std::string& dataset() const;
  const std::string& metric() const;

  friend bool operator==(const TdmTriple&, const TdmTriple&) = default;
  friend std::strong_ordering operator<=>(const TdmTriple&, const TdmTriple&) = default;

 private:
  struct Fields {
    std::string task;
    std::string dataset;
    std::string metric;
    friend bool operator==(const Fields&, const Fields&) = default;
    friend std::strong_ordering operator<=>(const Fields&, const Fields&) = default;
  };

  TdmTriple() = default;

  std::optional<Fields> fields_;
};

using TripleSet = std::set<TdmTriple>;

/// Normalization applied to every label string: whitespace collapse, then NFC.
std::string normalize_label(std::string_view raw);

/// "task : dataset : metric"; Unknown renders as "unknown".
std::string to_string(const TdmTriple& t);

/// {"task":..,"dataset":..,"metric":..} or {"unknown":true}.
io::Json to_json(const TdmTriple& t);
TdmTriple triple_from_json(const io::Json& j);

io::Json to_json(const TripleSet& set);
TripleSet triple_set_from_json(const io::Json& j);

}  // namespace tdm
