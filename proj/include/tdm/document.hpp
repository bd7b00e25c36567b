#pragma once

#include <string>
#include <vector>

#include "tdm/io.hpp"

namespace tdm {

struct Section {
  std::string heading;
  std::string body;

  bool operator==(const Section&) const = default;
};

/// A table as recovered from the parser output. Rows may be ragged.
struct TableInfo {
  std::string caption;
  std::vector<std::vector<std::string>> cells;

  bool operator==(const TableInfo&) const = default;
};

/// A parsed article. Title and abstract are empty strings when the source lacks them.
struct Document {
  std::string paper_id;
  std::string title;
  std::string abstract;
  std::vector<Section> sections;
  std::vector<TableInfo> tables;

  bool operator==(const Document&) const = default;
};

/// JSON form: exactly the keys paper_id, title, abstract, sections, tables.
io::Json to_json(const Document& doc);
Document document_from_json(const io::Json& j);

}  // namespace tdm
