#include "tdm/document.hpp"

#include "tdm/error.hpp"

namespace tdm {

io::Json to_json(const Document& doc) {
  io::Json sections = io::Json::array();
  for (const auto& s : doc.sections) {
    sections.push_back({{"heading", s.heading}, {"body", s.body}});
  }
  io::Json tables = io::Json::array();
  for (const auto& t : doc.tables) {
    io::Json rows = io::Json::array();
    for (const auto& row : t.cells) rows.push_back(row);
    tables.push_back({{"caption", t.caption}, {"cells", std::move(rows)}});
  }
  io::Json out;
  out["paper_id"] = doc.paper_id;
  out["title"] = doc.title;
  out["abstract"] = doc.abstract;
  out["sections"] = std::move(sections);
  out["tables"] = std::move(tables);
  return out;
}

Document document_from_json(const io::Json& j) {
  try {
    Document doc;
    doc.paper_id = j.at("paper_id").get<std::string>();
    doc.title = j.at("title").get<std::string>();
    doc.abstract = j.at("abstract").get<std::string>();
    for (const auto& s : j.at("sections")) {
      doc.sections.push_back({s.at("heading").get<std::string>(), s.at("body").get<std::string>()});
    }
    for (const auto& t : j.at("tables")) {
      TableInfo table;
      table.caption = t.at("caption").get<std::string>();
      table.cells = t.at("cells").get<std::vector<std::vector<std::string>>>();
      doc.tables.push_back(std::move(table));
    }
    if (doc.paper_id.empty()) throw Error("document record has an empty paper_id");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed document record: ") + e.what());
  }
}

}  // namespace tdm
