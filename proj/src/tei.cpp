#include "tdm/tei.hpp"

#include <expat.h>

#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tdm/error.hpp"
#include "tdm/text.hpp"

namespace tdm {

namespace {

// Minimal element tree. Text nodes have an empty name.
struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::string text;
  std::vector<std::unique_ptr<Node>> children;

  bool is_text() const { return name.empty(); }

  std::string_view attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return v;
    }
    return {};
  }

  const Node* child(std::string_view child_name) const {
    for (const auto& c : children) {
      if (c->name == child_name) return c.get();
    }
    return nullptr;
  }

  std::vector<const Node*> children_named(std::string_view child_name) const {
    std::vector<const Node*> out;
    for (const auto& c : children) {
      if (c->name == child_name) out.push_back(c.get());
    }
    return out;
  }
};

std::string local_name(const XML_Char* raw) {
  std::string_view name(raw);
  const auto colon = name.rfind(':');
  return std::string(colon == std::string_view::npos ? name : name.substr(colon + 1));
}

struct TreeBuilder {
  std::unique_ptr<Node> root = std::make_unique<Node>();
  std::vector<Node*> stack{root.get()};

  static void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<TreeBuilder*>(user);
    auto node = std::make_unique<Node>();
    node->name = local_name(name);
    for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
      node->attrs.emplace_back(local_name(attrs[i]), attrs[i + 1]);
    }
    Node* raw = node.get();
    self->stack.back()->children.push_back(std::move(node));
    self->stack.push_back(raw);
  }

  static void on_end(void* user, const XML_Char*) {
    static_cast<TreeBuilder*>(user)->stack.pop_back();
  }

  static void on_text(void* user, const XML_Char* s, int len) {
    auto* parent = static_cast<TreeBuilder*>(user)->stack.back();
    if (parent->children.empty() || !parent->children.back()->is_text()) {
      parent->children.push_back(std::make_unique<Node>());
    }
    parent->children.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

std::unique_ptr<Node> build_tree(std::string_view xml) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate(nullptr));
  if (!parser) throw Error("cannot allocate XML parser");
  TreeBuilder builder;
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &TreeBuilder::on_start, &TreeBuilder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &TreeBuilder::on_text);

  // Feed in chunks so sizes beyond INT_MAX are still accepted.
  constexpr std::size_t kChunk = 1 << 20;
  std::size_t offset = 0;
  do {
    const std::size_t n = std::min(kChunk, xml.size() - offset);
    const bool last = offset + n == xml.size();
    if (XML_Parse(parser.get(), xml.data() + offset, static_cast<int>(n), last) == XML_STATUS_ERROR) {
      const auto at = XML_GetCurrentByteIndex(parser.get());
      throw TeiParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())),
                          at < 0 ? offset : static_cast<std::size_t>(at));
    }
    offset += n;
  } while (offset < xml.size());
  return std::move(builder.root);
}

const std::unordered_set<std::string_view>& block_elements() {
  static const std::unordered_set<std::string_view> names = {
      "p", "div", "head", "s", "row", "cell", "figDesc", "label", "list", "item", "table", "figure", "lb"};
  return names;
}

void collect_text(const Node& node, std::string& out, bool skip_figures) {
  if (node.is_text()) {
    out += node.text;
    return;
  }
  if (skip_figures && node.name == "figure") return;
  const bool block = block_elements().contains(node.name);
  if (block) out += ' ';
  for (const auto& c : node.children) collect_text(*c, out, skip_figures);
  if (block) out += ' ';
}

std::string text_of(const Node* node, bool skip_figures = true) {
  if (node == nullptr) return {};
  std::string raw;
  collect_text(*node, raw, skip_figures);
  return text::normalize_whitespace(raw);
}

const Node* find_first(const Node& node, std::string_view name) {
  for (const auto& c : node.children) {
    if (c->name == name) return c.get();
    if (const Node* hit = find_first(*c, name)) return hit;
  }
  return nullptr;
}

void find_all(const Node& node, std::string_view name, std::vector<const Node*>& out) {
  for (const auto& c : node.children) {
    if (c->name == name) out.push_back(c.get());
    find_all(*c, name, out);
  }
}

std::string extract_title(const Node* header) {
  if (header == nullptr) return {};
  if (const Node* stmt = find_first(*header, "titleStmt")) {
    const auto titles = stmt->children_named("title");
    for (const Node* t : titles) {
      if (t->attr("type") == "main") return text_of(t);
    }
    if (!titles.empty()) return text_of(titles.front());
  }
  return text_of(find_first(*header, "title"));
}

void flatten_divisions(const Node& div, std::vector<Section>& out) {
  const auto subdivisions = div.children_named("div");
  std::vector<std::string> paragraphs;
  for (const Node* p : div.children_named("p")) {
    auto t = text_of(p);
    if (!t.empty()) paragraphs.push_back(std::move(t));
  }
  // Leaves always become a section; an inner division only when it carries
  // its own paragraphs, so no paragraph under a retained division is lost.
  if (subdivisions.empty() || !paragraphs.empty()) {
    out.push_back({text_of(div.child("head")), text::join(paragraphs, " ")});
  }
  for (const Node* sub : subdivisions) flatten_divisions(*sub, out);
}

TableInfo extract_table(const Node& figure) {
  TableInfo table;
  table.caption = text_of(figure.child("figDesc"));
  if (table.caption.empty()) table.caption = text_of(figure.child("head"));
  if (const Node* grid = find_first(figure, "table")) {
    std::vector<const Node*> rows;
    find_all(*grid, "row", rows);
    for (const Node* row : rows) {
      std::vector<std::string> cells;
      for (const Node* cell : row->children_named("cell")) cells.push_back(text_of(cell));
      table.cells.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace

Document parse_tei(std::string_view xml, const std::string& paper_id) {
  if (paper_id.empty()) throw Error("parse_tei: empty paper_id");
  const auto tree = build_tree(xml);

  Document doc;
  doc.paper_id = paper_id;

  const Node* header = find_first(*tree, "teiHeader");
  doc.title = extract_title(header);
  if (header != nullptr) {
    if (const Node* profile = find_first(*header, "profileDesc")) {
      doc.abstract = text_of(find_first(*profile, "abstract"));
    }
  }

  const Node* text_root = find_first(*tree, "text");
  if (text_root != nullptr) {
    if (const Node* body = text_root->child("body")) {
      for (const Node* div : body->children_named("div")) flatten_divisions(*div, doc.sections);
    }
    std::vector<const Node*> figures;
    find_all(*text_root, "figure", figures);
    for (const Node* fig : figures) {
      if (fig->attr("type") == "table") doc.tables.push_back(extract_table(*fig));
    }
  }
  return doc;
}

}  // namespace tdm
