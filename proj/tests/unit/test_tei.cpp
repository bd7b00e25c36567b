#include <doctest.h>

#include <filesystem>

#include "support/synthetic_corpus.hpp"
#include "tdm/error.hpp"
#include "tdm/io.hpp"
#include "tdm/tei.hpp"

using namespace tdm;

namespace {

std::string fixture(const std::string& name) {
  return io::read_file(std::filesystem::path(TDM_FIXTURE_DIR) / "tei" / name);
}

}  // namespace

TEST_CASE("title-only TEI yields empty optional parts") {
  const auto doc = parse_tei(fixture("minimal.tei.xml"), "p1");
  CHECK(doc.paper_id == "p1");
  CHECK(doc.title == "X");
  CHECK(doc.abstract == "");
  CHECK(doc.sections.empty());
  CHECK(doc.tables.empty());
}

TEST_CASE("table figure becomes a TableInfo with caption and grid") {
  const auto doc = parse_tei(fixture("table.tei.xml"), "resnet");
  CHECK(doc.title == "Deep Residual Learning");
  CHECK(doc.abstract == "We present a residual framework.");
  REQUIRE(doc.tables.size() == 1);
  CHECK(doc.tables[0].caption == "Results");
  REQUIRE(doc.tables[0].cells.size() == 2);
  CHECK(doc.tables[0].cells[0] == std::vector<std::string>{"Model", "Top 1 Accuracy"});
  CHECK(doc.tables[0].cells[1] == std::vector<std::string>{"ResNet-152", "80.62"});
}

TEST_CASE("three body divisions keep source order and inline content") {
  const auto doc = parse_tei(fixture("three_divs.tei.xml"), "awd");
  CHECK(doc.title == "Regularizing and Optimizing LSTM Language Models");
  CHECK(doc.abstract == "We study language modeling. On Penn Treebank we reach a test perplexity of 57.3.");
  REQUIRE(doc.sections.size() == 3);
  CHECK(doc.sections[0].heading == "Introduction");
  CHECK(doc.sections[0].body == "Recurrent networks[1] are strong. We use the loss L = -log p throughout.");
  CHECK(doc.sections[1].heading == "Experiments");
  CHECK(doc.sections[1].body == "We train on Penn Treebank.");
  CHECK(doc.sections[2].heading == "Experiment Details");
  // Tables nested inside divisions are still collected; plain figures are not.
  REQUIRE(doc.tables.size() == 1);
  CHECK(doc.tables[0].caption == "Perplexity on Penn Treebank");
  // Spanning cell emitted once, ragged rows kept.
  REQUIRE(doc.tables[0].cells.size() == 2);
  CHECK(doc.tables[0].cells[0] == std::vector<std::string>{"Validation and test"});
  CHECK(doc.tables[0].cells[1].size() == 3);
}

TEST_CASE("nested divisions flatten depth-first without losing paragraphs") {
  const auto doc = parse_tei(fixture("nested.tei.xml"), "n");
  REQUIRE(doc.sections.size() == 4);
  CHECK(doc.sections[0] == Section{"Method", "Overview paragraph."});
  CHECK(doc.sections[1] == Section{"Encoder", "Encoder text."});
  CHECK(doc.sections[2] == Section{"Decoder", "Decoder text."});
  CHECK(doc.sections[3] == Section{"Main", "Main results."});
}

TEST_CASE("malformed XML reports a byte offset") {
  const auto xml = fixture("malformed.tei.xml");
  try {
    parse_tei(xml, "bad");
    FAIL("expected TeiParseError");
  } catch (const TeiParseError& e) {
    CHECK(e.byte_offset() > 0);
    CHECK(e.byte_offset() <= xml.size());
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_tei("", "empty"), TeiParseError);
  CHECK_THROWS_AS(parse_tei("<TEI>", "open"), TeiParseError);
}

TEST_CASE("parsing is deterministic and JSON round-trips") {
  for (const char* name : {"minimal.tei.xml", "table.tei.xml", "three_divs.tei.xml", "nested.tei.xml"}) {
    const auto xml = fixture(name);
    const auto a = parse_tei(xml, "id");
    const auto b = parse_tei(xml, "id");
    CHECK(a == b);
    const auto line = io::dump(to_json(a));
    CHECK(document_from_json(io::Json::parse(line)) == a);
  }
}

TEST_CASE("JSON form has exactly the documented keys in order") {
  const auto j = to_json(parse_tei(fixture("table.tei.xml"), "resnet"));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"paper_id", "title", "abstract", "sections", "tables"});
}

TEST_CASE("every paragraph of a retained division survives as a substring") {
  // Random documents rendered to TEI and parsed back.
  auto corpus = testing::make_synthetic_corpus();
  for (const auto& [id, xml] : corpus.tei) {
    const auto doc = parse_tei(xml, id);
    const auto again = parse_tei(testing::render_tei(doc), id);
    CHECK(again == doc);
    for (const auto& s : doc.sections) CHECK(!s.body.empty());
  }
}

TEST_CASE("escaped markup and CDATA decode to plain text") {
  const std::string xml =
      "<TEI><teiHeader><fileDesc><titleStmt><title>A &amp; B &lt;C&gt;</title></titleStmt></fileDesc>"
      "</teiHeader><text><body><div><head>H</head><p><![CDATA[x < y]]></p></div></body></text></TEI>";
  const auto doc = parse_tei(xml, "e");
  CHECK(doc.title == "A & B <C>");
  REQUIRE(doc.sections.size() == 1);
  CHECK(doc.sections[0].body == "x < y");
}
