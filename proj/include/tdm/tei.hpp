#pragma once

#include <string>
#include <string_view>

#include "tdm/document.hpp"

namespace tdm {

/// Reads TEI XML as emitted by GROBID-style PDF parsers.
///
/// Title comes from the header's titleStmt, abstract from profileDesc/abstract.
/// Body divisions are flattened depth-first into sections; table figures
/// (`<figure type="table">`) anywhere under `<text>` become TableInfo entries.
/// All extracted text is whitespace-normalized.
///
/// Throws TeiParseError (with byte offset) on malformed XML.
Document parse_tei(std::string_view xml, const std::string& paper_id);

}  // namespace tdm
