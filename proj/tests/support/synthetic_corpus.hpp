#pragma once

#include <map>
#include <string>
#include <vector>

#include "tdm/document.hpp"
#include "tdm/triple.hpp"

namespace tdm::testing {

// Deterministic 30-paper corpus in the parser's TEI dialect plus
// PapersWithCode-style metadata. Every triple draws its words from a
// vocabulary no other triple uses, and each abstract spells out its gold
// triples in rendered form, so the lexical scorer gives gold candidates 1.0
// and any other candidate at most 1/6.
//
// Layout:
//   papers 00..25  two or three of six frequent triples (each in 10 papers)
//   papers 26..29  one single-paper triple each -> Unknown after filtering
//   paper 00       also one single-paper triple, filtered away
//   metadata also lists a paper with no TEI file and an evaluation row with
//   no paper link.
struct SyntheticCorpus {
  std::map<std::string, std::string> tei;  ///< paper_id -> TEI XML
  std::string papers_json;
  std::string evaluations_json;
  std::map<std::string, TripleSet> raw_gold;  ///< before rare-label filtering
  std::vector<TdmTriple> frequent;           ///< the six triples that survive filtering
};

SyntheticCorpus make_synthetic_corpus();

/// GROBID-shaped TEI for one document.
std::string render_tei(const Document& doc);

}  // namespace tdm::testing
