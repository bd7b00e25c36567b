#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tdm/document.hpp"
#include "tdm/io.hpp"
#include "tdm/triple.hpp"

namespace tdm {

struct LabeledPaper {
  std::string paper_id;
  Document document;
  TripleSet gold;

  bool is_unknown() const { return gold.size() == 1 && gold.begin()->is_unknown(); }

  bool operator==(const LabeledPaper&) const = default;
};

io::Json to_json(const LabeledPaper& paper);
LabeledPaper labeled_paper_from_json(const io::Json& j);

// ---------------------------------------------------------------------------
// Metadata
// ---------------------------------------------------------------------------

/// Evaluation records dropped while loading metadata, by reason.
struct SkipReport {
  std::size_t missing_join_key = 0;   ///< record carries neither paper_id nor paper_url
  std::size_t unmatched_paper = 0;    ///< join key names no paper in the papers file
  std::size_t incomplete_label = 0;   ///< empty task, dataset or metric
  std::size_t papers_without_id = 0;  ///< papers-file entry with no usable id

  std::size_t total() const {
    return missing_join_key + unmatched_paper + incomplete_label + papers_without_id;
  }
};

struct Metadata {
  std::map<std::string, TripleSet> triples;  ///< every listed paper, possibly with an empty set
  SkipReport skipped;
};

/// Joins a papers listing with evaluation records.
///
/// Papers: array of objects with `paper_id`, or `arxiv_id`, or a `paper_url`
/// whose last path segment becomes the id. Evaluations may be flat records
/// (`task`, `dataset`, `metric` plus `paper_id` or `paper_url`) or the nested
/// PapersWithCode evaluation-table form (task -> datasets -> sota.rows ->
/// metrics, with recursive `subtasks`). Throws on malformed JSON.
Metadata load_metadata(std::string_view papers_json, std::string_view evaluations_json);

struct JoinReport {
  std::size_t metadata_without_document = 0;
  std::size_t documents_without_metadata = 0;
};

/// Pairs documents with their metadata triples; output sorted by paper_id.
std::vector<LabeledPaper> join_documents(std::vector<Document> documents, const Metadata& metadata,
                                         JoinReport* report = nullptr);

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

/// Drops every real triple carried by fewer than `min_papers` papers.
/// Counts are taken once over the input; Unknown labels are never dropped.
std::vector<LabeledPaper> filter_rare_labels(std::vector<LabeledPaper> corpus, std::size_t min_papers = 5);

/// Papers left without labels get gold = {Unknown}.
std::vector<LabeledPaper> assign_unknown(std::vector<LabeledPaper> corpus);

// ---------------------------------------------------------------------------
// Folds
// ---------------------------------------------------------------------------

struct FoldSplit {
  int fold_id = 0;
  std::set<std::string> train_ids;
  std::set<std::string> test_ids;

  bool operator==(const FoldSplit&) const = default;
};

inline constexpr std::size_t kMinCorpusForSplit = 10;

/// Seeded train/test partitions. Fold f shuffles the sorted ids with seed+f
/// and takes the first round(train_ratio * n) as training papers. A fold
/// whose test set repeats an earlier fold's keeps drawing from its stream
/// until it differs. Throws when fewer than kMinCorpusForSplit ids are given.
std::vector<FoldSplit> split_folds(std::vector<std::string> paper_ids, double train_ratio = 0.7,
                                   int n_folds = 2, std::uint64_t seed = 0);
std::vector<FoldSplit> split_folds(const std::vector<LabeledPaper>& corpus, double train_ratio = 0.7,
                                   int n_folds = 2, std::uint64_t seed = 0);

io::Json to_json(const std::vector<FoldSplit>& splits);
std::vector<FoldSplit> folds_from_json(const io::Json& j);

/// Papers of `corpus` whose ids are in `ids`, in corpus order.
std::vector<LabeledPaper> select(const std::vector<LabeledPaper>& corpus, const std::set<std::string>& ids);

// ---------------------------------------------------------------------------
// Statistics (the row schema of the corpus overview table)
// ---------------------------------------------------------------------------

struct SplitStats {
  double papers = 0;
  double unknown = 0;
  double total_triples = 0;
  /// Over papers carrying at least one real triple.
  double avg_triples_per_paper = 0;
  double distinct_triples = 0;
  double distinct_tasks = 0;
  double distinct_datasets = 0;
  double distinct_metrics = 0;

  bool operator==(const SplitStats&) const = default;
};

SplitStats split_stats(const std::vector<LabeledPaper>& papers);

struct FoldStats {
  int fold_id = 0;
  SplitStats train;
  SplitStats test;
};

struct CorpusStats {
  SplitStats overall;
  std::vector<FoldStats> folds;
  SplitStats mean_train;  ///< per-field mean over folds
  SplitStats mean_test;
};

CorpusStats corpus_stats(const std::vector<LabeledPaper>& corpus, const std::vector<FoldSplit>& splits);

io::Json to_json(const SplitStats& s);
io::Json to_json(const CorpusStats& s);

}  // namespace tdm
