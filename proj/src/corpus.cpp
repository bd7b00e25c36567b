#include "tdm/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tdm/error.hpp"
#include "tdm/random.hpp"
#include "tdm/text.hpp"

namespace tdm {

io::Json to_json(const LabeledPaper& paper) {
  io::Json out;
  out["paper_id"] = paper.paper_id;
  out["document"] = to_json(paper.document);
  out["gold"] = to_json(paper.gold);
  return out;
}

LabeledPaper labeled_paper_from_json(const io::Json& j) {
  try {
    LabeledPaper paper;
    paper.paper_id = j.at("paper_id").get<std::string>();
    paper.document = document_from_json(j.at("document"));
    paper.gold = triple_set_from_json(j.at("gold"));
    if (paper.document.paper_id != paper.paper_id) {
      throw Error("labeled paper " + paper.paper_id + " wraps document " + paper.document.paper_id);
    }
    if (paper.gold.contains(TdmTriple::unknown()) && paper.gold.size() > 1) {
      throw Error("labeled paper " + paper.paper_id + " mixes Unknown with real triples");
    }
    return paper;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed labeled paper record: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

std::string string_field(const io::Json& obj, const char* key) {
  if (!obj.is_object()) return {};
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return text::normalize_whitespace(it->get<std::string>());
}

std::string trim_url(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

std::string last_path_segment(const std::string& url) {
  const auto trimmed = trim_url(url);
  const auto slash = trimmed.rfind('/');
  return slash == std::string::npos ? trimmed : trimmed.substr(slash + 1);
}

// "https://arxiv.org/abs/1512.03385v2" -> "1512.03385"
std::string arxiv_id_from_url(const std::string& url) {
  for (const char* marker : {"arxiv.org/abs/", "arxiv.org/pdf/"}) {
    const auto pos = url.find(marker);
    if (pos == std::string::npos) continue;
    std::string id = trim_url(url.substr(pos + std::string_view(marker).size()));
    if (id.ends_with(".pdf")) id.resize(id.size() - 4);
    const auto v = id.rfind('v');
    if (v != std::string::npos && v + 1 < id.size() &&
        std::all_of(id.begin() + static_cast<std::ptrdiff_t>(v) + 1, id.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      id.resize(v);
    }
    return id;
  }
  return {};
}

io::Json parse_array(std::string_view json, const char* what) {
  io::Json parsed;
  try {
    parsed = io::Json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
  if (!parsed.is_array()) throw Error(std::string(what) + ": expected a JSON array of objects");
  return parsed;
}

class PaperIndex {
 public:
  void add(const std::string& id, const io::Json& record) {
    by_id_[id] = id;
    for (const char* key : {"paper_url", "url_abs", "url_pdf"}) {
      const auto url = trim_url(string_field(record, key));
      if (!url.empty()) by_url_[url] = id;
      const auto arxiv = arxiv_id_from_url(url);
      if (!arxiv.empty()) by_arxiv_[arxiv] = id;
    }
    const auto arxiv = string_field(record, "arxiv_id");
    if (!arxiv.empty()) by_arxiv_[arxiv] = id;
  }

  // Empty result means no match.
  std::string resolve(const std::string& paper_id, const std::string& url) const {
    if (!paper_id.empty()) {
      const auto it = by_id_.find(paper_id);
      return it == by_id_.end() ? std::string{} : it->second;
    }
    const auto trimmed = trim_url(url);
    if (const auto it = by_url_.find(trimmed); it != by_url_.end()) return it->second;
    if (const auto arxiv = arxiv_id_from_url(trimmed); !arxiv.empty()) {
      if (const auto it = by_arxiv_.find(arxiv); it != by_arxiv_.end()) return it->second;
    }
    return {};
  }

 private:
  std::unordered_map<std::string, std::string> by_id_;
  std::unordered_map<std::string, std::string> by_url_;
  std::unordered_map<std::string, std::string> by_arxiv_;
};

struct EvaluationSink {
  const PaperIndex& index;
  Metadata& out;

  // One evaluation record: a join key plus the triples it asserts.
  void record(const io::Json& row, const std::string& task, const std::string& dataset,
              const std::vector<std::string>& metrics) {
    const auto paper_id = string_field(row, "paper_id");
    const auto url = string_field(row, "paper_url");
    if (paper_id.empty() && url.empty()) {
      ++out.skipped.missing_join_key;
      return;
    }
    const auto resolved = index.resolve(paper_id, url);
    if (resolved.empty()) {
      ++out.skipped.unmatched_paper;
      return;
    }
    for (const auto& metric : metrics) {
      if (normalize_label(task).empty() || normalize_label(dataset).empty() ||
          normalize_label(metric).empty()) {
        ++out.skipped.incomplete_label;
        continue;
      }
      out.triples[resolved].insert(TdmTriple(task, dataset, metric));
    }
  }

  void nested_task(const io::Json& task_obj) {
    const auto task = string_field(task_obj, "task");
    if (const auto it = task_obj.find("datasets"); it != task_obj.end() && it->is_array()) {
      for (const auto& ds : *it) {
        const auto dataset = string_field(ds, "dataset");
        const auto sota = ds.find("sota");
        if (sota == ds.end() || !sota->is_object()) continue;
        const auto rows = sota->find("rows");
        if (rows == sota->end() || !rows->is_array()) continue;
        for (const auto& row : *rows) {
          std::vector<std::string> metrics;
          if (const auto m = row.find("metrics"); m != row.end() && m->is_object()) {
            for (const auto& [name, value] : m->items()) metrics.push_back(name);
          }
          record(row, task, dataset, metrics);
        }
      }
    }
    if (const auto it = task_obj.find("subtasks"); it != task_obj.end() && it->is_array()) {
      for (const auto& sub : *it) nested_task(sub);
    }
  }
};

}  // namespace

Metadata load_metadata(std::string_view papers_json, std::string_view evaluations_json) {
  const auto papers = parse_array(papers_json, "papers metadata");
  const auto evaluations = parse_array(evaluations_json, "evaluation metadata");

  Metadata out;
  PaperIndex index;
  for (const auto& record : papers) {
    std::string id = string_field(record, "paper_id");
    if (id.empty()) id = string_field(record, "arxiv_id");
    if (id.empty()) id = last_path_segment(string_field(record, "paper_url"));
    if (id.empty()) {
      ++out.skipped.papers_without_id;
      continue;
    }
    index.add(id, record);
    out.triples.try_emplace(id);
  }

  EvaluationSink sink{index, out};
  for (const auto& record : evaluations) {
    if (!record.is_object()) throw Error("evaluation metadata: expected objects, got " + io::dump(record));
    if (record.contains("datasets") || record.contains("subtasks")) {
      sink.nested_task(record);
    } else {
      sink.record(record, string_field(record, "task"), string_field(record, "dataset"),
                  {string_field(record, "metric")});
    }
  }
  return out;
}

std::vector<LabeledPaper> join_documents(std::vector<Document> documents, const Metadata& metadata,
                                         JoinReport* report) {
  std::sort(documents.begin(), documents.end(),
            [](const Document& a, const Document& b) { return a.paper_id < b.paper_id; });
  JoinReport local;
  std::vector<LabeledPaper> corpus;
  std::set<std::string> seen;
  for (auto& doc : documents) {
    if (!seen.insert(doc.paper_id).second) throw Error("duplicate document id " + doc.paper_id);
    const auto it = metadata.triples.find(doc.paper_id);
    if (it == metadata.triples.end()) {
      ++local.documents_without_metadata;
      continue;
    }
    LabeledPaper paper;
    paper.paper_id = doc.paper_id;
    paper.gold = it->second;
    paper.document = std::move(doc);
    corpus.push_back(std::move(paper));
  }
  for (const auto& [id, triples] : metadata.triples) {
    if (!seen.contains(id)) ++local.metadata_without_document;
  }
  if (report != nullptr) *report = local;
  return corpus;
}

// ---------------------------------------------------------------------------

std::vector<LabeledPaper> filter_rare_labels(std::vector<LabeledPaper> corpus, std::size_t min_papers) {
  if (min_papers < 1) throw Error("min_papers must be at least 1");
  std::map<TdmTriple, std::size_t> papers_per_triple;
  for (const auto& paper : corpus) {
    for (const auto& t : paper.gold) ++papers_per_triple[t];
  }
  for (auto& paper : corpus) {
    std::erase_if(paper.gold, [&](const TdmTriple& t) {
      return !t.is_unknown() && papers_per_triple.at(t) < min_papers;
    });
  }
  return corpus;
}

std::vector<LabeledPaper> assign_unknown(std::vector<LabeledPaper> corpus) {
  for (auto& paper : corpus) {
    if (paper.gold.empty()) paper.gold.insert(TdmTriple::unknown());
  }
  return corpus;
}

// ---------------------------------------------------------------------------

std::vector<FoldSplit> split_folds(std::vector<std::string> paper_ids, double train_ratio, int n_folds,
                                   std::uint64_t seed) {
  std::sort(paper_ids.begin(), paper_ids.end());
  if (std::adjacent_find(paper_ids.begin(), paper_ids.end()) != paper_ids.end()) {
    throw Error("split_folds: duplicate paper ids");
  }
  const std::size_t n = paper_ids.size();
  if (n < kMinCorpusForSplit) {
    throw Error("split_folds: corpus has " + std::to_string(n) + " papers, need at least " +
                std::to_string(kMinCorpusForSplit));
  }
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw Error("split_folds: train_ratio must be in (0,1)");
  if (n_folds < 1) throw Error("split_folds: n_folds must be positive");

  const auto n_train = static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) throw Error("split_folds: train_ratio leaves an empty side");

  constexpr int kMaxRedraws = 10000;
  std::vector<FoldSplit> splits;
  for (int fold = 0; fold < n_folds; ++fold) {
    auto rng = make_rng(seed + static_cast<std::uint64_t>(fold));
    FoldSplit split;
    split.fold_id = fold;
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxRedraws) {
        throw Error("split_folds: cannot find " + std::to_string(n_folds) + " distinct test sets");
      }
      std::vector<std::string> order = paper_ids;
      shuffle(std::span<std::string>(order), rng);
      split.train_ids = {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train)};
      split.test_ids = {order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end()};
      const bool repeats = std::any_of(splits.begin(), splits.end(),
                                       [&](const FoldSplit& s) { return s.test_ids == split.test_ids; });
      if (!repeats) break;
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

std::vector<FoldSplit> split_folds(const std::vector<LabeledPaper>& corpus, double train_ratio, int n_folds,
                                   std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& p : corpus) ids.push_back(p.paper_id);
  return split_folds(std::move(ids), train_ratio, n_folds, seed);
}

io::Json to_json(const std::vector<FoldSplit>& splits) {
  io::Json folds = io::Json::array();
  for (const auto& s : splits) {
    io::Json f;
    f["fold_id"] = s.fold_id;
    f["train_ids"] = s.train_ids;
    f["test_ids"] = s.test_ids;
    folds.push_back(std::move(f));
  }
  return folds;
}

std::vector<FoldSplit> folds_from_json(const io::Json& j) {
  try {
    std::vector<FoldSplit> splits;
    for (const auto& f : j) {
      FoldSplit s;
      s.fold_id = f.at("fold_id").get<int>();
      s.train_ids = f.at("train_ids").get<std::set<std::string>>();
      s.test_ids = f.at("test_ids").get<std::set<std::string>>();
      splits.push_back(std::move(s));
    }
    return splits;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed folds record: ") + e.what());
  }
}

std::vector<LabeledPaper> select(const std::vector<LabeledPaper>& corpus, const std::set<std::string>& ids) {
  std::vector<LabeledPaper> out;
  for (const auto& p : corpus) {
    if (ids.contains(p.paper_id)) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------

SplitStats split_stats(const std::vector<LabeledPaper>& papers) {
  SplitStats s;
  std::set<TdmTriple> triples;
  std::set<std::string> tasks;
  std::set<std::string> datasets;
  std::set<std::string> metrics;
  for (const auto& p : papers) {
    s.papers += 1;
    if (p.is_unknown()) {
      s.unknown += 1;
      continue;
    }
    for (const auto& t : p.gold) {
      if (t.is_unknown()) continue;
      s.total_triples += 1;
      triples.insert(t);
      tasks.insert(t.task());
      datasets.insert(t.dataset());
      metrics.insert(t.metric());
    }
  }
  const double labeled = s.papers - s.unknown;
  s.avg_triples_per_paper = labeled > 0 ? s.total_triples / labeled : 0.0;
  s.distinct_triples = static_cast<double>(triples.size());
  s.distinct_tasks = static_cast<double>(tasks.size());
  s.distinct_datasets = static_cast<double>(datasets.size());
  s.distinct_metrics = static_cast<double>(metrics.size());
  return s;
}

namespace {

SplitStats mean_of(const std::vector<SplitStats>& items) {
  SplitStats m;
  if (items.empty()) return m;
  for (const auto& s : items) {
    m.papers += s.papers;
    m.unknown += s.unknown;
    m.total_triples += s.total_triples;
    m.avg_triples_per_paper += s.avg_triples_per_paper;
    m.distinct_triples += s.distinct_triples;
    m.distinct_tasks += s.distinct_tasks;
    m.distinct_datasets += s.distinct_datasets;
    m.distinct_metrics += s.distinct_metrics;
  }
  const auto n = static_cast<double>(items.size());
  for (double* field : {&m.papers, &m.unknown, &m.total_triples, &m.avg_triples_per_paper, &m.distinct_triples,
                        &m.distinct_tasks, &m.distinct_datasets, &m.distinct_metrics}) {
    *field /= n;
  }
  return m;
}

}  // namespace

CorpusStats corpus_stats(const std::vector<LabeledPaper>& corpus, const std::vector<FoldSplit>& splits) {
  CorpusStats stats;
  stats.overall = split_stats(corpus);
  std::vector<SplitStats> trains;
  std::vector<SplitStats> tests;
  for (const auto& split : splits) {
    FoldStats f;
    f.fold_id = split.fold_id;
    f.train = split_stats(select(corpus, split.train_ids));
    f.test = split_stats(select(corpus, split.test_ids));
    trains.push_back(f.train);
    tests.push_back(f.test);
    stats.folds.push_back(std::move(f));
  }
  stats.mean_train = mean_of(trains);
  stats.mean_test = mean_of(tests);
  return stats;
}

io::Json to_json(const SplitStats& s) {
  io::Json out;
  out["papers"] = s.papers;
  out["unknown_annotations"] = s.unknown;
  out["unknown_fraction"] = s.papers > 0 ? s.unknown / s.papers : 0.0;
  out["total_triples"] = s.total_triples;
  out["avg_triples_per_paper"] = s.avg_triples_per_paper;
  out["distinct_triples"] = s.distinct_triples;
  out["distinct_tasks"] = s.distinct_tasks;
  out["distinct_datasets"] = s.distinct_datasets;
  out["distinct_metrics"] = s.distinct_metrics;
  return out;
}

io::Json to_json(const CorpusStats& s) {
  io::Json folds = io::Json::array();
  for (const auto& f : s.folds) {
    folds.push_back({{"fold_id", f.fold_id}, {"train", to_json(f.train)}, {"test", to_json(f.test)}});
  }
  io::Json out;
  out["overall"] = to_json(s.overall);
  out["folds"] = std::move(folds);
  out["mean_over_folds"] = {{"train", to_json(s.mean_train)}, {"test", to_json(s.mean_test)}};
  return out;
}

}  // namespace tdm
