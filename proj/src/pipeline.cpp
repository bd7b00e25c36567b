#include "tdm/pipeline.hpp"

#include <algorithm>
#include <map>

#include "tdm/corpus.hpp"
#include "tdm/digest.hpp"
#include "tdm/error.hpp"
#include "tdm/evaluator.hpp"
#include "tdm/parallel.hpp"
#include "tdm/scorer.hpp"
#include "tdm/tei.hpp"

namespace fs = std::filesystem;

namespace tdm {

void PipelineConfig::validate() const {
  features.validate();
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error("threshold must lie in (0,1)");
  if (min_papers < 1) throw Error("min_papers must be at least 1");
  if (jobs < 1) throw Error("jobs must be at least 1");
  if (n_folds < 1) throw Error("n_folds must be at least 1");
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw Error("train_ratio must lie in (0,1)");
  if (batch_size < 1) throw Error("batch_size must be at least 1");
  if (fold && (*fold < 0 || *fold >= n_folds)) throw Error("fold must lie in [0, n_folds)");
  if (work_dir.empty()) throw Error("work_dir must be set");
}

void apply_config_json(PipelineConfig& c, const io::Json& j) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "tei_dir") c.tei_dir = value.get<std::string>();
      else if (key == "papers") c.papers_file = value.get<std::string>();
      else if (key == "evaluations") c.evaluations_file = value.get<std::string>();
      else if (key == "work_dir") c.work_dir = value.get<std::string>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "k_false") c.k_false = value.get<std::size_t>();
      else if (key == "scorer") c.scorer = value.get<std::string>();
      else if (key == "threshold") c.threshold = value.get<double>();
      else if (key == "min_papers") c.min_papers = value.get<std::size_t>();
      else if (key == "jobs") c.jobs = value.get<std::size_t>();
      else if (key == "fold") c.fold = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
      else if (key == "train_ratio") c.train_ratio = value.get<double>();
      else if (key == "n_folds") c.n_folds = value.get<int>();
      else if (key == "batch_size") c.batch_size = value.get<std::size_t>();
      else if (key == "total_budget") c.features.total_budget = value.get<std::size_t>();
      else if (key == "part_budget") c.features.part_budget = value.get<std::size_t>();
      else if (key == "parts") c.features.enabled_parts = PartSet::parse(value.get<std::string>());
      else if (key == "exp_setup_patterns") c.features.exp_setup_patterns = value.get<std::vector<std::string>>();
      else throw Error("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid config value: ") + e.what());
  }
}

io::Json to_json(const PipelineConfig& c) {
  io::Json out;
  out["tei_dir"] = c.tei_dir.string();
  out["papers"] = c.papers_file.string();
  out["evaluations"] = c.evaluations_file.string();
  out["work_dir"] = c.work_dir.string();
  out["seed"] = c.seed;
  out["k_false"] = c.k_false;
  out["scorer"] = c.scorer;
  out["threshold"] = c.threshold;
  out["min_papers"] = c.min_papers;
  out["jobs"] = c.jobs;
  out["fold"] = c.fold ? io::Json(*c.fold) : io::Json(nullptr);
  out["train_ratio"] = c.train_ratio;
  out["n_folds"] = c.n_folds;
  out["batch_size"] = c.batch_size;
  out["total_budget"] = c.features.total_budget;
  out["part_budget"] = c.features.part_budget;
  out["parts"] = c.features.enabled_parts.to_string();
  out["exp_setup_patterns"] = c.features.exp_setup_patterns;
  return out;
}

namespace {

constexpr std::pair<Stage, std::string_view> kStageNames[] = {
    {Stage::kIngest, "ingest"},     {Stage::kBuildCorpus, "build-corpus"}, {Stage::kMakeInstances, "make-instances"},
    {Stage::kPredict, "predict"},   {Stage::kEvaluate, "evaluate"},        {Stage::kAblate, "ablate"},
};

}  // namespace

std::optional<Stage> parse_stage(std::string_view name) {
  for (const auto& [stage, n] : kStageNames) {
    if (n == name) return stage;
  }
  return std::nullopt;
}

std::string_view to_string(Stage stage) {
  for (const auto& [s, n] : kStageNames) {
    if (s == stage) return n;
  }
  return "?";
}

namespace artifacts {
std::string instances(int fold, std::size_t k_false) {
  return "instances-" + std::to_string(fold) + "-" + std::to_string(k_false) + ".jsonl";
}
std::string predictions(int fold) { return "predictions-" + std::to_string(fold) + ".jsonl"; }
std::string manifest(Stage stage) { return "manifest-" + std::string(to_string(stage)) + ".json"; }
}  // namespace artifacts

namespace {

// Tracks a stage's inputs and outputs so the manifest can cite both.
class StageContext {
 public:
  StageContext(Stage stage, const PipelineConfig& config, std::ostream& log)
      : stage_(stage), config_(config), log_(log) {}

  fs::path work(std::string_view name) const { return config_.work_dir / std::string(name); }

  // Prerequisite files; digested into the manifest.
  const fs::path& require(const fs::path& path, std::string_view produced_by = {}) {
    if (!fs::exists(path)) {
      std::string msg = "missing prerequisite " + path.string();
      if (!produced_by.empty()) msg += " (run the " + std::string(produced_by) + " stage first)";
      throw MissingInputError(msg);
    }
    inputs_.push_back(path);
    return path;
  }

  void write(const fs::path& path, std::string_view contents) {
    io::write_file_atomic(path, contents);
    outputs_.push_back(path);
  }

  void write_json(const fs::path& path, const io::Json& j) { write(path, io::dump(j, 2) + "\n"); }

  io::Json meta() const {
    io::Json m;
    m["version"] = std::string(kVersion);
    m["stage"] = std::string(to_string(stage_));
    m["seed"] = config_.seed;
    return m;
  }

  std::ostream& log() {
    log_ << "[" << to_string(stage_) << "] ";
    return log_;
  }

  void finish() {
    auto digests = [](const std::vector<fs::path>& paths) {
      io::Json list = io::Json::array();
      for (const auto& p : paths) {
        if (fs::is_directory(p)) continue;
        list.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
      }
      return list;
    };
    io::Json manifest = meta();
    manifest["config"] = to_json(config_);
    manifest["inputs"] = digests(inputs_);
    manifest["outputs"] = digests(outputs_);
    io::write_file_atomic(work(artifacts::manifest(stage_)), io::dump(manifest, 2) + "\n");
  }

  const PipelineConfig& config() const { return config_; }

 private:
  Stage stage_;
  const PipelineConfig& config_;
  std::ostream& log_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

std::vector<LabeledPaper> load_corpus(const fs::path& path) {
  std::vector<LabeledPaper> corpus;
  for (const auto& r : io::read_jsonl(path)) corpus.push_back(labeled_paper_from_json(r));
  return corpus;
}

std::vector<FoldSplit> load_folds(const fs::path& path) {
  const auto j = io::read_json(path);
  if (!j.is_object() || !j.contains("folds")) throw Error(path.string() + ": no \"folds\" array");
  return folds_from_json(j.at("folds"));
}

std::vector<FoldSplit> selected_folds(const std::vector<FoldSplit>& all, const PipelineConfig& config) {
  if (!config.fold) return all;
  for (const auto& f : all) {
    if (f.fold_id == *config.fold) return {f};
  }
  throw Error("fold " + std::to_string(*config.fold) + " is not present in folds.json");
}

std::string_view producer(Stage s) { return to_string(s); }

// ---------------------------------------------------------------------------

void run_ingest(StageContext& ctx) {
  const auto& config = ctx.config();
  if (config.tei_dir.empty() || !fs::is_directory(config.tei_dir)) {
    throw MissingInputError("missing TEI directory '" + config.tei_dir.string() + "' (set --tei-dir)");
  }
  constexpr std::string_view kSuffix = ".tei.xml";
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config.tei_dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no *.tei.xml files in " + config.tei_dir.string());
  for (const auto& f : files) ctx.require(f);

  std::vector<Document> docs(files.size());
  parallel_for(files.size(), config.jobs, [&](std::size_t i) {
    auto name = files[i].filename().string();
    name.resize(name.size() - kSuffix.size());
    try {
      docs[i] = parse_tei(io::read_file(files[i]), name);
    } catch (const Error& e) {
      throw Error(files[i].string() + ": " + e.what());
    }
  });
  std::vector<io::Json> records;
  for (const auto& d : docs) records.push_back(to_json(d));
  ctx.write(ctx.work(artifacts::kDocuments), io::to_jsonl(records));
  ctx.log() << "parsed " << docs.size() << " TEI documents\n";
}

void run_build_corpus(StageContext& ctx) {
  const auto& config = ctx.config();
  const auto docs_path = ctx.require(ctx.work(artifacts::kDocuments), producer(Stage::kIngest));
  if (config.papers_file.empty()) throw MissingInputError("no papers metadata file given (set --papers)");
  if (config.evaluations_file.empty()) {
    throw MissingInputError("no evaluations metadata file given (set --evaluations)");
  }
  ctx.require(config.papers_file);
  ctx.require(config.evaluations_file);

  std::vector<Document> docs;
  for (const auto& r : io::read_jsonl(docs_path)) docs.push_back(document_from_json(r));
  const auto metadata = load_metadata(io::read_file(config.papers_file), io::read_file(config.evaluations_file));

  JoinReport join;
  auto corpus = join_documents(std::move(docs), metadata, &join);
  corpus = assign_unknown(filter_rare_labels(std::move(corpus), config.min_papers));
  const auto splits = split_folds(corpus, config.train_ratio, config.n_folds, config.seed);
  const auto stats = corpus_stats(corpus, splits);

  ctx.log() << "dropped " << join.metadata_without_document << " metadata papers without a TEI file, "
            << join.documents_without_metadata << " documents without metadata\n";
  ctx.log() << "skipped evaluation records: " << metadata.skipped.missing_join_key << " without join key, "
            << metadata.skipped.unmatched_paper << " unmatched, " << metadata.skipped.incomplete_label
            << " incomplete; " << metadata.skipped.papers_without_id << " papers without id\n";

  std::vector<io::Json> records;
  for (const auto& p : corpus) records.push_back(to_json(p));
  ctx.write(ctx.work(artifacts::kCorpus), io::to_jsonl(records));

  io::Json folds = ctx.meta();
  folds["train_ratio"] = config.train_ratio;
  folds["folds"] = to_json(splits);
  ctx.write_json(ctx.work(artifacts::kFolds), folds);

  io::Json stats_json = ctx.meta();
  stats_json["min_papers"] = config.min_papers;
  stats_json["stats"] = to_json(stats);
  stats_json["skipped_evaluations"] = {{"missing_join_key", metadata.skipped.missing_join_key},
                                       {"unmatched_paper", metadata.skipped.unmatched_paper},
                                       {"incomplete_label", metadata.skipped.incomplete_label},
                                       {"papers_without_id", metadata.skipped.papers_without_id}};
  stats_json["join"] = {{"metadata_without_document", join.metadata_without_document},
                        {"documents_without_metadata", join.documents_without_metadata}};
  ctx.write_json(ctx.work(artifacts::kStats), stats_json);
  ctx.log() << corpus.size() << " papers (" << stats.overall.unknown << " unknown), "
            << stats.overall.distinct_triples << " distinct triples\n";
}

void run_make_instances(StageContext& ctx) {
  const auto& config = ctx.config();
  const auto corpus = load_corpus(ctx.require(ctx.work(artifacts::kCorpus), producer(Stage::kBuildCorpus)));
  const auto splits = selected_folds(load_folds(ctx.require(ctx.work(artifacts::kFolds),
                                                            producer(Stage::kBuildCorpus))),
                                     config);

  std::vector<DocTaetFeature> features(corpus.size());
  parallel_for(corpus.size(), config.jobs,
               [&](std::size_t i) { features[i] = build_feature(corpus[i].document, config.features); });
  std::map<std::string, DocTaetFeature> by_id;
  std::vector<io::Json> feature_records;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    feature_records.push_back(to_json(features[i], corpus[i].paper_id, config.features));
    by_id.emplace(corpus[i].paper_id, features[i]);
  }
  ctx.write(ctx.work(artifacts::kFeatures), io::to_jsonl(feature_records));

  io::Json stats = ctx.meta();
  stats["k_false"] = config.k_false;
  stats["folds"] = io::Json::array();
  for (const auto& split : splits) {
    const auto train = select(corpus, split.train_ids);
    const auto pool = candidate_label_set(train);
    const auto instances = generate_instances(train, by_id, pool, config.sampling());
    std::vector<io::Json> records;
    records.reserve(instances.size());
    for (const auto& inst : instances) records.push_back(to_json(inst));
    ctx.write(ctx.work(artifacts::instances(split.fold_id, config.k_false)), io::to_jsonl(records));
    auto fold_stats = to_json(instance_stats(instances));
    fold_stats["fold_id"] = split.fold_id;
    fold_stats["candidate_pool"] = pool.size();
    stats["folds"].push_back(std::move(fold_stats));
    ctx.log() << "fold " << split.fold_id << ": " << instances.size() << " instances over " << train.size()
              << " training papers\n";
  }
  ctx.write_json(ctx.work(artifacts::kInstanceStats), stats);
}

void run_predict(StageContext& ctx) {
  const auto& config = ctx.config();
  const auto corpus = load_corpus(ctx.require(ctx.work(artifacts::kCorpus), producer(Stage::kBuildCorpus)));
  const auto splits = selected_folds(load_folds(ctx.require(ctx.work(artifacts::kFolds),
                                                            producer(Stage::kBuildCorpus))),
                                     config);
  const auto features_path = ctx.require(ctx.work(artifacts::kFeatures), producer(Stage::kMakeInstances));

  const auto fingerprint = config.features.fingerprint();
  std::map<std::string, DocTaetFeature> by_id;
  for (const auto& r : io::read_jsonl(features_path)) {
    if (r.value("config", std::string{}) != fingerprint) {
      throw Error("features.jsonl was built with a different feature config; rerun make-instances");
    }
    by_id.emplace(r.at("paper_id").get<std::string>(), feature_from_json(r));
  }

  RemoteOptions remote;
  remote.batch_size = config.batch_size;
  const auto scorer = make_scorer(config.scorer, remote);
  for (const auto& split : splits) {
    const auto candidates = candidate_label_set(select(corpus, split.train_ids));
    if (candidates.empty()) throw Error("fold " + std::to_string(split.fold_id) + " has no training labels");
    std::vector<std::string> ids(split.test_ids.begin(), split.test_ids.end());
    std::vector<DocTaetFeature> features;
    for (const auto& id : ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw Error("no feature for test paper " + id);
      features.push_back(it->second);
    }
    const auto predictions =
        predict_papers(ids, features, candidates, config.threshold, *scorer, config.jobs, config.batch_size);
    std::vector<io::Json> records;
    for (const auto& p : predictions) records.push_back(to_json(p));
    ctx.write(ctx.work(artifacts::predictions(split.fold_id)), io::to_jsonl(records));
    ctx.log() << "fold " << split.fold_id << ": scored " << ids.size() << " papers x " << candidates.size()
              << " candidates with " << scorer->describe() << "\n";
  }
}

void run_evaluate(StageContext& ctx) {
  const auto& config = ctx.config();
  const auto corpus = load_corpus(ctx.require(ctx.work(artifacts::kCorpus), producer(Stage::kBuildCorpus)));
  const auto splits = selected_folds(load_folds(ctx.require(ctx.work(artifacts::kFolds),
                                                            producer(Stage::kBuildCorpus))),
                                     config);

  std::map<std::pair<Setting, Granularity>, std::vector<EvalReport>> cells;
  io::Json per_fold = io::Json::array();
  for (const auto& split : splits) {
    const auto path = ctx.require(ctx.work(artifacts::predictions(split.fold_id)), producer(Stage::kPredict));
    std::vector<PaperPrediction> predictions;
    for (const auto& r : io::read_jsonl(path)) predictions.push_back(prediction_from_json(r));
    const auto reports = evaluate_all(predictions, select(corpus, split.test_ids));
    for (const auto& r : reports) cells[{r.setting, r.granularity}].push_back(r);
    per_fold.push_back({{"fold_id", split.fold_id}, {"reports", reports_to_json(reports)}});
  }

  std::vector<EvalReport> averaged;
  for (const auto& [key, reports] : cells) averaged.push_back(average_folds(reports));

  io::Json report = ctx.meta();
  report["threshold"] = config.threshold;
  report["scorer"] = config.scorer;
  report["macro_averaging"] = "unweighted mean over labels with gold support in the test fold";
  report["folds_averaged"] = splits.size();
  report["average"] = reports_to_json(averaged);
  report["folds"] = std::move(per_fold);
  ctx.write_json(ctx.work(artifacts::kReport), report);

  std::string text;
  for (auto setting : kAllSettings) {
    std::vector<std::pair<std::string, EvalReport>> rows;
    for (const auto& r : averaged) {
      if (r.setting == setting) rows.emplace_back(std::string(to_string(r.granularity)), r);
    }
    text += "Average over " + std::to_string(splits.size()) + " fold(s), " + std::string(to_string(setting)) + "\n";
    text += format_table(rows) + "\n";
  }
  ctx.write(ctx.work(artifacts::kReportText), text);
  ctx.log() << "\n" << text;
}

void run_ablate(StageContext& ctx) {
  const auto& config = ctx.config();
  const auto corpus = load_corpus(ctx.require(ctx.work(artifacts::kCorpus), producer(Stage::kBuildCorpus)));
  const auto splits = selected_folds(load_folds(ctx.require(ctx.work(artifacts::kFolds),
                                                            producer(Stage::kBuildCorpus))),
                                     config);
  std::vector<FeatureConfig> configs;
  for (const auto parts : standard_ablation_parts()) {
    auto c = config.features;
    c.enabled_parts = parts;
    configs.push_back(std::move(c));
  }
  RemoteOptions remote;
  remote.batch_size = config.batch_size;
  const auto scorer = make_scorer(config.scorer, remote);

  io::Json out = ctx.meta();
  out["threshold"] = config.threshold;
  out["scorer"] = config.scorer;
  std::string text;
  for (auto setting : kAllSettings) {
    const auto rows = ablation_matrix(corpus, splits, *scorer, configs, config.threshold, setting,
                                      Granularity::kTriple, config.jobs);
    out[std::string(to_string(setting))] = to_json(rows);
    std::vector<std::pair<std::string, EvalReport>> table;
    for (const auto& r : rows) table.emplace_back(r.label, r.report);
    text += "Document representation ablation, " + std::string(to_string(setting)) + "\n" + format_table(table) + "\n";
  }
  ctx.write_json(ctx.work(artifacts::kAblation), out);
  ctx.write(ctx.work(artifacts::kAblationText), text);
  ctx.log() << "\n" << text;
}

}  // namespace

void run_stage(Stage stage, const PipelineConfig& config, std::ostream& log) {
  config.validate();
  StageContext ctx(stage, config, log);
  switch (stage) {
    case Stage::kIngest: run_ingest(ctx); break;
    case Stage::kBuildCorpus: run_build_corpus(ctx); break;
    case Stage::kMakeInstances: run_make_instances(ctx); break;
    case Stage::kPredict: run_predict(ctx); break;
    case Stage::kEvaluate: run_evaluate(ctx); break;
    case Stage::kAblate: run_ablate(ctx); break;
  }
  ctx.finish();
}

int run_stage_status(Stage stage, const PipelineConfig& config, std::ostream& log) {
  try {
    run_stage(stage, config, log);
    return 0;
  } catch (const MissingInputError& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tdm
