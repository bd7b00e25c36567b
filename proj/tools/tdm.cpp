// Command-line driver for the leaderboard extraction pipeline.
//
//   tdm <stage> [options]
//
// stages: ingest, build-corpus, make-instances, predict, evaluate, ablate, all
// exit status: 0 success, 1 module error, 2 usage or missing prerequisite.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "tdm/error.hpp"
#include "tdm/io.hpp"
#include "tdm/pipeline.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config_file;
  std::optional<std::string> tei_dir;
  std::optional<std::string> papers;
  std::optional<std::string> evaluations;
  std::optional<std::string> work_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k_false;
  std::optional<double> threshold;
  std::optional<std::string> scorer;
  std::optional<std::size_t> min_papers;
  std::optional<std::string> parts;
  std::optional<std::size_t> jobs;
  std::optional<int> fold;
  std::optional<std::size_t> total_budget;
  std::optional<std::size_t> part_budget;
  std::optional<std::size_t> batch_size;
};

tdm::PipelineConfig resolve(const Overrides& o) {
  tdm::PipelineConfig config;
  if (o.config_file) tdm::apply_config_json(config, tdm::io::read_json(*o.config_file));
  if (o.tei_dir) config.tei_dir = *o.tei_dir;
  if (o.papers) config.papers_file = *o.papers;
  if (o.evaluations) config.evaluations_file = *o.evaluations;
  if (o.work_dir) config.work_dir = *o.work_dir;
  if (o.seed) config.seed = *o.seed;
  if (o.k_false) config.k_false = *o.k_false;
  if (o.threshold) config.threshold = *o.threshold;
  if (o.scorer) config.scorer = *o.scorer;
  if (o.min_papers) config.min_papers = *o.min_papers;
  if (o.parts) config.features.enabled_parts = tdm::PartSet::parse(*o.parts);
  if (o.jobs) config.jobs = *o.jobs;
  if (o.fold) config.fold = *o.fold;
  if (o.total_budget) config.features.total_budget = *o.total_budget;
  if (o.part_budget) config.features.part_budget = *o.part_budget;
  if (o.batch_size) config.batch_size = *o.batch_size;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leaderboard (task, dataset, metric) extraction pipeline"};
  std::string stage_name;
  Overrides o;

  app.add_option("stage", stage_name,
                 "ingest | build-corpus | make-instances | predict | evaluate | ablate | all")
      ->required();
  app.add_option("--config", o.config_file, "JSON config file; flags override its values");
  app.add_option("--tei-dir", o.tei_dir, "directory of <paper_id>.tei.xml files");
  app.add_option("--papers", o.papers, "papers metadata JSON");
  app.add_option("--evaluations", o.evaluations, "evaluation metadata JSON");
  app.add_option("--work-dir", o.work_dir, "directory for stage outputs (default: work)");
  app.add_option("--seed", o.seed, "top-level seed (default 42)");
  app.add_option("--k-false", o.k_false, "false triples sampled per training paper (default 10)");
  app.add_option("--threshold", o.threshold, "entailment threshold in (0,1) (default 0.5)");
  app.add_option("--scorer", o.scorer, "lexical: or http(s)://host:port/score");
  app.add_option("--min-papers", o.min_papers, "drop triples seen in fewer papers (default 5)");
  app.add_option("--parts", o.parts, "feature parts, e.g. title,abstract,exp_setup,table_info");
  app.add_option("--jobs", o.jobs, "worker threads per stage (default 1)");
  app.add_option("--fold", o.fold, "restrict per-fold stages to one fold");
  app.add_option("--total-budget", o.total_budget, "token budget of the combined feature (default 512)");
  app.add_option("--part-budget", o.part_budget, "token budget of exp-setup and table parts (default 150)");
  app.add_option("--batch-size", o.batch_size, "items per scorer call (default 64)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  tdm::PipelineConfig config;
  try {
    config = resolve(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (stage_name == "all") {
    for (auto stage : tdm::kPipelineOrder) {
      if (const int status = tdm::run_stage_status(stage, config, std::cerr); status != 0) return status;
    }
    return 0;
  }
  const auto stage = tdm::parse_stage(stage_name);
  if (!stage) {
    std::cerr << "error: unknown stage '" << stage_name << "'\n" << app.help();
    return 2;
  }
  return tdm::run_stage_status(*stage, config, std::cerr);
}
