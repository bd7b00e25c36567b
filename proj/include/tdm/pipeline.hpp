#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tdm/doctaet.hpp"
#include "tdm/io.hpp"
#include "tdm/nli.hpp"

namespace tdm {

inline constexpr std::string_view kVersion = "0.1.0";

struct PipelineConfig {
  std::filesystem::path tei_dir;
  std::filesystem::path papers_file;
  std::filesystem::path evaluations_file;
  std::filesystem::path work_dir = "work";

  std::uint64_t seed = 42;
  FeatureConfig features;
  std::size_t k_false = 10;
  std::string scorer = "lexical:";
  double threshold = 0.5;
  std::size_t min_papers = 5;
  std::size_t jobs = 1;
  std::optional<int> fold;  ///< restrict per-fold stages to one fold
  double train_ratio = 0.7;
  int n_folds = 2;
  std::size_t batch_size = 64;

  /// Throws tdm::Error describing the first invalid field.
  void validate() const;

  SamplingConfig sampling() const { return {k_false, seed}; }
};

/// Overlays the keys present in `j` onto `config`. Unknown keys are an error.
void apply_config_json(PipelineConfig& config, const io::Json& j);
io::Json to_json(const PipelineConfig& config);

enum class Stage { kIngest, kBuildCorpus, kMakeInstances, kPredict, kEvaluate, kAblate };

inline constexpr Stage kPipelineOrder[] = {Stage::kIngest, Stage::kBuildCorpus, Stage::kMakeInstances,
                                           Stage::kPredict, Stage::kEvaluate};

std::optional<Stage> parse_stage(std::string_view name);
std::string_view to_string(Stage stage);

/// File names inside the work directory.
namespace artifacts {
inline constexpr std::string_view kDocuments = "documents.jsonl";
inline constexpr std::string_view kCorpus = "corpus.jsonl";
inline constexpr std::string_view kFolds = "folds.json";
inline constexpr std::string_view kStats = "stats.json";
inline constexpr std::string_view kFeatures = "features.jsonl";
inline constexpr std::string_view kInstanceStats = "instance_stats.json";
inline constexpr std::string_view kReport = "report.json";
inline constexpr std::string_view kReportText = "report.txt";
inline constexpr std::string_view kAblation = "ablation.json";
inline constexpr std::string_view kAblationText = "ablation.txt";

std::string instances(int fold, std::size_t k_false);
std::string predictions(int fold);
std::string manifest(Stage stage);
}  // namespace artifacts

/// Runs one stage. Outputs are written atomically, followed by a manifest
/// recording config, seed and SHA-256 digests of inputs and outputs.
/// Throws MissingInputError when a prerequisite is absent, tdm::Error otherwise.
void run_stage(Stage stage, const PipelineConfig& config, std::ostream& log);

/// Exit status convention: 0 success, 1 module error, 2 usage or missing prerequisite.
int run_stage_status(Stage stage, const PipelineConfig& config, std::ostream& log);

}  // namespace tdm
