#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tdm/corpus.hpp"
#include "tdm/doctaet.hpp"
#include "tdm/io.hpp"
#include "tdm/scorer.hpp"

namespace tdm {

enum class Setting { kWithUnknown, kWithoutUnknown };
enum class Granularity { kTriple, kTask, kDataset, kMetric };

inline constexpr Setting kAllSettings[] = {Setting::kWithUnknown, Setting::kWithoutUnknown};
inline constexpr Granularity kAllGranularities[] = {Granularity::kTriple, Granularity::kTask,
                                                    Granularity::kDataset, Granularity::kMetric};

std::string_view to_string(Setting s);
std::string_view to_string(Granularity g);

struct Support {
  std::size_t papers = 0;
  std::size_t labels = 0;  ///< labels entering the macro mean
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool operator==(const Support&) const = default;
};

struct EvalReport {
  Setting setting = Setting::kWithUnknown;
  Granularity granularity = Granularity::kTriple;
  double macro_p = 0;
  double macro_r = 0;
  double macro_f1 = 0;
  double micro_p = 0;
  double micro_r = 0;
  double micro_f1 = 0;
  Support support;

  bool operator==(const EvalReport&) const = default;
};

/// Harmonic mean, 0 when p + r == 0.
double f1_score(double p, double r);

/// Multi-label scoring of paper-level predictions against gold.
///
/// kWithoutUnknown drops papers whose gold is {Unknown} first. Non-triple
/// granularities project labels onto one component and deduplicate per
/// paper. Micro figures pool TP/FP/FN over every (paper, label) decision.
/// Macro figures average per-label P, R and F1 without weights over labels
/// that occur in the (kept) gold sets; Unknown is an ordinary label.
///
/// Throws tdm::Error when predictions and gold cover different paper ids.
EvalReport evaluate(const std::vector<PaperPrediction>& predictions, const std::vector<LabeledPaper>& gold,
                    Setting setting, Granularity granularity);

/// Every (setting, granularity) cell.
std::vector<EvalReport> evaluate_all(const std::vector<PaperPrediction>& predictions,
                                     const std::vector<LabeledPaper>& gold);

/// Per-metric arithmetic mean; supports are summed.
EvalReport average_folds(const std::vector<EvalReport>& reports);

struct AblationRow {
  std::string label;  ///< e.g. "Title + Abstract + ExpSetup"
  FeatureConfig config;
  EvalReport report;  ///< averaged over folds
};

/// One fold-averaged evaluation per feature configuration. For each fold the
/// candidates are the training fold's label set and the test papers are scored.
std::vector<AblationRow> ablation_matrix(const std::vector<LabeledPaper>& corpus,
                                         const std::vector<FoldSplit>& splits, const Scorer& scorer,
                                         const std::vector<FeatureConfig>& configs,
                                         double threshold = kDefaultThreshold,
                                         Setting setting = Setting::kWithUnknown,
                                         Granularity granularity = Granularity::kTriple, std::size_t jobs = 1);

/// Metric values rounded to 4 decimals.
io::Json to_json(const EvalReport& report);
/// {"with_unknown": {"triple": {...}, ...}, "without_unknown": {...}}
io::Json reports_to_json(const std::vector<EvalReport>& reports);
io::Json to_json(const std::vector<AblationRow>& rows);

/// Percentages with one decimal, one row per entry.
std::string format_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace tdm
