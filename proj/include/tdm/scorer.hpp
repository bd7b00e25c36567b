#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tdm/doctaet.hpp"
#include "tdm/io.hpp"
#include "tdm/triple.hpp"

namespace tdm {

struct ScoreItem {
  std::string premise;
  std::string hypothesis;

  bool operator==(const ScoreItem&) const = default;
};

/// Ordered (premise, hypothesis) pairs; responses keep the order.
struct ScoreRequest {
  std::vector<ScoreItem> items;
};

/// Entailment scorer. Implementations return one score in [0,1] per item and
/// must be safe to call from several threads at once.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::vector<double> score(const ScoreRequest& request) const = 0;

  /// URI-style description recorded in manifests.
  virtual std::string describe() const = 0;
};

/// Reference scorer: fraction of distinct case-folded hypothesis tokens that
/// also occur in the premise.
class LexicalScorer final : public Scorer {
 public:
  std::vector<double> score(const ScoreRequest& request) const override;
  std::string describe() const override { return "lexical:"; }
};

struct RemoteOptions {
  std::size_t batch_size = 64;
  int max_retries = 3;
  int initial_backoff_ms = 100;
  std::size_t pool_size = 4;
  int timeout_seconds = 60;
};

/// `lexical:` or `http(s)://host[:port][/path]` (path defaults to /score).
std::unique_ptr<Scorer> make_scorer(std::string_view uri, const RemoteOptions& options = {});

/// "task : dataset : metric".
std::string render_hypothesis(const TdmTriple& triple);

/// Paper-level decision. `predicted` is never empty: {Unknown} when no
/// candidate clears the threshold.
struct PaperPrediction {
  std::string paper_id;
  TripleSet predicted;
  std::map<TdmTriple, double> scores;

  bool operator==(const PaperPrediction&) const = default;
};

inline constexpr double kDefaultThreshold = 0.5;

/// predicted = {t : scores[t] > threshold}, or {Unknown} if that is empty.
PaperPrediction decide(std::string paper_id, std::map<TdmTriple, double> scores, double threshold);

/// Scores every candidate against feature.combined, `batch_size` items per call.
PaperPrediction predict_paper(const std::string& paper_id, const DocTaetFeature& feature,
                              const std::vector<TdmTriple>& candidates, double threshold, const Scorer& scorer,
                              std::size_t batch_size = 64);

io::Json to_json(const PaperPrediction& prediction);
PaperPrediction prediction_from_json(const io::Json& j);

/// predict_paper over many papers; `features` is parallel to `paper_ids`.
std::vector<PaperPrediction> predict_papers(const std::vector<std::string>& paper_ids,
                                            const std::vector<DocTaetFeature>& features,
                                            const std::vector<TdmTriple>& candidates, double threshold,
                                            const Scorer& scorer, std::size_t jobs = 1,
                                            std::size_t batch_size = 64);

}  // namespace tdm
