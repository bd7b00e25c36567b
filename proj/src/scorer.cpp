#include "tdm/scorer.hpp"

#include <unordered_set>

#include "tdm/error.hpp"
#include "tdm/parallel.hpp"
#include "tdm/text.hpp"

namespace tdm {

namespace {

std::unordered_set<std::string> folded_token_set(std::string_view input) {
  const auto folded = text::case_fold(input);
  std::unordered_set<std::string> out;
  for (auto token : text::tokenize(folded)) out.emplace(token);
  return out;
}

}  // namespace

std::vector<double> LexicalScorer::score(const ScoreRequest& request) const {
  if (request.items.empty()) throw ScorerError("score request has no items", false);
  std::vector<double> scores;
  scores.reserve(request.items.size());
  // Candidate lists share one premise; reuse its token set across the run.
  const std::string* last_premise = nullptr;
  std::unordered_set<std::string> premise_tokens;
  for (const auto& item : request.items) {
    if (last_premise == nullptr || *last_premise != item.premise) {
      premise_tokens = folded_token_set(item.premise);
      last_premise = &item.premise;
    }
    const auto hypothesis_tokens = folded_token_set(item.hypothesis);
    if (hypothesis_tokens.empty()) {
      scores.push_back(0.0);
      continue;
    }
    std::size_t hits = 0;
    for (const auto& t : hypothesis_tokens) hits += premise_tokens.contains(t) ? 1 : 0;
    scores.push_back(static_cast<double>(hits) / static_cast<double>(hypothesis_tokens.size()));
  }
  return scores;
}

std::string render_hypothesis(const TdmTriple& triple) {
  if (triple.is_unknown()) throw Error("the Unknown label has no hypothesis form");
  return text::normalize_whitespace(triple.task()) + " : " + text::normalize_whitespace(triple.dataset()) +
         " : " + text::normalize_whitespace(triple.metric());
}

PaperPrediction decide(std::string paper_id, std::map<TdmTriple, double> scores, double threshold) {
  PaperPrediction p;
  p.paper_id = std::move(paper_id);
  for (const auto& [t, s] : scores) {
    if (s > threshold) p.predicted.insert(t);
  }
  if (p.predicted.empty()) p.predicted.insert(TdmTriple::unknown());
  p.scores = std::move(scores);
  return p;
}

PaperPrediction predict_paper(const std::string& paper_id, const DocTaetFeature& feature,
                              const std::vector<TdmTriple>& candidates, double threshold, const Scorer& scorer,
                              std::size_t batch_size) {
  if (candidates.empty()) throw Error("predict_paper(" + paper_id + "): empty candidate list");
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error("predict_paper: threshold must lie in (0,1)");
  if (batch_size == 0) batch_size = candidates.size();

  std::map<TdmTriple, double> scores;
  for (std::size_t start = 0; start < candidates.size(); start += batch_size) {
    const std::size_t end = std::min(candidates.size(), start + batch_size);
    ScoreRequest request;
    for (std::size_t i = start; i < end; ++i) {
      request.items.push_back({feature.combined, render_hypothesis(candidates[i])});
    }
    std::vector<double> batch;
    try {
      batch = scorer.score(request);
    } catch (const ScorerError& e) {
      throw ScorerError("paper " + paper_id + ": " + e.what(), e.retryable());
    }
    if (batch.size() != request.items.size()) {
      throw ProtocolError("paper " + paper_id + ": scorer returned " + std::to_string(batch.size()) +
                          " scores for " + std::to_string(request.items.size()) + " items");
    }
    for (std::size_t i = start; i < end; ++i) scores[candidates[i]] = batch[i - start];
  }
  return decide(paper_id, std::move(scores), threshold);
}

std::vector<PaperPrediction> predict_papers(const std::vector<std::string>& paper_ids,
                                            const std::vector<DocTaetFeature>& features,
                                            const std::vector<TdmTriple>& candidates, double threshold,
                                            const Scorer& scorer, std::size_t jobs, std::size_t batch_size) {
  if (paper_ids.size() != features.size()) throw Error("predict_papers: ids and features differ in length");
  std::vector<PaperPrediction> out(paper_ids.size());
  parallel_for(paper_ids.size(), jobs, [&](std::size_t i) {
    out[i] = predict_paper(paper_ids[i], features[i], candidates, threshold, scorer, batch_size);
  });
  return out;
}

io::Json to_json(const PaperPrediction& prediction) {
  io::Json scores = io::Json::array();
  for (const auto& [t, s] : prediction.scores) {
    auto entry = to_json(t);
    entry["score"] = s;
    scores.push_back(std::move(entry));
  }
  io::Json out;
  out["paper_id"] = prediction.paper_id;
  out["predicted"] = to_json(prediction.predicted);
  out["scores"] = std::move(scores);
  return out;
}

PaperPrediction prediction_from_json(const io::Json& j) {
  try {
    PaperPrediction p;
    p.paper_id = j.at("paper_id").get<std::string>();
    p.predicted = triple_set_from_json(j.at("predicted"));
    for (const auto& entry : j.at("scores")) p.scores[triple_from_json(entry)] = entry.at("score").get<double>();
    if (p.predicted.empty()) throw Error("prediction for " + p.paper_id + " has an empty predicted set");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed prediction record: ") + e.what());
  }
}

}  // namespace tdm
