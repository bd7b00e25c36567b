#pragma once

// Random small evaluation problems for property checks.

#include <string>
#include <vector>

#include "tdm/corpus.hpp"
#include "tdm/random.hpp"
#include "tdm/scorer.hpp"

namespace tdm::testing {

struct EvalProblem {
  std::vector<LabeledPaper> gold;
  std::vector<PaperPrediction> predictions;
};

/// Up to `max_papers` papers over at most `max_labels` triples. Components
/// are drawn from three values each so projections collide. Roughly one
/// gold set in five is {Unknown}; empty predictions become {Unknown}.
inline EvalProblem random_eval_problem(Rng& rng, std::size_t max_papers = 10, std::size_t max_labels = 10) {
  const std::size_t n_labels = 1 + uniform_below(rng, max_labels);
  std::vector<TdmTriple> labels;
  for (std::size_t i = 0; i < n_labels; ++i) {
    labels.emplace_back("task" + std::to_string(uniform_below(rng, 3)),
                        "data" + std::to_string(uniform_below(rng, 3)), "metric" + std::to_string(i));
  }
  auto random_set = [&](std::uint64_t density) {
    TripleSet s;
    for (const auto& l : labels) {
      if (uniform_below(rng, 10) < density) s.insert(l);
    }
    return s;
  };
  EvalProblem out;
  const std::size_t n_papers = 1 + uniform_below(rng, max_papers);
  for (std::size_t i = 0; i < n_papers; ++i) {
    LabeledPaper paper;
    paper.paper_id = "paper" + std::to_string(i);
    paper.gold = uniform_below(rng, 5) == 0 ? TripleSet{} : random_set(3);
    if (paper.gold.empty()) paper.gold.insert(TdmTriple::unknown());
    PaperPrediction pred;
    pred.paper_id = paper.paper_id;
    pred.predicted = random_set(3);
    if (pred.predicted.empty()) pred.predicted.insert(TdmTriple::unknown());
    out.gold.push_back(std::move(paper));
    out.predictions.push_back(std::move(pred));
  }
  return out;
}

}  // namespace tdm::testing
