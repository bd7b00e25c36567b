#pragma once

// Literal enumeration of every (paper, label) decision. Deliberately naive:
// string labels, linear membership scans, no shared code with the evaluator.

#include <algorithm>
#include <string>
#include <vector>

#include "tdm/corpus.hpp"
#include "tdm/evaluator.hpp"
#include "tdm/scorer.hpp"

namespace tdm::testing {

struct OracleMetrics {
  double micro_p = 0, micro_r = 0, micro_f1 = 0;
  double macro_p = 0, macro_r = 0, macro_f1 = 0;
  long tp = 0, fp = 0, fn = 0;
  long labels = 0;
};

inline std::string oracle_label(const TdmTriple& t, Granularity g) {
  if (t.is_unknown()) return "#unknown";
  if (g == Granularity::kTask) return "T|" + t.task();
  if (g == Granularity::kDataset) return "D|" + t.dataset();
  if (g == Granularity::kMetric) return "M|" + t.metric();
  return "X|" + t.task() + "\x1f" + t.dataset() + "\x1f" + t.metric();
}

inline bool oracle_has(const TripleSet& set, const std::string& label, Granularity g) {
  for (const auto& t : set) {
    if (oracle_label(t, g) == label) return true;
  }
  return false;
}

inline OracleMetrics brute_force_metrics(const std::vector<PaperPrediction>& predictions,
                                         const std::vector<LabeledPaper>& gold, Setting setting, Granularity g) {
  std::vector<std::pair<const TripleSet*, const TripleSet*>> rows;  // (gold, predicted)
  for (const auto& paper : gold) {
    bool only_unknown = paper.gold.size() == 1 && paper.gold.begin()->is_unknown();
    if (setting == Setting::kWithoutUnknown && only_unknown) continue;
    const TripleSet* pred = nullptr;
    for (const auto& p : predictions) {
      if (p.paper_id == paper.paper_id) pred = &p.predicted;
    }
    rows.emplace_back(&paper.gold, pred);
  }

  std::vector<std::string> universe;
  for (const auto& [gs, ps] : rows) {
    for (const auto* set : {gs, ps}) {
      for (const auto& t : *set) {
        const auto l = oracle_label(t, g);
        if (std::find(universe.begin(), universe.end(), l) == universe.end()) universe.push_back(l);
      }
    }
  }

  OracleMetrics m;
  double sp = 0, sr = 0, sf = 0;
  for (const auto& label : universe) {
    long tp = 0, fp = 0, fn = 0;
    for (const auto& [gs, ps] : rows) {
      const bool in_gold = oracle_has(*gs, label, g);
      const bool in_pred = oracle_has(*ps, label, g);
      if (in_gold && in_pred) ++tp;
      if (!in_gold && in_pred) ++fp;
      if (in_gold && !in_pred) ++fn;
    }
    m.tp += tp;
    m.fp += fp;
    m.fn += fn;
    if (tp + fn == 0) continue;
    const double p = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
    const double r = double(tp) / double(tp + fn);
    sp += p;
    sr += r;
    sf += p + r == 0 ? 0.0 : 2 * p * r / (p + r);
    ++m.labels;
  }
  m.micro_p = m.tp + m.fp == 0 ? 0.0 : double(m.tp) / double(m.tp + m.fp);
  m.micro_r = m.tp + m.fn == 0 ? 0.0 : double(m.tp) / double(m.tp + m.fn);
  m.micro_f1 = m.micro_p + m.micro_r == 0 ? 0.0 : 2 * m.micro_p * m.micro_r / (m.micro_p + m.micro_r);
  if (m.labels > 0) {
    m.macro_p = sp / double(m.labels);
    m.macro_r = sr / double(m.labels);
    m.macro_f1 = sf / double(m.labels);
  }
  return m;
}

}  // namespace tdm::testing
