#include "tdm/evaluator.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "tdm/error.hpp"
#include "tdm/nli.hpp"
#include "tdm/parallel.hpp"

namespace tdm {

std::string_view to_string(Setting s) {
  return s == Setting::kWithUnknown ? "with_unknown" : "without_unknown";
}

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::kTriple: return "triple";
    case Granularity::kTask: return "task";
    case Granularity::kDataset: return "dataset";
    case Granularity::kMetric: return "metric";
  }
  return "?";
}

double f1_score(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

namespace {

// A label after projection. Components not selected by the granularity stay empty.
struct Label {
  bool unknown = false;
  std::string task;
  std::string dataset;
  std::string metric;

  auto operator<=>(const Label&) const = default;
};

Label project(const TdmTriple& t, Granularity g) {
  if (t.is_unknown()) return {true, {}, {}, {}};
  switch (g) {
    case Granularity::kTriple: return {false, t.task(), t.dataset(), t.metric()};
    case Granularity::kTask: return {false, t.task(), {}, {}};
    case Granularity::kDataset: return {false, {}, t.dataset(), {}};
    case Granularity::kMetric: return {false, {}, {}, t.metric()};
  }
  return {};
}

std::set<Label> project(const TripleSet& set, Granularity g) {
  std::set<Label> out;
  for (const auto& t : set) out.insert(project(t, g));
  return out;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string describe_difference(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::string out;
  std::size_t listed = 0;
  for (const auto& id : a) {
    if (b.contains(id) || listed++ >= 10) continue;
    out += (out.empty() ? "" : ", ") + id;
  }
  return out;
}

}  // namespace

EvalReport evaluate(const std::vector<PaperPrediction>& predictions, const std::vector<LabeledPaper>& gold,
                    Setting setting, Granularity granularity) {
  std::map<std::string, const TripleSet*> predicted_by_id;
  for (const auto& p : predictions) {
    if (!predicted_by_id.emplace(p.paper_id, &p.predicted).second) {
      throw Error("evaluate: duplicate prediction for " + p.paper_id);
    }
  }
  std::set<std::string> gold_ids;
  std::set<std::string> pred_ids;
  for (const auto& [id, _] : predicted_by_id) pred_ids.insert(id);
  for (const auto& g : gold) {
    if (!gold_ids.insert(g.paper_id).second) throw Error("evaluate: duplicate gold paper " + g.paper_id);
  }
  if (gold_ids != pred_ids) {
    throw Error("evaluate: paper ids differ; gold only: [" + describe_difference(gold_ids, pred_ids) +
                "], predicted only: [" + describe_difference(pred_ids, gold_ids) + "]");
  }

  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<Label, Counts> per_label;
  EvalReport report;
  report.setting = setting;
  report.granularity = granularity;

  for (const auto& paper : gold) {
    if (setting == Setting::kWithoutUnknown && paper.is_unknown()) continue;
    ++report.support.papers;
    const auto g = project(paper.gold, granularity);
    const auto p = project(*predicted_by_id.at(paper.paper_id), granularity);
    for (const auto& label : g) {
      if (p.contains(label)) {
        ++per_label[label].tp;
        ++report.support.tp;
      } else {
        ++per_label[label].fn;
        ++report.support.fn;
      }
    }
    for (const auto& label : p) {
      if (!g.contains(label)) {
        ++per_label[label].fp;
        ++report.support.fp;
      }
    }
  }

  const auto& s = report.support;
  report.micro_p = ratio(s.tp, s.tp + s.fp);
  report.micro_r = ratio(s.tp, s.tp + s.fn);
  report.micro_f1 = f1_score(report.micro_p, report.micro_r);

  double sum_p = 0, sum_r = 0, sum_f1 = 0;
  for (const auto& [label, c] : per_label) {
    if (c.tp + c.fn == 0) continue;  // no gold support
    const double p = ratio(c.tp, c.tp + c.fp);
    const double r = ratio(c.tp, c.tp + c.fn);
    sum_p += p;
    sum_r += r;
    sum_f1 += f1_score(p, r);
    ++report.support.labels;
  }
  if (report.support.labels > 0) {
    const auto n = static_cast<double>(report.support.labels);
    report.macro_p = sum_p / n;
    report.macro_r = sum_r / n;
    report.macro_f1 = sum_f1 / n;
  }
  return report;
}

std::vector<EvalReport> evaluate_all(const std::vector<PaperPrediction>& predictions,
                                     const std::vector<LabeledPaper>& gold) {
  std::vector<EvalReport> out;
  for (auto s : kAllSettings) {
    for (auto g : kAllGranularities) out.push_back(evaluate(predictions, gold, s, g));
  }
  return out;
}

EvalReport average_folds(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw Error("average_folds: no reports");
  EvalReport mean;
  mean.setting = reports.front().setting;
  mean.granularity = reports.front().granularity;
  for (const auto& r : reports) {
    if (r.setting != mean.setting || r.granularity != mean.granularity) {
      throw Error("average_folds: reports disagree on setting or granularity");
    }
    mean.macro_p += r.macro_p;
    mean.macro_r += r.macro_r;
    mean.macro_f1 += r.macro_f1;
    mean.micro_p += r.micro_p;
    mean.micro_r += r.micro_r;
    mean.micro_f1 += r.micro_f1;
    mean.support.papers += r.support.papers;
    mean.support.labels += r.support.labels;
    mean.support.tp += r.support.tp;
    mean.support.fp += r.support.fp;
    mean.support.fn += r.support.fn;
  }
  const auto n = static_cast<double>(reports.size());
  for (double* v : {&mean.macro_p, &mean.macro_r, &mean.macro_f1, &mean.micro_p, &mean.micro_r, &mean.micro_f1}) {
    *v /= n;
  }
  return mean;
}

std::vector<AblationRow> ablation_matrix(const std::vector<LabeledPaper>& corpus,
                                         const std::vector<FoldSplit>& splits, const Scorer& scorer,
                                         const std::vector<FeatureConfig>& configs, double threshold,
                                         Setting setting, Granularity granularity, std::size_t jobs) {
  if (splits.empty()) throw Error("ablation_matrix: no folds");
  std::vector<AblationRow> rows;
  for (const auto& config : configs) {
    std::vector<EvalReport> fold_reports;
    for (const auto& split : splits) {
      const auto candidates = candidate_label_set(select(corpus, split.train_ids));
      if (candidates.empty()) throw Error("ablation_matrix: fold " + std::to_string(split.fold_id) +
                                          " has no training labels");
      const auto test = select(corpus, split.test_ids);
      std::vector<std::string> ids;
      std::vector<DocTaetFeature> features(test.size());
      for (const auto& p : test) ids.push_back(p.paper_id);
      parallel_for(test.size(), jobs, [&](std::size_t i) { features[i] = build_feature(test[i].document, config); });
      const auto predictions = predict_papers(ids, features, candidates, threshold, scorer, jobs);
      fold_reports.push_back(evaluate(predictions, test, setting, granularity));
    }
    rows.push_back({config.enabled_parts.label(), config, average_folds(fold_reports)});
  }
  return rows;
}

namespace {

double round4(double v) { return std::round(v * 1e4) / 1e4; }

}  // namespace

io::Json to_json(const EvalReport& report) {
  io::Json out;
  out["setting"] = std::string(to_string(report.setting));
  out["granularity"] = std::string(to_string(report.granularity));
  out["macro_p"] = round4(report.macro_p);
  out["macro_r"] = round4(report.macro_r);
  out["macro_f1"] = round4(report.macro_f1);
  out["micro_p"] = round4(report.micro_p);
  out["micro_r"] = round4(report.micro_r);
  out["micro_f1"] = round4(report.micro_f1);
  out["support"] = {{"papers", report.support.papers},
                    {"labels", report.support.labels},
                    {"tp", report.support.tp},
                    {"fp", report.support.fp},
                    {"fn", report.support.fn}};
  return out;
}

io::Json reports_to_json(const std::vector<EvalReport>& reports) {
  io::Json out = io::Json::object();
  for (const auto& r : reports) {
    out[std::string(to_string(r.setting))][std::string(to_string(r.granularity))] = to_json(r);
  }
  return out;
}

io::Json to_json(const std::vector<AblationRow>& rows) {
  io::Json out = io::Json::array();
  for (const auto& row : rows) {
    out.push_back({{"representation", row.label},
                   {"parts", row.config.enabled_parts.to_string()},
                   {"config", row.config.fingerprint()},
                   {"report", to_json(row.report)}});
  }
  return out;
}

std::string format_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::size_t width = 8;
  for (const auto& [name, _] : rows) width = std::max(width, name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %7s %7s %8s  %7s %7s %8s\n", static_cast<int>(width), "",
                "Macro P", "Macro R", "Macro F1", "Micro P", "Micro R", "Micro F1");
  out += buf;
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %7.1f %7.1f %8.1f  %7.1f %7.1f %8.1f\n", static_cast<int>(width),
                  name.c_str(), 100 * r.macro_p, 100 * r.macro_r, 100 * r.macro_f1, 100 * r.micro_p,
                  100 * r.micro_r, 100 * r.micro_f1);
    out += buf;
  }
  return out;
}

}  // namespace tdm
