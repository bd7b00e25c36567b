#include <doctest.h>

#include <cmath>

#include "support/metric_oracle.hpp"
#include "support/random_eval.hpp"
#include "support/synthetic_corpus.hpp"
#include "tdm/error.hpp"
#include "tdm/evaluator.hpp"
#include "tdm/tei.hpp"

using namespace tdm;

namespace {

LabeledPaper paper(const std::string& id, TripleSet gold) {
  LabeledPaper p;
  p.paper_id = id;
  p.document.paper_id = id;
  p.gold = std::move(gold);
  return p;
}

PaperPrediction pred(const std::string& id, TripleSet predicted) {
  PaperPrediction p;
  p.paper_id = id;
  p.predicted = std::move(predicted);
  return p;
}

const TdmTriple g1("A", "B", "C");
const TdmTriple g2("A", "D", "E");
const TdmTriple g3("F", "G", "H");

}  // namespace

TEST_CASE("hand-computed examples") {
  SUBCASE("perfect prediction") {
    const std::vector<LabeledPaper> gold{paper("a", {g1, g2}), paper("b", {TdmTriple::unknown()})};
    const std::vector<PaperPrediction> preds{pred("a", {g1, g2}), pred("b", {TdmTriple::unknown()})};
    for (const auto& r : evaluate_all(preds, gold)) {
      CHECK(r.macro_p == 1.0);
      CHECK(r.macro_r == 1.0);
      CHECK(r.macro_f1 == 1.0);
      CHECK(r.micro_p == 1.0);
      CHECK(r.micro_r == 1.0);
      CHECK(r.micro_f1 == 1.0);
    }
  }
  SUBCASE("one hit one miss") {
    const auto r = evaluate({pred("a", {g1, g3})}, {paper("a", {g1, g2})}, Setting::kWithUnknown, Granularity::kTriple);
    CHECK(r.micro_p == 0.5);
    CHECK(r.micro_r == 0.5);
    CHECK(r.micro_f1 == 0.5);
    CHECK(r.support.tp == 1);
    CHECK(r.support.fp == 1);
    CHECK(r.support.fn == 1);
    // Labels with gold support: g1 (P=R=1) and g2 (P=R=0).
    CHECK(r.support.labels == 2);
    CHECK(r.macro_p == 0.5);
    CHECK(r.macro_r == 0.5);
  }
  SUBCASE("task projection deduplicates") {
    const auto r = evaluate({pred("a", {g1})}, {paper("a", {g1, g2})}, Setting::kWithUnknown, Granularity::kTask);
    CHECK(r.micro_p == 1.0);
    CHECK(r.micro_r == 1.0);
    CHECK(r.micro_f1 == 1.0);
  }
  SUBCASE("without_unknown drops Unknown papers only") {
    const std::vector<LabeledPaper> gold{paper("a", {g1}), paper("b", {TdmTriple::unknown()})};
    const std::vector<PaperPrediction> preds{pred("a", {TdmTriple::unknown()}), pred("b", {g1})};
    const auto with = evaluate(preds, gold, Setting::kWithUnknown, Granularity::kTriple);
    const auto without = evaluate(preds, gold, Setting::kWithoutUnknown, Granularity::kTriple);
    CHECK(with.support.papers == 2);
    CHECK(without.support.papers == 1);
    CHECK(without.micro_r == 0.0);
    CHECK(without.support.fp == 1);  // Unknown predicted for a real paper
  }
}

TEST_CASE("id mismatch and duplicates are errors") {
  CHECK_THROWS_AS(evaluate({pred("a", {g1})}, {paper("b", {g1})}, Setting::kWithUnknown, Granularity::kTriple), Error);
  CHECK_THROWS_AS(evaluate({pred("a", {g1}), pred("a", {g1})}, {paper("a", {g1})}, Setting::kWithUnknown,
                           Granularity::kTriple),
                  Error);
  try {
    evaluate({pred("a", {g1})}, {paper("b", {g1})}, Setting::kWithUnknown, Granularity::kTriple);
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("a") != std::string::npos);
    CHECK(what.find("b") != std::string::npos);
  }
}

TEST_CASE("matches the brute-force oracle") {
  auto rng = make_rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const auto problem = testing::random_eval_problem(rng);
    for (auto s : kAllSettings) {
      for (auto g : kAllGranularities) {
        const auto r = evaluate(problem.predictions, problem.gold, s, g);
        const auto o = testing::brute_force_metrics(problem.predictions, problem.gold, s, g);
        CHECK(std::abs(r.micro_p - o.micro_p) <= 1e-12);
        CHECK(std::abs(r.micro_r - o.micro_r) <= 1e-12);
        CHECK(std::abs(r.micro_f1 - o.micro_f1) <= 1e-12);
        CHECK(std::abs(r.macro_p - o.macro_p) <= 1e-12);
        CHECK(std::abs(r.macro_r - o.macro_r) <= 1e-12);
        CHECK(std::abs(r.macro_f1 - o.macro_f1) <= 1e-12);
        CHECK(r.support.tp == std::size_t(o.tp));
        CHECK(r.support.labels == std::size_t(o.labels));
        for (double v : {r.micro_p, r.micro_r, r.micro_f1, r.macro_p, r.macro_r, r.macro_f1}) {
          CHECK((v >= 0.0 && v <= 1.0));
        }
        CHECK(r.micro_f1 == doctest::Approx(f1_score(r.micro_p, r.micro_r)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("properties") {
  auto rng = make_rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto problem = testing::random_eval_problem(rng);
    for (auto g : kAllGranularities) {
      const auto base = evaluate(problem.predictions, problem.gold, Setting::kWithUnknown, g);

      // Permutation invariance.
      auto gold = problem.gold;
      auto preds = problem.predictions;
      shuffle(std::span(gold), rng);
      shuffle(std::span(preds), rng);
      CHECK(evaluate(preds, gold, Setting::kWithUnknown, g) == base);

      // Adding a correctly predicted triple never lowers micro recall.
      auto grown_gold = problem.gold;
      auto grown_pred = problem.predictions;
      const auto i = uniform_below(rng, grown_gold.size());
      const TdmTriple extra("task-extra", "data-extra", "metric-extra");
      grown_gold[i].gold.erase(TdmTriple::unknown());
      grown_gold[i].gold.insert(extra);
      grown_pred[i].predicted.erase(TdmTriple::unknown());
      grown_pred[i].predicted.insert(extra);
      if (!problem.gold[i].is_unknown() && !problem.predictions[i].predicted.contains(TdmTriple::unknown())) {
        CHECK(evaluate(grown_pred, grown_gold, Setting::kWithUnknown, g).micro_r >= base.micro_r);
      }
    }

    // Settings agree when no gold set is {Unknown}.
    auto known = problem;
    for (auto& p : known.gold) {
      if (p.is_unknown()) p.gold = {TdmTriple("t", "d", "m")};
    }
    for (auto g : kAllGranularities) {
      auto with = evaluate(known.predictions, known.gold, Setting::kWithUnknown, g);
      auto without = evaluate(known.predictions, known.gold, Setting::kWithoutUnknown, g);
      without.setting = with.setting;
      CHECK(with == without);
    }
  }
}

TEST_CASE("fold averaging") {
  EvalReport a, b, c;
  a.micro_f1 = 0.8;
  b.micro_f1 = 0.9;
  a.support.tp = 3;
  b.support.tp = 4;
  const auto ab = average_folds({a, b});
  CHECK(ab.micro_f1 == doctest::Approx(0.85));
  CHECK(ab.support.tp == 7);
  CHECK(average_folds({a, a}) .micro_f1 == a.micro_f1);
  c.micro_f1 = 0.4;
  CHECK(average_folds({a, b, c}).micro_f1 == doctest::Approx(0.7));
  c.granularity = Granularity::kTask;
  CHECK_THROWS_AS(average_folds({a, c}), Error);
  CHECK_THROWS_AS(average_folds({}), Error);
}

TEST_CASE("ablation on the synthetic corpus") {
  const auto synth = testing::make_synthetic_corpus();
  std::vector<Document> docs;
  for (const auto& [id, xml] : synth.tei) docs.push_back(parse_tei(xml, id));
  const auto corpus =
      assign_unknown(filter_rare_labels(join_documents(docs, load_metadata(synth.papers_json, synth.evaluations_json))));
  const auto splits = split_folds(corpus, 0.7, 2, 42);
  std::vector<FeatureConfig> configs;
  for (const auto& parts : standard_ablation_parts()) {
    FeatureConfig c;
    c.enabled_parts = parts;
    configs.push_back(c);
  }
  const auto rows = ablation_matrix(corpus, splits, LexicalScorer(), configs);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].label == "Title + Abstract");
  CHECK(rows[3].label == "Title + Abstract + ExpSetup + TableInfo");
  CHECK(rows[0].report == rows[3].report);
  CHECK(rows[0].report.micro_f1 == 1.0);

  const auto one = ablation_matrix(corpus, splits, LexicalScorer(), {configs[1]});
  CHECK(one.size() == 1);
}

TEST_CASE("report rendering") {
  const auto r = evaluate({pred("a", {g1, g3})}, {paper("a", {g1, g2})}, Setting::kWithUnknown, Granularity::kTriple);
  const auto j = to_json(r);
  CHECK(j.at("micro_f1") == 0.5);
  const auto all = reports_to_json(evaluate_all({pred("a", {g1})}, {paper("a", {g1})}));
  CHECK(all.at("with_unknown").at("triple").at("macro_f1") == 1.0);
  CHECK(all.at("without_unknown").at("metric").at("micro_p") == 1.0);
  const auto table = format_table({{"row", r}});
  CHECK(table.find("50.0") != std::string::npos);
}
