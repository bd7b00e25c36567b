#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "support/synthetic_corpus.hpp"
#include "tdm/digest.hpp"
#include "tdm/error.hpp"
#include "tdm/io.hpp"
#include "tdm/pipeline.hpp"

using namespace tdm;
namespace fs = std::filesystem;

namespace {

const fs::path kMini = fs::path(TDM_SOURCE_DIR) / "data" / "mini";

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tdm-test-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(TDM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string mini_args(const fs::path& work) {
  return "--tei-dir " + (kMini / "tei").string() + " --papers " + (kMini / "papers.json").string() +
         " --evaluations " + (kMini / "evaluations.json").string() + " --work-dir " + work.string();
}

}  // namespace

TEST_CASE("stage names") {
  for (auto s : {Stage::kIngest, Stage::kBuildCorpus, Stage::kMakeInstances, Stage::kPredict, Stage::kEvaluate,
                 Stage::kAblate}) {
    CHECK(parse_stage(to_string(s)) == s);
  }
  CHECK(!parse_stage("train"));
  CHECK(artifacts::instances(1, 50) == "instances-1-50.jsonl");
}

TEST_CASE("config validation") {
  PipelineConfig c;
  CHECK_NOTHROW(c.validate());
  apply_config_json(c, io::Json::parse(R"({"seed": 7, "k_false": 50, "parts": "title,abstract", "threshold": 0.3})"));
  CHECK(c.seed == 7);
  CHECK(c.k_false == 50);
  CHECK(c.features.enabled_parts == PartSet::title_abstract());
  CHECK(c.threshold == 0.3);
  CHECK_THROWS_AS(apply_config_json(c, io::Json::parse(R"({"sede": 1})")), Error);
  c.threshold = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.threshold = 0.5;
  c.train_ratio = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("missing prerequisite exits with status 2") {
  const auto work = scratch("missing");
  CHECK(run_cli("evaluate --work-dir " + work.string(), work / "log") == 2);
  CHECK(io::read_file(work / "log").find("stage first") != std::string::npos);
  CHECK(run_cli("predict --work-dir " + work.string(), work / "log") == 2);
  CHECK(run_cli("ingest --work-dir " + work.string(), work / "log") == 2);

  std::ostringstream log;
  PipelineConfig c;
  c.work_dir = work;
  CHECK(run_stage_status(Stage::kBuildCorpus, c, log) == 2);
  CHECK_THROWS_AS(run_stage(Stage::kEvaluate, c, log), MissingInputError);
  fs::remove_all(work);
}

TEST_CASE("usage errors exit with status 2") {
  const auto work = scratch("usage");
  CHECK(run_cli("evaluate --no-such-flag", work / "log") == 2);
  CHECK(run_cli("frobnicate", work / "log") == 2);
  CHECK(run_cli("evaluate --threshold 1.5 --work-dir " + work.string(), work / "log") == 2);
  fs::remove_all(work);
}

TEST_CASE("bundled mini corpus matches its generator") {
  const auto synth = testing::make_synthetic_corpus();
  CHECK(io::read_file(kMini / "papers.json") == synth.papers_json);
  CHECK(io::read_file(kMini / "evaluations.json") == synth.evaluations_json);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(kMini / "tei")) {
    ++files;
    auto id = entry.path().filename().string();
    id.resize(id.size() - std::string(".tei.xml").size());
    REQUIRE(synth.tei.contains(id));
    CHECK(io::read_file(entry.path()) == synth.tei.at(id));
  }
  CHECK(files == synth.tei.size());
}

TEST_CASE("full pipeline on the mini corpus") {
  const auto work = scratch("full");
  REQUIRE(run_cli("all " + mini_args(work), work / "log") == 0);

  for (std::string_view name : {artifacts::kDocuments, artifacts::kCorpus, artifacts::kFolds, artifacts::kStats,
                                artifacts::kFeatures, artifacts::kInstanceStats, artifacts::kReport,
                                artifacts::kReportText}) {
    CHECK(fs::exists(work / std::string(name)));
  }
  CHECK(fs::exists(work / artifacts::instances(0, 10)));
  CHECK(fs::exists(work / artifacts::predictions(1)));

  const auto report = io::read_json(work / std::string(artifacts::kReport));
  CHECK(report.at("seed") == 42);
  CHECK(report.at("version") == std::string(kVersion));
  const auto& cell = report.at("average").at("with_unknown").at("triple");
  CHECK(cell.at("micro_f1") == 1.0);
  CHECK(cell.at("macro_f1") == 1.0);

  const auto stats = io::read_json(work / std::string(artifacts::kStats));
  CHECK(stats.at("stats").at("overall").at("papers") == 30);
  CHECK(stats.at("stats").at("overall").at("unknown_annotations") == 4);

  SUBCASE("rerun is byte-identical") {
    const auto instances = io::read_file(work / artifacts::instances(0, 10));
    const auto predictions = io::read_file(work / artifacts::predictions(0));
    REQUIRE(run_cli("make-instances " + mini_args(work), work / "log") == 0);
    REQUIRE(run_cli("predict " + mini_args(work), work / "log") == 0);
    CHECK(io::read_file(work / artifacts::instances(0, 10)) == instances);
    CHECK(io::read_file(work / artifacts::predictions(0)) == predictions);
  }
  SUBCASE("manifests chain by digest") {
    const auto produced = io::read_json(work / artifacts::manifest(Stage::kMakeInstances));
    const auto consumed = io::read_json(work / artifacts::manifest(Stage::kPredict));
    CHECK(consumed.at("seed") == 42);
    std::map<std::string, std::string> outputs;
    for (const auto& o : produced.at("outputs")) outputs[o.at("path")] = o.at("sha256");
    bool linked = false;
    for (const auto& i : consumed.at("inputs")) {
      const auto it = outputs.find(i.at("path"));
      if (it != outputs.end()) {
        CHECK(it->second == i.at("sha256").get<std::string>());
        linked = true;
      }
      CHECK(sha256_file(i.at("path").get<std::string>()) == i.at("sha256").get<std::string>());
    }
    CHECK(linked);
  }
  SUBCASE("changed feature config invalidates predict") {
    CHECK(run_cli("predict --total-budget 100 " + mini_args(work), work / "log") != 0);
  }
  SUBCASE("evaluate without predictions") {
    fs::remove(work / artifacts::predictions(0));
    CHECK(run_cli("evaluate " + mini_args(work), work / "log") == 2);
    CHECK(io::read_file(work / "log").find(artifacts::predictions(0)) != std::string::npos);
  }
  SUBCASE("ablation") {
    REQUIRE(run_cli("ablate " + mini_args(work), work / "log") == 0);
    const auto ablation = io::read_json(work / std::string(artifacts::kAblation));
    CHECK(ablation.at("with_unknown").size() == 4);
  }
  SUBCASE("single fold and other k") {
    REQUIRE(run_cli("make-instances --fold 1 --k-false 50 " + mini_args(work), work / "log") == 0);
    CHECK(fs::exists(work / artifacts::instances(1, 50)));
    CHECK(!fs::exists(work / artifacts::instances(0, 50)));
  }
  fs::remove_all(work);
}
