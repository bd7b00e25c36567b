#include "tdm/nli.hpp"

#include <algorithm>

#include "tdm/error.hpp"
#include "tdm/random.hpp"

namespace tdm {

std::vector<TdmTriple> candidate_label_set(const std::vector<LabeledPaper>& train) {
  TripleSet distinct;
  for (const auto& paper : train) {
    for (const auto& t : paper.gold) {
      if (!t.is_unknown()) distinct.insert(t);
    }
  }
  return {distinct.begin(), distinct.end()};
}

std::vector<NliInstance> generate_instances(const std::vector<LabeledPaper>& papers,
                                            const std::map<std::string, DocTaetFeature>& features,
                                            const std::vector<TdmTriple>& pool, const SamplingConfig& config) {
  std::vector<const LabeledPaper*> ordered;
  ordered.reserve(papers.size());
  for (const auto& p : papers) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const LabeledPaper* a, const LabeledPaper* b) { return a->paper_id < b->paper_id; });

  std::vector<NliInstance> out;
  for (const LabeledPaper* paper : ordered) {
    const auto feature = features.find(paper->paper_id);
    if (feature == features.end()) throw Error("no DocTAET feature for paper " + paper->paper_id);
    const std::string& premise = feature->second.combined;

    for (const auto& t : paper->gold) {
      if (!t.is_unknown()) out.push_back({paper->paper_id, premise, t, true});
    }

    std::vector<std::size_t> available;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!pool[i].is_unknown() && !paper->gold.contains(pool[i])) available.push_back(i);
    }
    const std::size_t k = std::min(config.k_false, available.size());
    auto rng = make_rng(config.seed, paper->paper_id);
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(rng, available.size() - i));
      std::swap(available[i], available[j]);
      out.push_back({paper->paper_id, premise, pool[available[i]], false});
    }
  }
  return out;
}

InstanceStats instance_stats(const std::vector<NliInstance>& instances) {
  InstanceStats s;
  for (const auto& inst : instances) {
    auto& [t, f] = s.per_paper[inst.paper_id];
    if (inst.label) {
      ++t;
      ++s.true_count;
    } else {
      ++f;
      ++s.false_count;
    }
  }
  s.papers = s.per_paper.size();
  for (const auto& [id, counts] : s.per_paper) ++s.histogram[counts.first + counts.second];
  return s;
}

io::Json to_json(const NliInstance& instance) {
  io::Json out;
  out["paper_id"] = instance.paper_id;
  out["premise"] = instance.premise;
  out["task"] = instance.hypothesis.task();
  out["dataset"] = instance.hypothesis.dataset();
  out["metric"] = instance.hypothesis.metric();
  out["label"] = instance.label;
  return out;
}

NliInstance instance_from_json(const io::Json& j) {
  try {
    return {j.at("paper_id").get<std::string>(), j.at("premise").get<std::string>(),
            TdmTriple(j.at("task").get<std::string>(), j.at("dataset").get<std::string>(),
                      j.at("metric").get<std::string>()),
            j.at("label").get<bool>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed instance record: ") + e.what());
  }
}

io::Json to_json(const InstanceStats& stats) {
  io::Json hist = io::Json::object();
  for (const auto& [size, count] : stats.histogram) hist[std::to_string(size)] = count;
  return {{"papers", stats.papers},
          {"true", stats.true_count},
          {"false", stats.false_count},
          {"instances_per_paper_histogram", std::move(hist)}};
}

}  // namespace tdm
