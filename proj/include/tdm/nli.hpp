#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tdm/corpus.hpp"
#include "tdm/doctaet.hpp"
#include "tdm/io.hpp"
#include "tdm/triple.hpp"

namespace tdm {

/// A (premise, hypothesis, entailed?) training record.
struct NliInstance {
  std::string paper_id;
  std::string premise;
  TdmTriple hypothesis;
  bool label = false;

  bool operator==(const NliInstance&) const = default;
};

struct SamplingConfig {
  std::size_t k_false = 10;
  std::uint64_t seed = 0;
};

/// The grid of negatives-per-paper values explored during tuning.
inline constexpr std::size_t kFalseTriplesGrid[] = {10, 50, 100};

/// Distinct real gold triples of `train`, sorted.
std::vector<TdmTriple> candidate_label_set(const std::vector<LabeledPaper>& train);

/// Per paper (output sorted by paper_id): one true instance per real gold
/// triple, then min(k_false, |pool \ gold|) false instances drawn uniformly
/// without replacement from `pool`. Each paper's draws come from a stream
/// keyed on (seed, paper_id). Throws if a paper has no entry in `features`.
std::vector<NliInstance> generate_instances(const std::vector<LabeledPaper>& papers,
                                            const std::map<std::string, DocTaetFeature>& features,
                                            const std::vector<TdmTriple>& pool, const SamplingConfig& config);

struct InstanceStats {
  std::size_t true_count = 0;
  std::size_t false_count = 0;
  std::size_t papers = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_paper;  ///< id -> (true, false)
  std::map<std::size_t, std::size_t> histogram;  ///< instances per paper -> number of papers
};

InstanceStats instance_stats(const std::vector<NliInstance>& instances);

/// Fields paper_id, premise, task, dataset, metric, label.
io::Json to_json(const NliInstance& instance);
NliInstance instance_from_json(const io::Json& j);
io::Json to_json(const InstanceStats& stats);

}  // namespace tdm
