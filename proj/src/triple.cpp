#include "tdm/triple.hpp"

#include "tdm/error.hpp"
#include "tdm/text.hpp"

namespace tdm {

std::string normalize_label(std::string_view raw) {
  return text::nfc(text::normalize_whitespace(raw));
}

TdmTriple::TdmTriple(std::string_view task, std::string_view dataset, std::string_view metric)
    : fields_(Fields{normalize_label(task), normalize_label(dataset), normalize_label(metric)}) {
  if (fields_->task.empty() || fields_->dataset.empty() || fields_->metric.empty()) {
    throw Error("TDM triple fields must be non-empty: (" + std::string(task) + ", " +
                std::string(dataset) + ", " + std::string(metric) + ")");
  }
}

const std::string& TdmTriple::task() const {
  if (!fields_) throw Error("task() called on the Unknown label");
  return fields_->task;
}

const std::string& TdmTriple::dataset() const {
  if (!fields_) throw Error("dataset() called on the Unknown label");
  return fields_->dataset;
}

const std::string& TdmTriple::metric() const {
  if (!fields_) throw Error("metric() called on the Unknown label");
  return fields_->metric;
}

std::string to_string(const TdmTriple& t) {
  if (t.is_unknown()) return "unknown";
  return t.task() + " : " + t.dataset() + " : " + t.metric();
}

io::Json to_json(const TdmTriple& t) {
  if (t.is_unknown()) return io::Json{{"unknown", true}};
  return io::Json{{"task", t.task()}, {"dataset", t.dataset()}, {"metric", t.metric()}};
}

TdmTriple triple_from_json(const io::Json& j) {
  if (!j.is_object()) throw Error("triple must be a JSON object: " + io::dump(j));
  if (j.contains("unknown")) {
    if (j.at("unknown") != true) throw Error("malformed Unknown label: " + io::dump(j));
    return TdmTriple::unknown();
  }
  try {
    return TdmTriple(j.at("task").get<std::string>(), j.at("dataset").get<std::string>(),
                     j.at("metric").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed triple: ") + e.what());
  }
}

io::Json to_json(const TripleSet& set) {
  io::Json out = io::Json::array();
  for (const auto& t : set) out.push_back(to_json(t));
  return out;
}

TripleSet triple_set_from_json(const io::Json& j) {
  if (!j.is_array()) throw Error("triple list must be a JSON array");
  TripleSet out;
  for (const auto& item : j) out.insert(triple_from_json(item));
  return out;
}

}  // namespace tdm
