#include "tdm/remote_scorer.hpp"

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "tdm/error.hpp"

namespace tdm {

std::string encode_score_request(std::span<const ScoreItem> items) {
  io::Json list = io::Json::array();
  for (const auto& item : items) {
    io::Json entry;
    entry["premise"] = item.premise;
    entry["hypothesis"] = item.hypothesis;
    list.push_back(std::move(entry));
  }
  io::Json body;
  body["items"] = std::move(list);
  return io::dump(body);
}

std::vector<ScoreItem> decode_score_request(std::string_view body) {
  io::Json parsed;
  try {
    parsed = io::Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("score request is not JSON: ") + e.what());
  }
  const auto items = parsed.find("items");
  if (!parsed.is_object() || items == parsed.end() || !items->is_array()) {
    throw ProtocolError("score request lacks an \"items\" array");
  }
  std::vector<ScoreItem> out;
  for (const auto& item : *items) {
    const auto premise = item.find("premise");
    const auto hypothesis = item.find("hypothesis");
    if (!item.is_object() || premise == item.end() || hypothesis == item.end() || !premise->is_string() ||
        !hypothesis->is_string()) {
      throw ProtocolError("score request item must carry string premise and hypothesis");
    }
    out.push_back({premise->get<std::string>(), hypothesis->get<std::string>()});
  }
  if (out.empty()) throw ProtocolError("score request has no items");
  return out;
}

std::string encode_score_response(std::span<const double> scores) {
  io::Json body;
  body["scores"] = io::Json::array();
  for (double s : scores) body["scores"].push_back(s);
  return io::dump(body);
}

std::vector<double> decode_score_response(std::string_view body, std::size_t expected) {
  io::Json parsed;
  try {
    parsed = io::Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("score response is not JSON: ") + e.what());
  }
  const auto scores = parsed.is_object() ? parsed.find("scores") : parsed.end();
  if (scores == parsed.end() || !scores->is_array()) throw ProtocolError("score response lacks a \"scores\" array");
  if (scores->size() != expected) {
    throw ProtocolError("score response has " + std::to_string(scores->size()) + " scores for " +
                        std::to_string(expected) + " items");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& s : *scores) {
    if (!s.is_number()) throw ProtocolError("non-numeric score " + io::dump(s));
    const double v = s.get<double>();
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw ProtocolError("score outside [0,1]: " + io::dump(s));
    out.push_back(v);
  }
  return out;
}

std::string encode_error(std::string_view message) {
  io::Json body;
  body["error"] = std::string(message);
  return io::dump(body);
}

// ---------------------------------------------------------------------------

RemoteScorer::RemoteScorer(std::string base_url, std::string path, RemoteOptions options)
    : base_url_(std::move(base_url)), path_(std::move(path)), options_(options) {
  if (options_.batch_size == 0) throw Error("remote scorer batch size must be positive");
  if (options_.pool_size == 0) options_.pool_size = 1;
  if (path_.empty() || path_.front() != '/') path_.insert(path_.begin(), '/');
  in_flight_ = std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(options_.pool_size));
}

std::vector<double> RemoteScorer::post_batch(httplib::Client& client, std::span<const ScoreItem> items) const {
  const std::string body = encode_score_request(items);

  std::string last_failure;
  int backoff_ms = options_.initial_backoff_ms;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
    in_flight_->acquire();
    auto result = client.Post(path_, body, "application/json");
    in_flight_->release();

    if (!result) {
      last_failure = "transport failure: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status == 200) return decode_score_response(result->body, items.size());

    std::string detail = result->body;
    try {
      const auto parsed = io::Json::parse(result->body);
      if (parsed.is_object() && parsed.contains("error") && parsed["error"].is_string()) {
        detail = parsed["error"].get<std::string>();
      }
    } catch (const nlohmann::json::parse_error&) {
    }
    last_failure = "HTTP " + std::to_string(result->status) + ": " + detail;
    if (result->status < 500) throw ScorerError(describe() + " rejected request: " + last_failure, false);
  }
  throw ScorerError(describe() + " unavailable after " + std::to_string(options_.max_retries + 1) +
                        " attempts: " + last_failure,
                    true);
}

std::vector<double> RemoteScorer::score(const ScoreRequest& request) const {
  if (request.items.empty()) throw ScorerError("score request has no items", false);
  const std::span<const ScoreItem> items(request.items);
  const std::size_t n_batches = (items.size() + options_.batch_size - 1) / options_.batch_size;

  std::vector<std::vector<double>> results(n_batches);
  std::vector<std::exception_ptr> errors(n_batches);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    httplib::Client client(base_url_);
    client.set_keep_alive(true);
    client.set_tcp_nodelay(true);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);
    client.set_write_timeout(options_.timeout_seconds, 0);
    for (std::size_t b = next++; b < n_batches; b = next++) {
      const std::size_t start = b * options_.batch_size;
      try {
        results[b] = post_batch(client, items.subspan(start, std::min(options_.batch_size, items.size() - start)));
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t workers = std::min(options_.pool_size, n_batches);
    for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<double> scores;
  scores.reserve(items.size());
  for (auto& r : results) scores.insert(scores.end(), r.begin(), r.end());
  return scores;
}

// ---------------------------------------------------------------------------

namespace {

struct ParsedUri {
  std::string base;
  std::string path;
};

ParsedUri split_http_uri(std::string_view uri) {
  const auto scheme_end = uri.find("://");
  const auto path_start = uri.find('/', scheme_end + 3);
  ParsedUri out;
  out.base = std::string(uri.substr(0, path_start));
  out.path = path_start == std::string_view::npos ? "/score" : std::string(uri.substr(path_start));
  if (out.base.size() <= scheme_end + 3) throw Error("scorer URI has no host: " + std::string(uri));
  return out;
}

}  // namespace

std::unique_ptr<Scorer> make_scorer(std::string_view uri, const RemoteOptions& options) {
  if (uri == "lexical:" || uri == "lexical") return std::make_unique<LexicalScorer>();
  if (uri.starts_with("http://") || uri.starts_with("https://")) {
    auto parts = split_http_uri(uri);
    return std::make_unique<RemoteScorer>(std::move(parts.base), std::move(parts.path), options);
  }
  throw Error("unsupported scorer URI '" + std::string(uri) + "' (expected lexical: or http(s)://host/score)");
}

void install_score_endpoint(httplib::Server& server, const Scorer& scorer, std::size_t max_batch,
                            const std::string& path) {
  server.Post(path, [&scorer, max_batch](const httplib::Request& req, httplib::Response& res) {
    constexpr const char* kJson = "application/json";
    ScoreRequest request;
    try {
      request.items = decode_score_request(req.body);
    } catch (const ProtocolError& e) {
      res.status = 400;
      res.set_content(encode_error(e.what()), kJson);
      return;
    }
    if (request.items.size() > max_batch) {
      res.status = 413;
      res.set_content(encode_error("batch of " + std::to_string(request.items.size()) + " exceeds limit " +
                                   std::to_string(max_batch)),
                      kJson);
      return;
    }
    try {
      const auto scores = scorer.score(request);
      res.status = 200;
      res.set_content(encode_score_response(scores), kJson);
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(encode_error(e.what()), kJson);
    }
  });
}

}  // namespace tdm
