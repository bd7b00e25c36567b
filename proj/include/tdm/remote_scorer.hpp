#pragma once

#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdm/scorer.hpp"

namespace httplib {
class Client;
class Server;
}

namespace tdm {

// Wire format of the /score endpoint. Bodies are UTF-8 JSON:
//   request  {"items":[{"premise":"...","hypothesis":"..."}]}
//   response {"scores":[0.93, ...]}          (status 200)
//   error    {"error":"..."}                 (status 4xx/5xx)

std::string encode_score_request(std::span<const ScoreItem> items);
std::vector<ScoreItem> decode_score_request(std::string_view body);
std::string encode_score_response(std::span<const double> scores);
/// Throws ProtocolError unless the body holds exactly `expected` scores in [0,1].
std::vector<double> decode_score_response(std::string_view body, std::size_t expected);
std::string encode_error(std::string_view message);

/// Client for a remote /score service. Batches are fanned out over at most
/// `pool_size` connections; each connection sends its requests serially.
class RemoteScorer final : public Scorer {
 public:
  /// `base_url` is scheme://host[:port]; `path` is the endpoint path.
  RemoteScorer(std::string base_url, std::string path, RemoteOptions options = {});

  std::vector<double> score(const ScoreRequest& request) const override;
  std::string describe() const override { return base_url_ + path_; }

 private:
  std::vector<double> post_batch(httplib::Client& client, std::span<const ScoreItem> items) const;

  std::string base_url_;
  std::string path_;
  RemoteOptions options_;
  mutable std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

/// Serves `scorer` at POST `path` on `server`. Batches larger than
/// `max_batch` get 413; undecodable bodies get 400.
void install_score_endpoint(httplib::Server& server, const Scorer& scorer, std::size_t max_batch = 1024,
                            const std::string& path = "/score");

}  // namespace tdm
