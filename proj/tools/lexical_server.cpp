// Serves the lexical baseline over the /score wire protocol. Handy for
// exercising the remote-scorer path without a trained model.

#include <CLI11.hpp>
#include <httplib.h>

#include <iostream>

#include "tdm/remote_scorer.hpp"
#include "tdm/scorer.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lexical /score server"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_batch = 1024;
  app.add_option("--host", host);
  app.add_option("--port", port);
  app.add_option("--max-batch", max_batch);
  CLI11_PARSE(app, argc, argv);

  tdm::LexicalScorer scorer;
  httplib::Server server;
  server.set_tcp_nodelay(true);
  tdm::install_score_endpoint(server, scorer, max_batch);
  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}
