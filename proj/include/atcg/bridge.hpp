#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "atcg/net.hpp"
#include "atcg/petri.hpp"
#include "atcg/sim.hpp"

namespace atcg::bridge {

struct Response {
  int status = 200;
  std::string body;  // JSON
};

// JSON endpoints backing the browser panel:
//   GET  /net             places, transitions, arcs, positions
//   GET  /state           marking, enabled list, history
//   POST /fire {index}    fire one enabled entry
//   POST /undo, /reset
//   GET  /tree?maxDepth=  test tree as nested vertices, each with its replay path
//   GET  /tests?all=      formatted model-level tests
// Each session id gets its own simulation; the net is shared read-only.
class Bridge {
 public:
  Bridge(petri::PrTNet net, petri::Bounds bounds);

  Response handle(const std::string& method, const std::string& path,
                  const std::map<std::string, std::string>& query, const std::string& body,
                  const std::string& session = "default");

 private:
  Response state_of(const sim::SimSession& s) const;
  sim::SimSession& session(const std::string& id);

  std::shared_ptr<const petri::PrTNet> net_;
  petri::Bounds bounds_;
  std::mutex mu_;
  std::map<std::string, sim::SimSession> sessions_;
};

// Runs the bridge on 127.0.0.1 from a background thread until stop().
class Server {
 public:
  explicit Server(Bridge& bridge);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Port 0 picks a free port. Returns false if the socket cannot be bound.
  bool start(int port);
  int port() const;
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Blocks serving `bridge` on 127.0.0.1:port. Returns false if the socket
// could not be bound.
bool serve(Bridge& bridge, int port);

}  // namespace atcg::bridge
