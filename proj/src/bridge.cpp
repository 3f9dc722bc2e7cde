#include "atcg/bridge.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <thread>

#include "atcg/error.hpp"
#include "atcg/testgen.hpp"

namespace atcg::bridge {

using nlohmann::json;

namespace {

json binding_json(const Binding& b) {
  json out = json::object();
  for (const auto& [var, value] : b) out[var] = value.to_string();
  return out;
}

json marking_json(const petri::Marking& m) {
  json out = json::object();
  for (const auto& [place, tokens] : m.places()) {
    json list = json::array();
    for (const auto& t : tokens) list.push_back(token_to_string(t));
    out[place] = list;
  }
  return out;
}

Response error(int status, const std::string& code, const std::string& message) {
  return {status, json{{"error", code}, {"message", message}}.dump()};
}

std::optional<std::size_t> number(const std::map<std::string, std::string>& q,
                                  const std::string& key) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return std::nullopt;
  std::size_t pos = 0;
  unsigned long v = std::stoul(it->second, &pos);
  if (pos != it->second.size()) throw std::invalid_argument(key);
  return v;
}

bool flag(const std::map<std::string, std::string>& q, const std::string& key) {
  auto it = q.find(key);
  return it != q.end() && (it->second == "1" || it->second == "true" || it->second.empty());
}

}  // namespace

Bridge::Bridge(petri::PrTNet net, petri::Bounds bounds)
    : net_(std::make_shared<const petri::PrTNet>(std::move(net))), bounds_(bounds) {}

sim::SimSession& Bridge::session(const std::string& id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) it = sessions_.emplace(id, sim::SimSession(net_)).first;
  return it->second;
}

Response Bridge::state_of(const sim::SimSession& s) const {
  json enabled = json::array();
  for (std::size_t i = 0; i < s.enabled().size(); ++i) {
    const auto& f = s.enabled()[i];
    const auto* t = net_->find_transition(f.transition);
    enabled.push_back({{"index", i},
                       {"transition", f.transition},
                       {"name", t ? t->name : f.transition},
                       {"silent", t && t->silent},
                       {"binding", binding_json(f.binding)},
                       {"label", s.label(f)}});
  }
  json history = json::array();
  for (const auto& f : s.history()) {
    history.push_back({{"transition", f.transition},
                       {"binding", binding_json(f.binding)},
                       {"label", s.label(f)}});
  }
  return {200, json{{"marking", marking_json(s.current())},
                    {"enabled", enabled},
                    {"history", history}}
                   .dump()};
}

Response Bridge::handle(const std::string& method, const std::string& path,
                        const std::map<std::string, std::string>& query, const std::string& body,
                        const std::string& session_id) {
  try {
    if (method == "GET" && path == "/net") {
      json places = json::array(), transitions = json::array(), arcs = json::array();
      petri::Marking m0 = petri::initial_marking(*net_);
      for (const auto& p : net_->places) {
        json tokens = json::array();
        if (const auto* toks = m0.tokens(p.id)) {
          for (const auto& t : *toks) tokens.push_back(token_to_string(t));
        }
        places.push_back({{"id", p.id}, {"name", p.name}, {"capacity", p.capacity},
                          {"x", p.position.x}, {"y", p.position.y}, {"tokens", tokens}});
      }
      for (const auto& t : net_->transitions) {
        transitions.push_back({{"id", t.id}, {"name", t.name},
                               {"guard", t.guard ? print_expr(*t.guard) : ""},
                               {"silent", t.silent}, {"x", t.position.x}, {"y", t.position.y}});
      }
      for (const auto& a : net_->arcs) {
        arcs.push_back({{"id", a.id}, {"source", a.source}, {"target", a.target},
                        {"inscription", petri::inscription_to_string(a.inscription)}});
      }
      return {200, json{{"id", net_->id}, {"places", places}, {"transitions", transitions},
                        {"arcs", arcs}}
                       .dump()};
    }
    if (method == "GET" && path == "/tree") {
      petri::Bounds b = bounds_;
      if (auto d = number(query, "maxDepth")) b.max_depth = *d;
      petri::TestTree tree = petri::test_tree(*net_, b);
      // `replay` lists the enabled-list indices that lead from the initial
      // marking to the vertex, so a client can reset and POST /fire each.
      std::function<json(std::size_t, json)> vertex = [&](std::size_t v, json replay) {
        const auto& tv = tree.vertices[v];
        if (tv.firing) {
          const auto options = petri::enabled(*net_, tree.vertices[tv.parent].marking);
          auto it = std::find(options.begin(), options.end(), *tv.firing);
          replay.push_back(static_cast<std::size_t>(it - options.begin()));
        }
        json j{{"state", "m" + std::to_string(tv.state)},
               {"marking", marking_json(tv.marking)},
               {"kind", petri::to_string(tv.kind)},
               {"depth", tv.depth},
               {"replay", replay}};
        if (tv.firing) {
          j["transition"] = tv.firing->transition;
          j["binding"] = binding_json(tv.firing->binding);
          j["label"] = testgen::format_call(testgen::record_firing(*net_, *tv.firing));
        }
        json children = json::array();
        for (std::size_t c : tv.children) children.push_back(vertex(c, replay));
        j["children"] = children;
        return j;
      };
      return {200, json{{"root", vertex(0, json::array())}, {"truncated", tree.truncated}}.dump()};
    }
    if (method == "GET" && path == "/tests") {
      petri::TestTree tree = petri::test_tree(*net_, bounds_);
      auto suite = testgen::scenarios(*net_, tree);
      return {200, json{{"text", testgen::format_model_tests(suite, !flag(query, "all"))},
                        {"truncated", tree.truncated}}
                       .dump()};
    }

    std::lock_guard lock(mu_);
    sim::SimSession& s = session(session_id);
    if (method == "GET" && path == "/state") return state_of(s);
    if (method == "POST" && path == "/fire") {
      json req = json::parse(body.empty() ? "{}" : body);
      if (!req.contains("index") || !req["index"].is_number_unsigned()) {
        return error(400, "bad-request", "body must be {\"index\": <non-negative integer>}");
      }
      s.fire(req["index"].get<std::size_t>());
      return state_of(s);
    }
    if (method == "POST" && path == "/reset") {
      s.reset();
      return state_of(s);
    }
    if (method == "POST" && path == "/undo") {
      s.undo();
      return state_of(s);
    }
    return error(404, "not-found", method + " " + path);
  } catch (const Error& e) {
    return error(e.code() == "bad-choice" ? 400 : 500, e.code(), e.what());
  } catch (const json::exception& e) {
    return error(400, "bad-request", e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, "bad-request", e.what());
  } catch (const std::out_of_range& e) {
    return error(400, "bad-request", e.what());
  }
}

struct Server::Impl {
  httplib::Server http;
  std::thread worker;
  int port = 0;
};

Server::Server(Bridge& bridge) : impl_(std::make_unique<Impl>()) {
  auto adapt = [&bridge](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query[k] = v;
    std::string session = req.get_header_value("X-Session");
    if (session.empty()) session = req.remote_addr;
    Response r = bridge.handle(req.method, req.path, query, req.body, session);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, "application/json");
  };
  auto& http = impl_->http;
  for (const char* path : {"/net", "/state", "/tree", "/tests"}) http.Get(path, adapt);
  for (const char* path : {"/fire", "/reset", "/undo"}) http.Post(path, adapt);
  http.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, X-Session");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
  });
}

Server::~Server() { stop(); }

bool Server::start(int port) {
  if (port == 0) {
    impl_->port = impl_->http.bind_to_any_port("127.0.0.1");
    if (impl_->port < 0) return false;
  } else {
    if (!impl_->http.bind_to_port("127.0.0.1", port)) return false;
    impl_->port = port;
  }
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return true;
}

int Server::port() const { return impl_->port; }

void Server::wait() {
  if (impl_->worker.joinable()) impl_->worker.join();
}

void Server::stop() {
  impl_->http.stop();
  wait();
}

bool serve(Bridge& bridge, int port) {
  Server server(bridge);
  if (!server.start(port)) return false;
  server.wait();
  return true;
}

}  // namespace atcg::bridge
