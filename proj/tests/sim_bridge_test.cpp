#include <gtest/gtest.h>

#include <httplib.h>
#include <json.hpp>

#include <functional>
#include <random>

#include "atcg/bridge.hpp"
#include "atcg/ingest.hpp"
#include "atcg/netgen.hpp"
#include "atcg/pnml.hpp"
#include "atcg/sim.hpp"
#include "support.hpp"

using namespace atcg;
using nlohmann::json;

namespace {

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

petri::PrTNet login_net() {
  return netgen::generate(ingest::parse_model_xml(test::read_file(test::fixture("login.xml"))));
}

std::shared_ptr<const petri::PrTNet> shared(petri::PrTNet net) {
  return std::make_shared<const petri::PrTNet>(std::move(net));
}

json body(const bridge::Response& r) { return json::parse(r.body); }

}  // namespace

TEST(SimStep, LoginFirstChoice) {
  sim::SimSession s(shared(login_net()));
  ASSERT_EQ(s.enabled().size(), 1u);
  EXPECT_EQ(s.label(s.enabled()[0]), "enterName(UID)");
  s = sim::sim_step(s, std::size_t{0});
  ASSERT_EQ(s.history().size(), 1u);
  EXPECT_EQ(s.history()[0].transition, "T1");
  EXPECT_EQ(s.history()[0].binding, (Binding{{"name", Atom::symbol("UID")}}));
}

TEST(SimStep, ResetUndoAndBadChoice) {
  auto net = shared(login_net());
  sim::SimSession s(net);
  const petri::Marking initial = s.current();
  s = sim::sim_step(s, std::size_t{0});
  s = sim::sim_step(s, std::size_t{0});
  s = sim::sim_step(s, sim::Undo{});
  EXPECT_EQ(s.history().size(), 1u);
  s = sim::sim_step(s, sim::Reset{});
  EXPECT_EQ(s.current(), initial);
  EXPECT_TRUE(s.history().empty());
  EXPECT_EQ(error_code([&] { sim::sim_step(s, std::size_t{7}); }), "bad-choice");
  // Undo on an empty history is a no-op.
  EXPECT_EQ(sim::sim_step(s, sim::Undo{}).current(), initial);
}

TEST(SimStep, FiringEverythingEmptiesTheEnabledList) {
  sim::SimSession s(shared(login_net()));
  for (int i = 0; i < 3; ++i) s.fire(0);
  EXPECT_TRUE(s.enabled().empty());
  EXPECT_EQ(s.history().size(), 3u);
}

TEST(SimProperty, HistoryReplayReproducesCurrent) {
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    auto net = shared(test::random_net(rng));
    sim::SimSession s(net);
    for (int step = 0; step < 12; ++step) {
      std::uniform_int_distribution<int> pick(0, 9);
      const int r = pick(rng);
      if (r == 0) {
        s.undo();
      } else if (r == 1) {
        s.reset();
      } else if (!s.enabled().empty()) {
        s.fire(std::uniform_int_distribution<std::size_t>(0, s.enabled().size() - 1)(rng));
      }
      petri::Marking m = petri::initial_marking(*net);
      for (const auto& f : s.history()) m = petri::fire(*net, m, f);
      ASSERT_EQ(m, s.current());
      EXPECT_EQ(s.enabled(), petri::enabled(*net, m));
    }
  }
}

TEST(Bridge, StateFireResetUndo) {
  bridge::Bridge b(login_net(), {});
  json state = body(b.handle("GET", "/state", {}, ""));
  ASSERT_EQ(state["enabled"].size(), 1u);
  EXPECT_EQ(state["enabled"][0]["label"], "enterName(UID)");
  EXPECT_EQ(state["marking"]["name"][0], "(UID)");

  for (int i = 0; i < 3; ++i) {
    auto r = b.handle("POST", "/fire", {}, R"({"index": 0})");
    ASSERT_EQ(r.status, 200) << r.body;
    state = body(r);
  }
  EXPECT_TRUE(state["enabled"].empty());
  EXPECT_EQ(state["history"].size(), 3u);

  state = body(b.handle("POST", "/undo", {}, ""));
  EXPECT_EQ(state["history"].size(), 2u);
  state = body(b.handle("POST", "/reset", {}, ""));
  EXPECT_TRUE(state["history"].empty());
  EXPECT_EQ(state["enabled"].size(), 1u);
}

TEST(Bridge, Errors) {
  bridge::Bridge b(login_net(), {});
  auto r = b.handle("POST", "/fire", {}, R"({"index": 9})");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(body(r)["error"], "bad-choice");
  EXPECT_EQ(b.handle("POST", "/fire", {}, "not json").status, 400);
  EXPECT_EQ(b.handle("POST", "/fire", {}, R"({"index": -1})").status, 400);
  EXPECT_EQ(b.handle("GET", "/nowhere", {}, "").status, 404);
  EXPECT_EQ(b.handle("GET", "/tree", {{"maxDepth", "x"}}, "").status, 400);
}

TEST(Bridge, SessionsAreIsolated) {
  bridge::Bridge b(login_net(), {});
  b.handle("POST", "/fire", {}, R"({"index": 0})", "alice");
  EXPECT_EQ(body(b.handle("GET", "/state", {}, "", "alice"))["history"].size(), 1u);
  EXPECT_EQ(body(b.handle("GET", "/state", {}, "", "bob"))["history"].size(), 0u);
}

TEST(Bridge, NetPayload) {
  petri::PrTNet net = login_net();
  bridge::Bridge b(net, {});
  json j = body(b.handle("GET", "/net", {}, ""));
  EXPECT_EQ(j["id"], "login");
  EXPECT_EQ(j["places"].size(), net.places.size());
  EXPECT_EQ(j["transitions"].size(), net.transitions.size());
  EXPECT_EQ(j["arcs"].size(), net.arcs.size());
  EXPECT_EQ(j["places"][0]["x"], 30);
  EXPECT_EQ(j["places"][0]["tokens"][0], "Default");
}

TEST(Bridge, TreeVerticesReplayToTheirMarking) {
  auto net = pnml::read_pnml(test::read_file(test::fixture("coffee-net.xml")));
  bridge::Bridge b(net, {});
  json tree = body(b.handle("GET", "/tree", {}, ""));
  std::size_t vertices = 0;
  std::function<void(const json&)> walk = [&](const json& v) {
    ++vertices;
    b.handle("POST", "/reset", {}, "", "replay");
    json state;
    for (const auto& index : v["replay"]) {
      state = body(b.handle("POST", "/fire", {}, json{{"index", index}}.dump(), "replay"));
    }
    if (!v["replay"].empty()) {
      EXPECT_EQ(state["marking"], v["marking"]);
      EXPECT_EQ(state["history"].size(), v["depth"].get<std::size_t>());
    }
    for (const auto& c : v["children"]) walk(c);
  };
  walk(tree["root"]);
  EXPECT_EQ(vertices, 12u);
  json shallow = body(b.handle("GET", "/tree", {{"maxDepth", "1"}}, ""));
  EXPECT_EQ(shallow["truncated"], true);
}

TEST(Bridge, TestsText) {
  bridge::Bridge b(login_net(), {});
  EXPECT_EQ(body(b.handle("GET", "/tests", {}, ""))["text"],
            "Model-Level Tests\n1. enterName(UID), enterPassword(PSWD), login(UID, PSWD)\n");
  const std::string all = body(b.handle("GET", "/tests", {{"all", "1"}}, ""))["text"];
  EXPECT_NE(all.find("3. "), std::string::npos);
}

TEST(Bridge, LiveServer) {
  bridge::Bridge b(login_net(), {});
  bridge::Server server(b);
  ASSERT_TRUE(server.start(0));
  httplib::Client client("127.0.0.1", server.port());
  httplib::Headers session{{"X-Session", "ui"}};
  auto state = client.Get("/state", session);
  ASSERT_TRUE(state);
  EXPECT_EQ(state->status, 200);
  EXPECT_EQ(state->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(json::parse(state->body)["enabled"].size(), 1u);
  for (int i = 0; i < 3; ++i) {
    auto r = client.Post("/fire", session, R"({"index":0})", "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200);
  }
  auto after = json::parse(client.Get("/state", session)->body);
  EXPECT_TRUE(after["enabled"].empty());
  EXPECT_EQ(after["history"].size(), 3u);
  auto tests = client.Get("/tests");
  ASSERT_TRUE(tests);
  EXPECT_NE(json::parse(tests->body)["text"].get<std::string>().find("login(UID, PSWD)"),
            std::string::npos);
  server.stop();
}
