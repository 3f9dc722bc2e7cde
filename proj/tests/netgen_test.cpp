#include <gtest/gtest.h>

#include <functional>

#include "atcg/ingest.hpp"
#include "atcg/netgen.hpp"
#include "atcg/petri.hpp"
#include "support.hpp"

using namespace atcg;
using namespace atcg::netgen;
using model::DesignModel;

namespace {

DesignModel load(const std::string& name) {
  return ingest::parse_model_xml(test::read_file(test::fixture(name)));
}

std::vector<std::string> leaf_nodes(const CfVertex& v) {
  if (v.kind == CfKind::Leaf) return {v.node};
  std::vector<std::string> out;
  for (const auto& c : v.children) {
    auto sub = leaf_nodes(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::size_t count_silent(const petri::PrTNet& net) {
  return std::count_if(net.transitions.begin(), net.transitions.end(),
                       [](const petri::Transition& t) { return t.silent; });
}

std::vector<std::string> outgoing(const petri::PrTNet& net, const std::string& place) {
  std::vector<std::string> out;
  for (const auto& a : net.arcs) {
    if (a.source == place) out.push_back(a.target);
  }
  return out;
}

// Small one-class model built in code.
DesignModel tiny(std::vector<model::SeqElement> body, std::vector<model::OperationDef> ops) {
  DesignModel dm;
  dm.name = "tiny";
  dm.classes.classes.push_back({"svc", {}, std::move(ops)});
  dm.sequence.name = "tiny";
  dm.sequence.lifelines = {{"c", "Client", "svc"}, {"s", "svc", "svc"}};
  dm.sequence.body = std::move(body);
  return dm;
}

model::SeqElement msg(std::string id, std::string op, std::vector<Atom> args = {}) {
  return {model::Message{std::move(id), "c", "s", std::move(op), std::move(args)}};
}

}  // namespace

TEST(BuildNodes, Login) {
  DesignModel dm = load("login.xml");
  auto nodes = build_nodes(dm.sequence, dm.classes);
  ASSERT_EQ(nodes.size(), 3u);
  EXPECT_EQ(nodes[0].operation, "enterName");
  EXPECT_EQ(nodes[1].operation, "enterPassword");
  EXPECT_EQ(nodes[2].operation, "login");
  // Worked by hand: each argument goes to the place named after the
  // receiving parameter.
  std::vector<std::pair<std::string, Token>> want = {{"name", {Atom::symbol("UID")}},
                                                     {"password", {Atom::symbol("PSWD")}}};
  EXPECT_EQ(nodes[2].tokens, want);
  EXPECT_EQ(nodes[2].params, (std::vector<std::string>{"name", "password"}));
  EXPECT_EQ(nodes[2].post, "loggedIn = true");
}

TEST(BuildNodes, IdsAreDistinctAndInTraversalOrder) {
  DesignModel dm = load("login.xml");
  auto nodes = build_nodes(dm.sequence, dm.classes);
  for (std::size_t k = 1; k <= nodes.size(); ++k) {
    const Node& n = nodes[k - 1];
    EXPECT_EQ(n.id, "N" + std::to_string(k));
    EXPECT_EQ(n.transition, "T" + std::to_string(k));
    EXPECT_EQ(n.in_place, "P" + std::to_string(2 * k - 1));
    EXPECT_EQ(n.out_place, "P" + std::to_string(2 * k));
    EXPECT_EQ(n.in_arc, "A" + std::to_string(2 * k - 1));
    EXPECT_EQ(n.out_arc, "A" + std::to_string(2 * k));
    std::set<std::string> six = {n.in_place, n.out_place, n.transition, n.in_arc, n.out_arc, n.id};
    EXPECT_EQ(six.size(), 6u);
  }
}

TEST(BuildNodes, SingleMessageWithoutArguments) {
  DesignModel dm = tiny({msg("m1", "ping")}, {{"ping", {}, std::nullopt, std::nullopt}});
  auto nodes = build_nodes(dm.sequence, dm.classes);
  ASSERT_EQ(nodes.size(), 1u);
  EXPECT_TRUE(nodes[0].tokens.empty());
}

TEST(BuildNrt, LoginIsAChain) {
  DesignModel dm = load("login.xml");
  auto nodes = build_nodes(dm.sequence, dm.classes);
  NRT nrt = build_nrt(nodes, dm.classes, dm.sequence);
  ASSERT_EQ(nrt.rows.size(), 3u);
  EXPECT_TRUE(nrt.row("N1")->predecessors.empty());
  EXPECT_EQ(nrt.row("N1")->successors, (std::vector<Link>{{"N2", Relation::Sequence}}));
  EXPECT_EQ(nrt.row("N2")->predecessors, (std::vector<Link>{{"N1", Relation::Sequence}}));
  EXPECT_EQ(nrt.row("N2")->successors, (std::vector<Link>{{"N3", Relation::Sequence}}));
  EXPECT_EQ(nrt.row("N3")->predecessors, (std::vector<Link>{{"N2", Relation::Sequence}}));
  EXPECT_TRUE(nrt.row("N3")->successors.empty());
  for (const auto& row : nrt.rows) {
    for (const auto& l : row.successors) EXPECT_EQ(l.relation, Relation::Sequence);
  }
}

TEST(BuildNrt, SingleMessage) {
  DesignModel dm = tiny({msg("m1", "ping")}, {{"ping", {}, std::nullopt, std::nullopt}});
  NRT nrt = build_nrt(build_nodes(dm.sequence, dm.classes), dm.classes, dm.sequence);
  ASSERT_EQ(nrt.rows.size(), 1u);
  EXPECT_TRUE(nrt.rows[0].predecessors.empty());
  EXPECT_TRUE(nrt.rows[0].successors.empty());
}

TEST(BuildNrt, AltEntryLinks) {
  DesignModel dm = load("alt.xml");
  auto nodes = build_nodes(dm.sequence, dm.classes);
  NRT nrt = build_nrt(nodes, dm.classes, dm.sequence);
  EXPECT_EQ(nrt.row("N1")->successors,
            (std::vector<Link>{{"N2", Relation::FragmentEntry}, {"N3", Relation::FragmentEntry}}));
  EXPECT_TRUE(nrt.has_link("N1", "N2", Relation::FragmentEntry));
  EXPECT_FALSE(nrt.has_link("N2", "N3", Relation::Sequence));
}

TEST(BuildNrt, FragmentExitLinks) {
  DesignModel dm = load("loop.xml");
  NRT nrt = build_nrt(build_nodes(dm.sequence, dm.classes), dm.classes, dm.sequence);
  EXPECT_TRUE(nrt.has_link("N1", "N2", Relation::FragmentEntry));
  EXPECT_TRUE(nrt.has_link("N2", "N3", Relation::FragmentExit));
}

TEST(BuildNrt, LinksAreSymmetricAndSequenceIsAcyclic) {
  for (const char* f : {"login.xml", "alt.xml", "par.xml", "loop.xml", "opt_break.xml"}) {
    DesignModel dm = load(f);
    NRT nrt = build_nrt(build_nodes(dm.sequence, dm.classes), dm.classes, dm.sequence);
    for (const auto& row : nrt.rows) {
      for (const auto& s : row.successors) {
        const auto& back = nrt.row(s.node)->predecessors;
        EXPECT_NE(std::find(back.begin(), back.end(), Link{row.node, s.relation}), back.end()) << f;
      }
      for (const auto& p : row.predecessors) {
        const auto& fwd = nrt.row(p.node)->successors;
        EXPECT_NE(std::find(fwd.begin(), fwd.end(), Link{row.node, p.relation}), fwd.end()) << f;
      }
    }
    // Sequence links only ever point forward in node order.
    for (const auto& row : nrt.rows) {
      for (const auto& s : row.successors) {
        if (s.relation == Relation::Sequence) EXPECT_TRUE(petri::natural_less(row.node, s.node));
      }
    }
  }
}

TEST(BuildNrt, AssociationEdges) {
  DesignModel dm = load("opt_break.xml");
  auto nodes = build_nodes(dm.sequence, dm.classes);
  NRT nrt = build_nrt(nodes, dm.classes, dm.sequence);
  // m4 (user->cart) hands control to m5 (cart->bank): the cart receives m4
  // and sends m5.
  auto has = [&](const char* a, const char* b) {
    return std::find(nrt.association_edges.begin(), nrt.association_edges.end(),
                     std::make_pair(std::string(a), std::string(b))) != nrt.association_edges.end();
  };
  EXPECT_TRUE(has("N4", "N5"));
}

TEST(BuildCfn, LoginIsFlat) {
  DesignModel dm = load("login.xml");
  auto nodes = build_nodes(dm.sequence, dm.classes);
  CfVertex root = build_cfn(dm.sequence, nodes, build_nrt(nodes, dm.classes, dm.sequence));
  EXPECT_EQ(root.kind, CfKind::Seq);
  ASSERT_EQ(root.children.size(), 3u);
  for (const auto& c : root.children) EXPECT_EQ(c.kind, CfKind::Leaf);
  EXPECT_EQ(leaf_nodes(root), (std::vector<std::string>{"N1", "N2", "N3"}));
}

TEST(BuildCfn, AltStructure) {
  DesignModel dm = load("alt.xml");
  auto nodes = build_nodes(dm.sequence, dm.classes);
  CfVertex root = build_cfn(dm.sequence, nodes, build_nrt(nodes, dm.classes, dm.sequence));
  ASSERT_EQ(root.children.size(), 2u);
  EXPECT_EQ(root.children[0].kind, CfKind::Leaf);
  const CfVertex& alt = root.children[1];
  EXPECT_EQ(alt.kind, CfKind::Fragment);
  EXPECT_EQ(alt.op, model::FragmentOperator::Alt);
  ASSERT_EQ(alt.children.size(), 2u);
  EXPECT_EQ(alt.children[0].kind, CfKind::Operand);
  EXPECT_TRUE(alt.children[0].guard.has_value());
  EXPECT_FALSE(alt.children[1].guard.has_value());
  EXPECT_EQ(leaf_nodes(alt.children[0]), std::vector<std::string>{"N2"});
  EXPECT_EQ(leaf_nodes(alt.children[1]), std::vector<std::string>{"N3"});
}

TEST(BuildCfn, NestedLoopInsideAlt) {
  model::CombinedFragment loop{"inner", model::FragmentOperator::Loop, {}, std::nullopt, 2};
  loop.operands.push_back({std::nullopt, {msg("m2", "ping")}});
  model::CombinedFragment alt{"outer", model::FragmentOperator::Alt, {}, std::nullopt, std::nullopt};
  alt.operands.push_back({ingest::parse_expr("n > 0"), {{loop}}});
  alt.operands.push_back({std::nullopt, {msg("m3", "ping")}});
  DesignModel dm = tiny({msg("m1", "setN", {Atom::integer(1)}), {alt}},
                        {{"setN", {{"n", ""}}, std::nullopt, std::nullopt},
                         {"ping", {}, std::nullopt, std::nullopt}});
  ASSERT_TRUE(model::validate_model(dm.classes, dm.sequence).ok());
  auto nodes = build_nodes(dm.sequence, dm.classes);
  CfVertex root = build_cfn(dm.sequence, nodes, build_nrt(nodes, dm.classes, dm.sequence));
  const CfVertex& a = root.children[1];
  ASSERT_EQ(a.op, model::FragmentOperator::Alt);
  const CfVertex& l = a.children[0].children[0];
  EXPECT_EQ(l.kind, CfKind::Fragment);
  EXPECT_EQ(l.op, model::FragmentOperator::Loop);
  EXPECT_EQ(l.loop_max, 2);
  EXPECT_EQ(leaf_nodes(l), std::vector<std::string>{"N2"});
  // Leaf order follows message order.
  EXPECT_EQ(leaf_nodes(root), (std::vector<std::string>{"N1", "N2", "N3"}));
  EXPECT_NO_THROW(generate(dm));
}

TEST(AssembleNet, LoginDataPlacesAndTransitions) {
  petri::PrTNet net = generate(load("login.xml"));
  EXPECT_EQ(net.id, "login");
  ASSERT_NE(net.find_place("name"), nullptr);
  ASSERT_NE(net.find_place("password"), nullptr);
  petri::Marking m0 = petri::initial_marking(net);
  EXPECT_EQ(m0.count("name", {Atom::symbol("UID")}), 1u);
  EXPECT_EQ(m0.count("password", {Atom::symbol("PSWD")}), 1u);
  ASSERT_EQ(net.transitions.size(), 3u);
  EXPECT_EQ(net.transitions[0].name, "enterName");
  EXPECT_EQ(net.transitions[1].name, "enterPassword");
  EXPECT_EQ(net.transitions[2].name, "login");
  EXPECT_EQ(count_silent(net), 0u);
  // One Default control token in the first control place.
  EXPECT_EQ(m0.count("P1", Token{}), 1u);
  EXPECT_EQ(m0.total(), 3u);
}

TEST(AssembleNet, PreconditionBecomesGuard) {
  DesignModel dm = tiny({msg("m1", "take", {Atom::integer(5)})},
                        {{"take", {{"x", ""}}, ingest::parse_expr("x > 0"), std::nullopt}});
  petri::PrTNet net = generate(dm);
  ASSERT_EQ(net.transitions.size(), 1u);
  ASSERT_TRUE(net.transitions[0].guard);
  EXPECT_EQ(*net.transitions[0].guard,
            Expr::compare(CompareOp::Gt, Expr::var("x"), Expr::lit(Atom::integer(0))));
  auto ins = net.input_arcs("T1");
  bool inscribes_x = false;
  for (const auto* a : ins) inscribes_x = inscribes_x || petri::inscription_variables(a->inscription).count("x");
  EXPECT_TRUE(inscribes_x);
}

TEST(AssembleNet, AttributePreconditionIsNotAGuard) {
  DesignModel dm = tiny({msg("m1", "take", {Atom::integer(5)})},
                        {{"take", {{"x", ""}}, ingest::parse_expr("x > limit"), std::nullopt}});
  dm.classes.classes[0].attributes.push_back({"limit", "Integer"});
  ASSERT_TRUE(model::validate_model(dm.classes, dm.sequence).ok());
  petri::PrTNet net = generate(dm);
  EXPECT_FALSE(net.transitions[0].guard.has_value());
}

TEST(AssembleNet, AltEntryHasTwoOutgoingTransitions) {
  petri::PrTNet net = generate(load("alt.xml"));
  // The entry place of the alt is the place setX (T1) leads into.
  std::string entry;
  for (const auto& a : net.arcs) {
    if (a.source == "T1" && a.inscription.empty()) entry = a.target;
  }
  ASSERT_FALSE(entry.empty());
  auto out = outgoing(net, entry);
  EXPECT_EQ(out.size(), 2u);
  for (const auto& t : out) EXPECT_NE(net.find_transition(t), nullptr);
}

TEST(AssembleNet, TransitionCountFollowsTheMappingTable) {
  // Silent transitions per fragment, counted by hand from the table:
  //   alt.xml   guarded operand whose first message cannot read x: 1 tau,
  //             else operand gets the negated guard, also unreadable: 1 tau
  //   par.xml   fork + join
  //   loop.xml  tau-back + tau-exit
  //   opt_break opt: skip tau + guard tau (applyCoupon reads coupon, so the
  //             guard lands on it: 0) ; break: skip tau + guard tau
  struct Case {
    const char* file;
    std::size_t messages;
    std::size_t silent;
  };
  for (const Case& c : {Case{"login.xml", 3, 0}, Case{"alt.xml", 3, 2}, Case{"par.xml", 2, 2},
                        Case{"loop.xml", 3, 2}, Case{"opt_break.xml", 5, 3}}) {
    petri::PrTNet net = generate(load(c.file));
    EXPECT_EQ(net.transitions.size() - count_silent(net), c.messages) << c.file;
    EXPECT_EQ(count_silent(net), c.silent) << c.file;
    for (const auto& t : net.transitions) {
      if (t.silent) EXPECT_EQ(t.name.rfind("tau_", 0), 0u) << t.name;
    }
  }
}

TEST(AssembleNet, LoopUnrollSeedsBudgetTokens) {
  DesignModel dm = load("loop.xml");
  Options opts;
  opts.loop_unroll = 4;
  petri::PrTNet net = generate(dm, opts);
  ASSERT_NE(net.find_place("budget_f1"), nullptr);
  EXPECT_EQ(petri::initial_marking(net).count("budget_f1"), 4u);
  // Without the option the loop's own loopMax (3) allows 2 extra rounds.
  EXPECT_EQ(petri::initial_marking(generate(dm)).count("budget_f1"), 2u);
}

TEST(AssembleNet, FixturesCompileAndAreDeterministic) {
  for (const char* f : {"login.xml", "alt.xml", "par.xml", "loop.xml", "opt_break.xml"}) {
    DesignModel dm = load(f);
    petri::PrTNet a = generate(dm);
    petri::PrTNet b = generate(load(f));
    EXPECT_EQ(a, b) << f;
    ValidationReport r = petri::compile_net(a);
    EXPECT_TRUE(r.ok()) << f << "\n" << r.to_string();
  }
}

TEST(AssembleNet, InvalidModelIsRejected) {
  DesignModel dm = load("login.xml");
  dm.sequence.body.clear();
  try {
    generate(dm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "invalid-model");
  }
}

TEST(AssembleNet, UnboundGuardVariable) {
  DesignModel dm = load("alt.xml");
  auto nodes = build_nodes(dm.sequence, dm.classes);
  NRT nrt = build_nrt(nodes, dm.classes, dm.sequence);
  CfVertex root = build_cfn(dm.sequence, nodes, nrt);
  root.children[1].children[0].guard = ingest::parse_expr("nowhere > 0");
  try {
    assemble_net(nodes, nrt, root, "alt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "unbound-guard-variable");
  }
}
