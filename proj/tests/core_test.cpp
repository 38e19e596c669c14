#include "foon/core.hpp"

#include <gtest/gtest.h>

#include "foon/parse.hpp"
#include "support/fixtures.hpp"

namespace foon {
namespace {

using testing::Chain;
using testing::kIceUnitText;
using testing::object;
using testing::state;
using testing::unit;

FoonGraph ice_graph() {
  auto parsed = parse_foon_text(kIceUnitText);
  EXPECT_TRUE(parsed.ok());
  return build_graph(std::move(parsed.units));
}

TEST(Normalize, LowercasesTrimsAndCollapses) {
  EXPECT_EQ(normalize("  Drinking \t  Glass "), "drinking glass");
  EXPECT_EQ(normalize(""), "");
  EXPECT_EQ(normalize("   "), "");
  EXPECT_EQ(normalize(normalize(" A  b ")), normalize(" A  b "));
}

TEST(NodeKey, CaseAndWhitespaceDoNotMatter) {
  EXPECT_EQ(node_key(object("Drinking Glass", {state("empty")})),
            node_key(object("drinking  glass", {state("EMPTY")})));
}

TEST(NodeKey, StateOrderDoesNotMatter) {
  auto a = object("ice", {state("crushed"), state("frozen"), state("in", "bowl")});
  auto b = object("ice", {state("in", "bowl"), state("frozen"), state("crushed")});
  EXPECT_EQ(node_key(a), node_key(b));
}

TEST(NodeKey, ContainerDistinguishesNodes) {
  auto in_bowl = object("ice", {state("crushed"), state("frozen"), state("in", "bowl")});
  auto in_glass =
      object("ice", {state("crushed"), state("frozen"), state("in", "drinking glass")});
  EXPECT_NE(node_key(in_bowl), node_key(in_glass));
}

TEST(NodeKey, DelimitersInsideFieldsStayUnambiguous) {
  // Without escaping these two would serialize identically.
  auto a = object("a|b");
  auto b = object("a", {state("b")});
  EXPECT_NE(node_key(a), node_key(b));
  EXPECT_NE(node_key(object("x", {}, {"a,b"})), node_key(object("x", {}, {"a", "b"})));
  EXPECT_NE(node_key(object("x", {state("in", "a]")})), node_key(object("x", {state("in]", "a")})));
}

TEST(NodeKey, EmptyLabelIsInvalid) {
  try {
    node_key(object("   "));
    FAIL() << "expected invalid-node error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_node);
  }
}

TEST(BuildGraph, IceUnitHasSixDistinctNodes) {
  const auto g = ice_graph();
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.node_count(), 6u);
  EXPECT_EQ(g.unit(0).inputs.size(), 4u);
  EXPECT_EQ(g.unit(0).outputs.size(), 2u);
}

TEST(BuildGraph, EmptyInput) {
  const auto g = build_graph({});
  EXPECT_TRUE(g.empty());
  EXPECT_TRUE(g.producer_index().empty());
}

TEST(BuildGraph, StructuralDuplicatesCollapse) {
  Chain c;
  auto dup = c.u1;
  dup.unit_index = 7;
  dup.motion.success_rate = 0.2;  // rate is not part of structural identity
  const auto g = build_graph({c.u1, dup, c.u2});
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.unit(0).unit_index, 0u);
  EXPECT_EQ(g.unit(1).unit_index, 1u);
  EXPECT_EQ(g.unit(0).motion.success_rate, 1.0);
  EXPECT_EQ(g.unit(1).motion.label, "make g");
}

TEST(BuildGraph, InputOrderDoesNotAffectIdentity) {
  auto x = object("x"), y = object("y"), z = object("z");
  const auto g = build_graph({unit({x, y}, "mix", {z}), unit({y, x}, "Mix", {z})});
  EXPECT_EQ(g.size(), 1u);
}

TEST(BuildGraph, UnitWithoutOutputsCarriesItsIndex) {
  auto bad = unit({object("x")}, "mix", {}, 1.0, 4);
  try {
    build_graph({bad});
    FAIL() << "expected invalid-unit error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_unit);
    EXPECT_EQ(e.index(), 4u);
  }
  EXPECT_THROW(build_graph({unit({}, "mix", {object("x")})}), Error);
}

TEST(BuildGraph, RateOutOfRange) {
  try {
    build_graph({unit({object("x")}, "mix", {object("y")}, 1.5)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::range);
  }
}

TEST(BuildGraph, Idempotent) {
  Chain c;
  const auto again = build_graph({c.graph.units().begin(), c.graph.units().end()});
  EXPECT_EQ(again, c.graph);
}

TEST(Producers, IceGraph) {
  const auto g = ice_graph();
  auto glass_with_ice = object("drinking glas", {state("contains")}, {"ice"});
  auto found = producers(g, node_key(glass_with_ice));
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].get().unit_index, 0u);

  auto bucket = object("bucket", {state("contains")}, {"ice"});
  EXPECT_TRUE(producers(g, node_key(bucket)).empty());
}

TEST(Producers, AscendingUnitOrder) {
  auto g_node = object("g");
  const auto g = build_graph({unit({object("a")}, "one", {g_node}),
                              unit({object("b")}, "two", {object("c"), g_node})});
  auto found = producers(g, node_key(g_node));
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0].get().motion.label, "one");
  EXPECT_EQ(found[1].get().motion.label, "two");
  EXPECT_EQ(found[0].get().unit_index, 0u);
  EXPECT_EQ(found[1].get().unit_index, 1u);
}

TEST(Producers, UnitListingAnOutputTwiceAppearsOnce) {
  auto g_node = object("g");
  const auto g = build_graph({unit({object("a")}, "split", {g_node, g_node})});
  EXPECT_EQ(g.producer_indices(node_key(g_node)).size(), 1u);
}

TEST(Kitchen, SetSemantics) {
  auto ice = object("ice", {state("crushed")});
  Kitchen k({ice, object(" ICE ", {state("Crushed")})});
  EXPECT_EQ(k.size(), 1u);
  EXPECT_TRUE(k.contains(node_key(ice)));
}

TEST(Oracle, GoalInKitchen) {
  Chain c;
  EXPECT_TRUE(reachable_oracle(build_graph({}), c.kitchen, node_key(c.a)));
}

TEST(Oracle, TwoRoundChain) {
  Chain c;
  EXPECT_TRUE(reachable_oracle(c.graph, c.kitchen, node_key(c.g)));
  EXPECT_FALSE(reachable_oracle(c.graph, Kitchen{}, node_key(c.g)));
}

TEST(Oracle, NoProducersAndNotInKitchen) {
  Chain c;
  EXPECT_FALSE(reachable_oracle(c.graph, c.kitchen, node_key(object("nothing"))));
}

TEST(Oracle, CycleWithoutEntryIsUnreachable) {
  auto x = object("x"), y = object("y");
  const auto g = build_graph({unit({x}, "to y", {y}), unit({y}, "to x", {x})});
  EXPECT_FALSE(reachable_oracle(g, Kitchen{}, node_key(x)));
  EXPECT_TRUE(reachable_oracle(g, Kitchen({y}), node_key(x)));
}

TEST(ValidateTree, EmptyTree) {
  Chain c;
  EXPECT_TRUE(validate_tree(c.graph, c.kitchen, TaskTree{{}, node_key(c.a)}).ok());
  auto report = validate_tree(c.graph, c.kitchen, TaskTree{{}, node_key(c.g)});
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, Violation::Kind::goal_not_in_kitchen);
}

TEST(ValidateTree, ChainInOrder) {
  Chain c;
  TaskTree tree{{c.graph.unit(0), c.graph.unit(1)}, node_key(c.g)};
  EXPECT_TRUE(validate_tree(c.graph, c.kitchen, tree).ok());
}

TEST(ValidateTree, ChainReversed) {
  Chain c;
  TaskTree tree{{c.graph.unit(1), c.graph.unit(0)}, node_key(c.g)};
  const auto report = validate_tree(c.graph, c.kitchen, tree);
  ASSERT_FALSE(report.ok());
  const auto& first = report.violations.front();
  EXPECT_EQ(first.kind, Violation::Kind::unavailable_input);
  EXPECT_EQ(first.step, 0u);
  EXPECT_EQ(first.key, node_key(c.b));
  // The last step now produces b, not g.
  EXPECT_EQ(report.violations.back().kind, Violation::Kind::goal_not_produced);
}

TEST(ValidateTree, DuplicateAndForeignUnits) {
  Chain c;
  TaskTree dup{{c.graph.unit(0), c.graph.unit(0), c.graph.unit(1)}, node_key(c.g)};
  auto report = validate_tree(c.graph, c.kitchen, dup);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, Violation::Kind::duplicate_unit);
  EXPECT_EQ(report.violations[0].step, 1u);

  TaskTree foreign{{unit({c.a}, "teleport", {c.g})}, node_key(c.g)};
  report = validate_tree(c.graph, c.kitchen, foreign);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, Violation::Kind::unknown_unit);
}

}  // namespace
}  // namespace foon
