#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "amr/error.h"
#include "amr/linearize.h"
#include "amr/penman.h"
#include "support/random_graphs.h"

namespace amr {
namespace {

SimplifiedGraph Leaf(std::string c) { return {std::move(c), {}}; }

SimplifiedGraph WantBoyGirl() {
  return {"want", {{":ARG0", Leaf("boy")}, {":ARG1", Leaf("girl")}}};
}

std::size_t MultiChildNodes(const SimplifiedGraph &t) {
  std::size_t n = t.children.size() >= 2 ? 1 : 0;
  for (const SimplifiedEdge &e : t.children) n += MultiChildNodes(e.child);
  return n;
}

std::size_t Parens(const Tokens &tokens) {
  return static_cast<std::size_t>(std::count_if(
      tokens.begin(), tokens.end(),
      [](const std::string &t) { return t == "(" || t == ")"; }));
}

std::multiset<std::string> Content(const Tokens &tokens) {
  std::multiset<std::string> out;
  for (const std::string &t : tokens) {
    if (t != "(" && t != ")") out.insert(t);
  }
  return out;
}

TEST(LinearizeTest, SingleNode) {
  EXPECT_EQ(Linearize(Leaf("want"), LinearizationOrder::Human()),
            Tokens{"want"});
}

TEST(LinearizeTest, TwoChildrenAreScoped) {
  EXPECT_EQ(Linearize(WantBoyGirl(), LinearizationOrder::Human()),
            (Tokens{"(", "want", ":ARG0", "boy", ":ARG1", "girl", ")"}));
}

TEST(LinearizeTest, ScopeWrapsChildNodeAfterLabel) {
  SimplifiedGraph t = {"say", {{":ARG0", WantBoyGirl()}}};
  EXPECT_EQ(Linearize(t, LinearizationOrder::Human()),
            (Tokens{"say", ":ARG0", "(", "want", ":ARG0", "boy", ":ARG1",
                    "girl", ")"}));
  EXPECT_EQ(Linearize(t, LinearizationOrder::Human(),
                      {.scope = ScopeMarkers::kNonLeaf}),
            (Tokens{"say", ":ARG0", "(", "want", ":ARG0", "boy", ":ARG1",
                    "girl", ")"}));
  EXPECT_EQ(Linearize(t, LinearizationOrder::Human(),
                      {.scope = ScopeMarkers::kNone}),
            (Tokens{"say", ":ARG0", "want", ":ARG0", "boy", ":ARG1", "girl"}));
}

TEST(LinearizeTest, MeetFragmentVisitOrder) {
  SimplifiedGraph g = SimplifyGraph(
      ParsePenman("(m / meet-03 :ARG0 (p / person :ARG1-of (e / expert-01 "
                  ":ARG2-of (g / group))))"),
      SimplifyMode::kGeneration);
  EXPECT_EQ(Linearize(g, LinearizationOrder::Human()),
            (Tokens{"meet", ":ARG0", "person", ":ARG1-of", "expert",
                    ":ARG2-of", "group"}));
}

TEST(LinearizeTest, GlobalOrderSortsChildrenStably) {
  SimplifiedGraph t = {"a",
                       {{":mod", Leaf("x")},
                        {":ARG0", Leaf("y")},
                        {":mod", Leaf("z")},
                        {":time", Leaf("w")}}};
  LinearizationOrder order =
      LinearizationOrder::GlobalRandom({":time", ":mod", ":ARG0"});
  EXPECT_EQ(Linearize(t, order),
            (Tokens{"(", "a", ":time", "w", ":mod", "x", ":mod", "z",
                    ":ARG0", "y", ")"}));
  // Labels outside the ranking go last in authored order.
  LinearizationOrder partial = LinearizationOrder::GlobalRandom({":ARG0"});
  EXPECT_EQ(Linearize(t, partial),
            (Tokens{"(", "a", ":ARG0", "y", ":mod", "x", ":mod", "z",
                    ":time", "w", ")"}));
}

TEST(GlobalOrderTest, SingleLabelAndEmpty) {
  EXPECT_EQ(MakeGlobalOrder({":ARG0"}, 99).ranking(),
            std::vector<std::string>{":ARG0"});
  try {
    MakeGlobalOrder({}, 1);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInventory);
  }
}

TEST(GlobalOrderTest, DeterministicAndSeedSensitive) {
  const std::vector<std::string> inventory = {":ARG0", ":ARG1", ":ARG2",
                                              ":mod", ":time"};
  EXPECT_EQ(MakeGlobalOrder(inventory, 3).ranking(),
            MakeGlobalOrder(inventory, 3).ranking());
  // Duplicates and input order do not matter.
  std::vector<std::string> shuffled = {":time", ":mod", ":ARG2", ":ARG0",
                                       ":ARG1", ":ARG0"};
  EXPECT_EQ(MakeGlobalOrder(shuffled, 3).ranking(),
            MakeGlobalOrder(inventory, 3).ranking());

  // Two seeds agree with probability 1/120; count agreeing pairs among
  // seeds 0..99 (4950 pairs, about 41 expected).
  std::vector<std::vector<std::string>> perms;
  for (std::uint64_t s = 0; s < 100; ++s) {
    perms.push_back(MakeGlobalOrder(inventory, s).ranking());
  }
  int same = 0, pairs = 0;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    for (std::size_t j = i + 1; j < perms.size(); ++j) {
      ++pairs;
      same += perms[i] == perms[j];
    }
  }
  double differ = 1.0 - static_cast<double>(same) / pairs;
  EXPECT_NEAR(differ, 119.0 / 120.0, 0.01);
  std::set<std::vector<std::string>> distinct(perms.begin(), perms.end());
  EXPECT_GT(distinct.size(), 50u);
}

TEST(RandomOrderTest, ReproduciblePerExample) {
  Rng rng(5);
  LinearizationOrder order = LinearizationOrder::Random(42);
  int differs_by_id = 0;
  for (int i = 0; i < 200; ++i) {
    SimplifiedGraph t = testing::RandomTree(rng, 12);
    Tokens a = Linearize(t, order, {.example_id = "ex" + std::to_string(i)});
    Tokens b = Linearize(t, order, {.example_id = "ex" + std::to_string(i)});
    ASSERT_EQ(a, b);
    Tokens c = Linearize(t, order, {.example_id = "other"});
    differs_by_id += a != c;
  }
  EXPECT_GT(differs_by_id, 20);
}

TEST(LinearizePropertyTest, BracketEconomyAndContent) {
  Rng rng(17);
  std::vector<std::string> inventory = {":ARG0", ":ARG1", ":ARG2", ":mod",
                                        ":time", ":location", ":poss",
                                        ":manner"};
  LinearizationOrder orders[] = {LinearizationOrder::Human(),
                                 MakeGlobalOrder(inventory, 1),
                                 LinearizationOrder::Random(1)};
  for (int i = 0; i < 1000; ++i) {
    SimplifiedGraph t = testing::RandomTree(rng, 12);
    std::multiset<std::string> content;
    for (const LinearizationOrder &o : orders) {
      Tokens tokens = Linearize(t, o, {.example_id = std::to_string(i)});
      ASSERT_EQ(Parens(tokens), 2 * MultiChildNodes(t));
      if (content.empty()) content = Content(tokens);
      ASSERT_EQ(Content(tokens), content);
    }
  }
}

TEST(LinearizePropertyTest, DecoderInvertsRenderingOnItsImage) {
  // Under kMultiChild the decoder's output always re-renders to the same
  // sequence, even where the sequence has more than one preimage.
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    SimplifiedGraph t = testing::RandomTree(rng, 12);
    Tokens tokens = Linearize(t, LinearizationOrder::Human());
    DelinearizeResult r = Delinearize(tokens);
    ASSERT_TRUE(r.repairs.clean()) << JoinTokens(tokens);
    ASSERT_EQ(Linearize(r.tree, LinearizationOrder::Human()), tokens);
    ASSERT_EQ(NodeCount(r.tree), NodeCount(t));
  }
}

TEST(LinearizePropertyTest, NonLeafScopesRoundTripExactly) {
  Rng rng(29);
  std::vector<std::string> inventory = {":ARG0", ":ARG1", ":ARG2", ":mod",
                                        ":time", ":location", ":poss",
                                        ":manner"};
  LinearizationOrder global = MakeGlobalOrder(inventory, 8);
  LinearizationOrder random = LinearizationOrder::Random(8);
  for (int i = 0; i < 1000; ++i) {
    SimplifiedGraph t = testing::RandomTree(rng, 12);
    LinearizeOptions opts{.scope = ScopeMarkers::kNonLeaf,
                          .example_id = std::to_string(i)};
    DelinearizeResult human = Delinearize(
        Linearize(t, LinearizationOrder::Human(), opts), ScopeMarkers::kNonLeaf);
    ASSERT_TRUE(human.repairs.clean());
    ASSERT_EQ(human.tree, t) << DebugString(t);
    ASSERT_TRUE(IsomorphicUnordered(
        Delinearize(Linearize(t, global, opts), ScopeMarkers::kNonLeaf).tree,
        t));
    ASSERT_TRUE(IsomorphicUnordered(
        Delinearize(Linearize(t, random, opts), ScopeMarkers::kNonLeaf).tree,
        t));
  }
}

TEST(LinearizeTest, MultiChildAmbiguityIsInherent) {
  // a{b{c}, d} and a{b, c{d}} share one rendering.
  SimplifiedGraph chain_first = {
      "a", {{":x", {"b", {{":y", Leaf("c")}}}}, {":z", Leaf("d")}}};
  SimplifiedGraph chain_last = {
      "a", {{":x", Leaf("b")}, {":y", {"c", {{":z", Leaf("d")}}}}}};
  EXPECT_EQ(Linearize(chain_first, LinearizationOrder::Human()),
            Linearize(chain_last, LinearizationOrder::Human()));
}

TEST(DelinearizeTest, WellFormed) {
  EXPECT_EQ(Delinearize({"want"}).tree, Leaf("want"));
  DelinearizeResult r =
      Delinearize({"(", "want", ":ARG0", "boy", ":ARG1", "girl", ")"});
  EXPECT_TRUE(r.repairs.clean());
  EXPECT_EQ(r.tree, WantBoyGirl());
  // Unscoped nodes chain.
  EXPECT_EQ(Delinearize({"a", ":x", "b", ":y", "c"}).tree,
            (SimplifiedGraph{"a", {{":x", {"b", {{":y", Leaf("c")}}}}}}));
}

TEST(DelinearizeTest, MissingCloseIsInserted) {
  DelinearizeResult r = Delinearize({"want", "(", ":ARG0", "boy"});
  EXPECT_EQ(r.tree, (SimplifiedGraph{"want", {{":ARG0", Leaf("boy")}}}));
  EXPECT_EQ(r.repairs.inserted_close, 1);
  EXPECT_EQ(r.repairs.misplaced_open, 1);
  EXPECT_EQ(r.repairs.total(), 2);

  r = Delinearize({"a", ":x", "(", "b", ":y", "c", ":z", "d"});
  EXPECT_EQ(r.repairs.inserted_close, 1);
  EXPECT_EQ(r.tree, (SimplifiedGraph{"a",
                                     {{":x",
                                       {"b", {{":y", Leaf("c")},
                                              {":z", Leaf("d")}}}}}}));
}

TEST(DelinearizeTest, StrayCloseDropped) {
  DelinearizeResult r = Delinearize({"a", ")", ":x", "b", ")"});
  EXPECT_EQ(r.repairs.dropped_close, 2);
  EXPECT_EQ(r.tree, (SimplifiedGraph{"a", {{":x", Leaf("b")}}}));
}

TEST(DelinearizeTest, DanglingLabelGetsPlaceholder) {
  DelinearizeResult r = Delinearize({"a", ":x"});
  EXPECT_EQ(r.repairs.placeholder_concepts, 1);
  EXPECT_EQ(r.tree, (SimplifiedGraph{"a", {{":x", Leaf("amr-unknown")}}}));

  r = Delinearize({"(", "a", ":x", ":y", "b", ")"});
  EXPECT_EQ(r.repairs.placeholder_concepts, 1);
  EXPECT_EQ(r.tree, (SimplifiedGraph{"a", {{":x", Leaf("amr-unknown")},
                                           {":y", Leaf("b")}}}));
}

TEST(DelinearizeTest, BareConceptAttachesViaMod) {
  DelinearizeResult r = Delinearize({"(", "a", ":x", "b", "c", ")"});
  EXPECT_EQ(r.repairs.attached_concepts, 1);
  EXPECT_EQ(r.tree,
            (SimplifiedGraph{"a", {{":x", Leaf("b")}, {":mod", Leaf("c")}}}));
}

TEST(DelinearizeTest, EmptyAndLabelFirst) {
  DelinearizeResult r = Delinearize({});
  EXPECT_EQ(r.tree, Leaf("amr-unknown"));
  EXPECT_FALSE(r.repairs.clean());

  r = Delinearize({":ARG0", "boy"});
  EXPECT_EQ(r.tree,
            (SimplifiedGraph{"amr-unknown", {{":ARG0", Leaf("boy")}}}));
}

TEST(DelinearizeTest, UnscopedRootOverflow) {
  DelinearizeResult r = Delinearize({"a", ":x", "b", ")", ":y", "c"});
  // ")" has nothing to close; ":y c" still chains under b.
  EXPECT_EQ(r.repairs.dropped_close, 1);
  r = Delinearize({"(", "a", ":x", "b", ":y", "c", ")", ":z", "d"});
  EXPECT_EQ(r.repairs.root_overflow, 1);
  EXPECT_EQ(r.tree.children.size(), 3u);
}

TEST(DelinearizeTest, TokenSoupAlwaysYieldsTree) {
  Rng rng(31);
  const char *vocab[] = {"(", ")", ":ARG0", ":mod", "a", "b", "c"};
  for (int i = 0; i < 2000; ++i) {
    Tokens tokens;
    std::size_t n = rng.Below(15);
    for (std::size_t k = 0; k < n; ++k) tokens.push_back(vocab[rng.Below(7)]);
    for (ScopeMarkers s : {ScopeMarkers::kMultiChild, ScopeMarkers::kNonLeaf,
                           ScopeMarkers::kNone}) {
      DelinearizeResult r = Delinearize(tokens, s);
      ASSERT_FALSE(r.tree.concept_name.empty());
      // A repaired tree is itself well-formed input.
      Tokens again = Linearize(r.tree, LinearizationOrder::Human(),
                               {.scope = s == ScopeMarkers::kNone
                                             ? ScopeMarkers::kMultiChild
                                             : s});
      ASSERT_TRUE(Delinearize(again, s == ScopeMarkers::kNone
                                         ? ScopeMarkers::kMultiChild
                                         : s)
                      .repairs.clean());
    }
  }
}

}  // namespace
}  // namespace amr

namespace amr {
namespace {

TEST(ToFullAmrTest, SingleNode) {
  EXPECT_EQ(SerializePenman(ToFullAmr({"want-01", {}})), "(w / want-01)");
}

TEST(ToFullAmrTest, FreshVariablesForIdenticalSiblings) {
  SimplifiedGraph t = {"and",
                       {{":op1", {"boy", {}}}, {":op2", {"boy", {}}}}};
  AmrGraph g = ToFullAmr(t);
  EXPECT_EQ(SerializePenman(g), "(a / and :op1 (b / boy) :op2 (b2 / boy))");
}

TEST(ToFullAmrTest, ConstantsAndInverseRoles) {
  SimplifiedGraph t = {"person",
                       {{":ARG0-of", {"lead-02", {}}},
                        {":quant", {"5", {}}},
                        {":polarity", {"-", {}}},
                        {":name", {"name", {{":op1", {"\"Kim\"", {}}}}}}}};
  AmrGraph g = ToFullAmr(t);
  EXPECT_EQ(SerializePenman(g),
            "(p / person :ARG0-of (l / lead-02) :quant 5 :polarity - "
            ":name (n / name :op1 \"Kim\"))");
  EXPECT_TRUE(Triples(g).contains(Triple{"l", ":ARG0", "p"}));
}

TEST(ToFullAmrTest, InverseOnImageOfSimplify) {
  Rng rng(37);
  for (int i = 0; i < 500; ++i) {
    SimplifiedGraph t = SimplifyGraph(testing::RandomGraph(rng),
                                      SimplifyMode::kParsing);
    ASSERT_EQ(SimplifyGraph(ToFullAmr(t), SimplifyMode::kParsing), t)
        << DebugString(t);
  }
}

}  // namespace
}  // namespace amr
