#include <gtest/gtest.h>

#include "properties.hpp"
#include "support.hpp"
#include "term_gen.hpp"

namespace cohesive {
namespace {

using namespace mk;

TEST(Shift, FreeVariable) { EXPECT_TRUE(alpha_equal(shift(var(0), 0, 1), var(1))); }

TEST(Shift, BoundVariableUntouched) { EXPECT_TRUE(alpha_equal(shift(lam("x", var(0)), 0, 5), lam("x", var(0)))); }

TEST(Shift, UnderBinder) { EXPECT_TRUE(alpha_equal(shift(lam("x", var(3)), 0, 2), lam("x", var(5)))); }

TEST(Shift, UnderBinderAgreesWithOracle) {
  auto t = lam("x", var(3));
  EXPECT_TRUE(alpha_equal(shift(t, 0, 2), gen::oracle_shift(t, 3, 0, 2)));
}

TEST(Shift, RespectsCutoff) {
  auto t = app(var(0), var(2));
  EXPECT_TRUE(alpha_equal(shift(t, 1, 3), app(var(0), var(5))));
}

TEST(Shift, NegativeBelowZeroThrows) { EXPECT_THROW(shift(var(0), 0, -1), std::logic_error); }

TEST(Subst, Variable) { EXPECT_TRUE(alpha_equal(subst(var(0), 0, star()), star())); }

TEST(Subst, LeavesOtherIndices) {
  auto r = subst(app(var(0), var(1)), 0, lam("x", var(0)));
  EXPECT_TRUE(alpha_equal(r, app(lam("x", var(0)), var(1))));
}

TEST(Subst, FlatLetScrutineeOnly) {
  auto t = flat_let("z", unit(), var(1), "u", sharp_intro(var(0)));
  auto r = subst(t, 1, constant("c"));
  EXPECT_TRUE(alpha_equal(r, flat_let("z", unit(), constant("c"), "u", sharp_intro(var(0)))));
  EXPECT_TRUE(alpha_equal(r, gen::oracle_subst(t, 2, 1, constant("c"))));
}

TEST(Subst, ShiftsReplacementUnderBinders) {
  // (λy. x) [x := z] with x = 0, z = 1 in the outer scope.
  auto r = subst(lam("y", var(1)), 0, var(1));
  EXPECT_TRUE(alpha_equal(r, lam("y", var(2))));
}

TEST(Instantiate, BetaStepRemovesBinder) {
  // body: App(Var 0, Var 1) under one binder; outer Var 0 becomes Var 0 again.
  auto r = instantiate(app(var(0), var(1)), star());
  EXPECT_TRUE(alpha_equal(r, app(star(), var(0))));
}

TEST(FreeVars, Closed) { EXPECT_TRUE(free_vars(lam("x", var(0))).empty()); }

TEST(FreeVars, Application) {
  std::set<std::size_t> expected{0, 2};
  EXPECT_EQ(free_vars(app(var(0), var(2))), expected);
}

TEST(FreeVars, FlatLet) {
  auto t = flat_let("z", var(0), var(0), "u", app(var(0), var(0)));
  std::set<std::size_t> expected{0};
  EXPECT_EQ(free_vars(t), expected);
  EXPECT_EQ(free_vars(t), gen::oracle_free_vars(t, 1));
}

TEST(FreeVars, JBinders) {
  auto t = j({"x", "y", "p"}, var(3), "x", var(1), var(0), var(0), refl(var(0)));
  std::set<std::size_t> expected{0};
  EXPECT_EQ(free_vars(t), expected);
}

TEST(AlphaEqual, IgnoresNamesAndSpans) {
  auto a = lam("x", var(0));
  auto b = with_span(lam("y", var(0)), Span{3, 4, 3, 9});
  EXPECT_TRUE(alpha_equal(a, b));
  EXPECT_FALSE(alpha_equal(lam("x", var(0)), lam("x", var(1))));
  EXPECT_FALSE(alpha_equal(constant("a"), constant("b")));
  EXPECT_FALSE(alpha_equal(universe(Level{0}), universe(Level{1})));
}

TEST(RenameFree, MapsAndFails) {
  auto t = lam("x", app(var(0), var(1)));
  auto r = rename_free(t, [](std::size_t i) -> std::optional<std::size_t> { return i + 4; });
  ASSERT_TRUE(r);
  EXPECT_TRUE(alpha_equal(*r, lam("x", app(var(0), var(5)))));
  EXPECT_FALSE(rename_free(t, [](std::size_t) -> std::optional<std::size_t> { return std::nullopt; }));
}

TEST(ConstantsOf, CollectsNames) {
  auto t = app(constant("f"), lam("x", app(constant("g"), var(0))));
  std::set<std::string> expected{"f", "g"};
  EXPECT_EQ(constants_of(t), expected);
}

TEST(BinderCount, Layout) {
  EXPECT_EQ(binder_count(Tag::Pi, 0), 0u);
  EXPECT_EQ(binder_count(Tag::Pi, 1), 1u);
  EXPECT_EQ(binder_count(Tag::J, 0), 3u);
  EXPECT_EQ(binder_count(Tag::J, 1), 1u);
  EXPECT_EQ(binder_count(Tag::J, 4), 0u);
  EXPECT_EQ(binder_count(Tag::FlatLet, 1), 0u);
  EXPECT_EQ(binder_polarity(Tag::FlatLet, 2), Polarity::Crisp);
  EXPECT_EQ(binder_polarity(Tag::FlatLet, 0), Polarity::Cohesive);
  EXPECT_EQ(binder_polarity(Tag::Lam, 0), Polarity::Cohesive);
}

TEST(Telescope, WellFormedness) {
  Telescope ok({{"A", universe(Level{0}), Polarity::Crisp}, {"x", var(0), Polarity::Cohesive}});
  EXPECT_TRUE(ok.well_formed());
  // A crisp entry whose type mentions a cohesive one.
  Telescope bad({{"A", universe(Level{0}), Polarity::Cohesive}, {"x", var(0), Polarity::Crisp}});
  EXPECT_FALSE(bad.well_formed());
  Telescope unscoped({{"x", var(0), Polarity::Cohesive}});
  EXPECT_FALSE(unscoped.well_formed());
  EXPECT_EQ(ok.at_index(0).name, "x");
  EXPECT_EQ(ok.at_level(0).name, "A");
}

TEST(Pattern, VariablesInOrder) {
  Pattern p{"h", {{PatternArg::Kind::Variable, "a", {}}, {PatternArg::Kind::Constructor, "c", {"b", "d"}}}};
  std::vector<std::string> expected{"a", "b", "d"};
  EXPECT_EQ(p.variables(), expected);
}

class RandomTerms : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomTerms, DeBruijnLaws) {
  gen::TermGen g(GetParam(), {"c"});
  for (int i = 0; i < 200; ++i) {
    std::size_t n = g.below(4);
    auto t = g.term(n, 5);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        auto lhs = shift(shift(t, 0, static_cast<std::ptrdiff_t>(a)), 0, static_cast<std::ptrdiff_t>(b));
        ASSERT_TRUE(alpha_equal(lhs, shift(t, 0, static_cast<std::ptrdiff_t>(a + b))));
      }
    }
    ASSERT_TRUE(alpha_equal(subst(shift(t, 0, 1), 0, star()), shift(t, 0, 1)));
    ASSERT_EQ(free_vars(t), gen::oracle_free_vars(t, n));
    if (n == 0) continue;
    ASSERT_TRUE(alpha_equal(shift(t, 1, 2), gen::oracle_shift(t, n, 1, 2)));
    auto r = g.term(n, 2);
    std::size_t target = g.below(n);
    auto s = subst(t, target, r);
    ASSERT_TRUE(alpha_equal(s, gen::oracle_subst(t, n, target, r)));
    // free_vars(subst t i r) = free_vars(t) \ {i} ∪ (free_vars(r) if i occurs).
    auto expected = free_vars(t);
    bool occurs = expected.erase(target) != 0;
    if (occurs) {
      for (auto v : free_vars(r)) expected.insert(v);
    }
    ASSERT_EQ(free_vars(s), expected);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomTerms, ::testing::Values(1u, 2u, 3u, 4u, 5u));

}  // namespace
}  // namespace cohesive
