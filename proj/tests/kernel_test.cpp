#include <gtest/gtest.h>

#include "properties.hpp"
#include "support.hpp"

namespace cohesive {
namespace {

using namespace cohesive::testing;

// A small signature of crisp constants used throughout.
const Environment& base() {
  static const Environment env = extend(prelude(),
                                        "postulate A0 : Type 0\n"
                                        "postulate B0 : Type 0\n"
                                        "postulate c0 : A0\n"
                                        "postulate g0 : A0 -> B0\n");
  return env;
}

Code code_of(const Result<TermPtr>& r) { return r.ok() ? Code::ParseError : r.error().code; }

TermPtr infer_ok(const Telescope& ctx, const std::string& src, const std::vector<std::string>& scope) {
  auto r = infer(base(), ctx, term(base(), src, scope));
  if (!r.ok()) throw std::runtime_error(r.error().render());
  return r.value();
}

bool same_type(const Telescope& ctx, const TermPtr& got, const std::string& expected,
               const std::vector<std::string>& scope) {
  auto want = normalize(base(), ctx, term(base(), expected, scope));
  return want.ok() && alpha_equal(got, want.value());
}

TEST(Promote, Empty) { EXPECT_TRUE(promote(Telescope{}).empty()); }

TEST(Promote, MakesEverythingCrisp) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("x", "A")});
  auto p = promote(ctx);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.at_level(0).polarity, Polarity::Crisp);
  EXPECT_EQ(p.at_level(1).polarity, Polarity::Crisp);
  EXPECT_TRUE(alpha_equal(p.at_level(1).type, ctx.at_level(1).type));
  EXPECT_TRUE(props::same_telescope(promote(p), p));
}

TEST(IsCrisp, ConstantsAreCrisp) {
  auto ctx = telescope(base(), {cohesive("x", "A0")});
  EXPECT_TRUE(is_crisp(ctx, mk::constant("c0")));
}

TEST(IsCrisp, CohesiveVariableReported) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("x", "A")});
  auto d = is_crisp(ctx, mk::var(0));
  EXPECT_FALSE(d);
  ASSERT_TRUE(d.offender);
  EXPECT_EQ(*d.offender, 0u);
  EXPECT_EQ(d.offender_name, "x");
  EXPECT_TRUE(is_crisp(ctx, mk::var(1)));
}

TEST(IsCrisp, ApplicationToCohesiveArgument) {
  auto ctx = telescope(base(), {cohesive("a", "A0")});
  EXPECT_FALSE(is_crisp(ctx, term(base(), "g0 a", {"a"})));
}

TEST(CrispRestriction, DropsCohesiveEntries) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("x", "A"), crisp("y", "A")});
  auto r = crisp_restriction(ctx);
  ASSERT_TRUE(r);
  ASSERT_EQ(r->size(), 2u);
  EXPECT_EQ(r->at_level(1).name, "y");
  EXPECT_TRUE(alpha_equal(r->at_level(1).type, mk::var(0)));
}

TEST(Infer, SharpIntroPromotes) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("a", "A")});
  auto ty = infer_ok(ctx, "a ^sharp", {"A", "a"});
  EXPECT_TRUE(same_type(ctx, ty, "Sharp A", {"A", "a"}));
}

TEST(Infer, SharpElimOnCohesiveVariable) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("x", "Sharp A")});
  auto r = infer(base(), ctx, term(base(), "x _sharp", {"A", "x"}));
  EXPECT_EQ(code_of(r), Code::SharpElimCohesive);
}

TEST(Infer, SharpElimOnCrispVariable) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), crisp("u", "Sharp A")});
  auto ty = infer_ok(ctx, "u _sharp", {"A", "u"});
  EXPECT_TRUE(same_type(ctx, ty, "A", {"A", "u"}));
}

TEST(Infer, SharpElimUnderSharpIntroIsPromoted) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("x", "Sharp A")});
  auto ty = infer_ok(ctx, "(x _sharp) ^sharp", {"A", "x"});
  EXPECT_TRUE(same_type(ctx, ty, "Sharp A", {"A", "x"}));
}

TEST(Infer, FlatIntroOfCohesiveVariable) {
  auto ctx = telescope(base(), {crisp("B", "Type 0"), cohesive("x", "Flat B")});
  auto r = infer(base(), ctx, term(base(), "x ^flat", {"B", "x"}));
  EXPECT_EQ(code_of(r), Code::CrispnessViolation);
}

TEST(Infer, FlatMapOnCrispFunction) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), crisp("B", "Type 0"), crisp("f", "A -> B"),
                                cohesive("x", "Flat A")});
  std::vector<std::string> scope{"A", "B", "f", "x"};
  auto ty = infer_ok(ctx, "letflat u := x motive _. Flat B in (f u) ^flat", scope);
  EXPECT_TRUE(same_type(ctx, ty, "Flat B", scope));
}

TEST(Infer, FlatOnCohesiveType) {
  auto ctx = telescope(base(), {cohesive("X", "Type 0")});
  auto r = infer(base(), ctx, term(base(), "Flat X", {"X"}));
  EXPECT_EQ(code_of(r), Code::FlatOnCohesiveType);
}

TEST(Infer, SharpOnCohesiveTypeIsFine) {
  auto ctx = telescope(base(), {cohesive("X", "Type 0")});
  auto ty = infer_ok(ctx, "Sharp X", {"X"});
  EXPECT_TRUE(alpha_equal(ty, mk::universe(Level{0})));
}

TEST(Infer, UniversesAreNotCumulative) {
  EXPECT_TRUE(alpha_equal(infer_ok({}, "Type 0", {}), mk::universe(Level{1})));
  EXPECT_EQ(check(base(), {}, term(base(), "Type 0"), mk::universe(Level{2}))->code, Code::UniverseError);
  EXPECT_EQ(check(base(), {}, term(base(), "Type 0"), mk::universe(Level{0}))->code, Code::UniverseError);
}

TEST(Infer, PiLandsInMaxLevel) {
  EXPECT_TRUE(alpha_equal(infer_ok({}, "Type 0 -> A0", {}), mk::universe(Level{1})));
  EXPECT_TRUE(alpha_equal(infer_ok({}, "(X : Type 1) * Type 0", {}), mk::universe(Level{2})));
  EXPECT_TRUE(alpha_equal(infer_ok({}, "Id (Type 0) A0 B0", {}), mk::universe(Level{1})));
}

TEST(Infer, NotAFunctionAndNotAPair) {
  EXPECT_EQ(code_of(infer(base(), {}, term(base(), "c0 c0"))), Code::NotAFunction);
  EXPECT_EQ(code_of(infer(base(), {}, term(base(), "c0 .1"))), Code::NotAPair);
}

TEST(Infer, MotiveMustBeAType) {
  auto r = infer(base(), {}, term(base(), "J (x. y. p. c0) (x. c0) c0 c0 (refl c0)"));
  EXPECT_EQ(code_of(r), Code::MotiveMismatch);
}

TEST(Infer, LambdaNeedsAnnotation) {
  auto r = infer(base(), {}, term(base(), "fun x. x"));
  ASSERT_FALSE(r.ok());
}

TEST(Check, IdentityAgainstArrow) {
  EXPECT_FALSE(check(base(), {}, term(base(), "fun x. x"), term(base(), "A0 -> A0")));
}

TEST(Check, StarAgainstUnit) { EXPECT_FALSE(check(base(), {}, mk::star(), mk::unit())); }

TEST(Check, SharpIntroAgainstBaseType) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("a", "A")});
  auto d = check(base(), ctx, term(base(), "a ^sharp", {"A", "a"}), mk::var(1));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->code, Code::TypeMismatch);
}

TEST(Check, DiagnosticCarriesContext) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("x", "Sharp A")});
  auto r = infer(base(), ctx, term(base(), "x _sharp", {"A", "x"}));
  ASSERT_FALSE(r.ok());
  const auto& lines = r.error().context;
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].name, "A");
  EXPECT_EQ(lines[0].polarity, Polarity::Crisp);
  EXPECT_EQ(lines[1].name, "x");
  EXPECT_EQ(lines[1].type, "Sharp A");
  EXPECT_EQ(lines[1].polarity, Polarity::Cohesive);
  EXPECT_NE(r.error().render().find("SharpElimCohesive"), std::string::npos);
}

TEST(Declarations, DefinitionExtendsEnvironment) {
  auto env = extend(Environment{}, "def id0 : (A : Type 0) -> A -> A := fun A. fun x. x");
  ASSERT_TRUE(env.is_constant("id0"));
  EXPECT_EQ(env.lookup("id0")->kind, ConstKind::Definition);
}

TEST(Declarations, PostulateExtendsEnvironment) {
  EXPECT_EQ(prelude().lookup("funext")->kind, ConstKind::Postulate);
}

TEST(Declarations, WrongBodyIsTypeMismatch) {
  auto out = check_source(Environment{}, "def bad : Unit := fun x. x", "<t>", CheckOptions{});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.diagnostic->code, Code::TypeMismatch);
}

TEST(Declarations, DuplicateIsRejected) {
  auto out = check_source(prelude(), "postulate funext : Unit", "<t>", CheckOptions{});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.diagnostic->code, Code::DuplicateName);
}

TEST(Declarations, DefinitionsUnfold) {
  auto env = extend(base(), "def two : A0 -> A0 := fun x. x");
  auto r = convertible(env, {}, term(env, "two c0"), term(env, "c0"), term(env, "A0"));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.value());
}

TEST(Rewrites, NatRecursionAccepted) {
  EXPECT_TRUE(prelude().rewrites().has_rules("natrec"));
  auto out = check_source(prelude(),
                          "postulate natrec2 : (P : Nat -> Type 0) -> P zero -> ((n : Nat) -> P n -> P (succ n)) ->\n"
                          "  (n : Nat) -> P n\n"
                          "rewrite natrec2_succ : natrec2 P z s (succ n) => s n (natrec2 P z s n)\n",
                          "<t>", CheckOptions{});
  EXPECT_TRUE(out.ok()) << out.diagnostic->render();
}

TEST(Rewrites, ShapeComputationAccepted) {
  auto out = check_source(base(),
                          "postulate Sh : Type 0 -> Type 0\n"
                          "postulate sigma_pt : (A : Type 0) -> A -> Sh A\n"
                          "postulate sh_ind : (A : Type 0) -> (C : Sh A -> Type 0) -> ((x : A) -> C (sigma_pt A x)) ->\n"
                          "  (w : Sh A) -> C w\n"
                          "rewrite sh_ind_sigma : sh_ind A C d (sigma_pt A' x) => d x\n",
                          "<t>", CheckOptions{});
  ASSERT_TRUE(out.ok()) << out.diagnostic->render();
  // Fires on a constructor, stays stuck on a neutral.
  auto env = extend(out.env,
                    "postulate P : Sh A0 -> Type 0\npostulate dd : (x : A0) -> P (sigma_pt A0 x)\n"
                    "postulate w0 : Sh A0");
  auto fired = normalize(env, {}, term(env, "sh_ind A0 P dd (sigma_pt A0 c0)"));
  ASSERT_TRUE(fired.ok());
  EXPECT_TRUE(alpha_equal(fired.value(), term(env, "dd c0")));
  auto stuck = normalize(env, {}, term(env, "sh_ind A0 P dd w0"));
  ASSERT_TRUE(stuck.ok());
  EXPECT_TRUE(alpha_equal(stuck.value(), term(env, "sh_ind A0 P dd w0")));
}

TEST(Rewrites, RhsOfDifferentTypeRejected) {
  auto out = check_source(base(),
                          "postulate h : A0 -> A0\n"
                          "rewrite h_bad : h x => g0 x\n",
                          "<t>", CheckOptions{});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.diagnostic->code, Code::RewriteIllFormed);
}

TEST(Rewrites, HeadMustBePostulate) {
  auto out = check_source(base(),
                          "def h : A0 -> A0 := fun x. x\n"
                          "rewrite h_bad : h x => x\n",
                          "<t>", CheckOptions{});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.diagnostic->code, Code::RewriteIllFormed);
}

TEST(Rewrites, NonLinearPatternRejected) {
  auto out = check_source(base(),
                          "postulate h : A0 -> A0 -> A0\n"
                          "rewrite h_bad : h x x => x\n",
                          "<t>", CheckOptions{});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.diagnostic->code, Code::RewriteIllFormed);
}

// Substitution admissibility: for ctx, x : A ⊢ n : B and ctx ⊢ m : A, the
// instance n[m/x] has type B[m/x].
TEST(Substitution, CohesiveInstance) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("a", "A")});
  auto inner = ctx.extended(Entry{"x", mk::var(1), Polarity::Cohesive});
  std::vector<std::string> scope{"A", "a", "x"};
  auto n = term(base(), "(x, refl x)", scope);
  auto b = term(base(), "(y : A) * Id A x y", scope);
  ASSERT_FALSE(check(base(), inner, n, b));
  auto m = mk::var(0);  // a
  EXPECT_FALSE(check(base(), ctx, instantiate(n, m), instantiate(b, m)));
}

TEST(Substitution, CrispInstanceNeedsCrispTerm) {
  // ctx, x :: A0 ⊢ (g0 x)^♭ : ♭B0. Substituting the crisp c0 is fine;
  // substituting a cohesive a is exactly the rejected g(a)^♭.
  auto ctx = telescope(base(), {cohesive("a", "A0")});
  auto inner = ctx.extended(Entry{"x", mk::constant("A0"), Polarity::Crisp});
  auto n = term(base(), "(g0 x) ^flat", {"a", "x"});
  auto b = term(base(), "Flat B0");
  ASSERT_FALSE(check(base(), inner, n, shift(b, 0, 1)));
  ASSERT_TRUE(is_crisp(ctx, mk::constant("c0")));
  EXPECT_FALSE(check(base(), ctx, instantiate(n, mk::constant("c0")), b));
  ASSERT_FALSE(is_crisp(ctx, mk::var(0)));
  auto d = check(base(), ctx, instantiate(n, mk::var(0)), b);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->code, Code::CrispnessViolation);
}

TEST(Determinism, InferIsAFunction) {
  auto ctx = telescope(base(), {crisp("A", "Type 0"), cohesive("u", "Sharp A")});
  std::vector<std::string> scope{"A", "u"};
  auto t = term(base(), "sharp_map A A (fun z. z) u", scope);
  auto a = infer(base(), ctx, t);
  auto b = infer(base(), ctx, t);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(print_term(a.value(), scope), print_term(b.value(), scope));
}

TEST(Fuel, ExhaustionIsReported) {
  CheckOptions opts;
  opts.fuel = 5;
  auto env = extend(prelude(), "postulate n0 : Nat");
  auto r = normalize(env, {}, term(env, "natrec (fun _. Nat) zero (fun _ m. succ m) (succ (succ (succ (succ n0))))"),
                     opts);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Code::FuelExhausted);
}

}  // namespace
}  // namespace cohesive
