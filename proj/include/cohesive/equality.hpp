#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cohesive/environment.hpp"
#include "cohesive/syntax.hpp"

namespace cohesive {

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Values bound to the variables of a context; the last element is index 0.
using Valuation = std::vector<ValuePtr>;

struct Closure {
  Valuation env;
  TermPtr body;
};

enum class VTag {
  Universe,
  Pi,
  Lam,
  Sigma,
  Pair,
  Id,
  Refl,
  Unit,
  Star,
  SharpTy,
  SharpIntro,
  FlatTy,
  FlatIntro,
  Neutral,
};

enum class ElimTag { App, Fst, Snd, J, SharpElim, FlatLet };

struct Elim {
  ElimTag tag = ElimTag::App;
  ValuePtr arg;    // App
  Closure motive;  // J (binds 3), FlatLet (binds 1)
  Closure body;    // J base (binds 1), FlatLet body (binds 1, crisp)
  ValuePtr lhs;    // J
  ValuePtr rhs;    // J
  std::vector<std::string> names;
};

struct Head {
  bool global = false;
  std::size_t level = 0;  // de Bruijn level when local
  std::string name;       // constant name when global
};

/// Semantic domain. Field use per tag:
///   Pi/Sigma: a = domain, clo = family;  Lam: clo;  Pair: a, b;
///   Id: a = type, b = lhs, c = rhs;  Refl/Sharp*/Flat*: a;
///   Neutral: head + spine (stuck eliminations, innermost first).
struct Value {
  VTag tag = VTag::Unit;
  Level level;
  ValuePtr a, b, c;
  Closure clo;
  std::string binder;
  Head head;
  std::vector<Elim> spine;
};

/// Pattern-variable assignment produced by a successful match.
struct RewriteMatch {
  const RewriteRule* rule = nullptr;
  Valuation assignment;
};

/// First-order match of the rules for `head` against a spine of exactly
/// that many applications. Rules are tried in declaration order.
std::optional<RewriteMatch> match_rewrite(const RewriteIndex& index, const std::string& head,
                                          const std::vector<Elim>& spine);

/// Unification variables for rewrite admission: level → solution.
struct FlexSet {
  std::map<std::size_t, ValuePtr> solutions;
  std::vector<std::size_t> flexible;
  bool is_flex(std::size_t level) const;
};

/// Normalization by evaluation over a frozen environment, with a
/// reduction budget. Not thread-safe; use one per thread.
class Evaluator {
 public:
  explicit Evaluator(const Environment& env, std::uint64_t fuel = kDefaultFuel);

  const Environment& environment() const { return env_; }

  void reset_fuel() { remaining_ = fuel_; }
  std::uint64_t fuel() const { return fuel_; }
  std::uint64_t remaining() const { return remaining_; }

  ValuePtr eval(const Valuation& rho, const TermPtr& t);
  ValuePtr instantiate(const Closure& c, const std::vector<ValuePtr>& args);

  ValuePtr apply(const ValuePtr& f, const ValuePtr& arg);
  ValuePtr fst(const ValuePtr& p);
  ValuePtr snd(const ValuePtr& p);
  ValuePtr sharp_intro(const ValuePtr& v);
  ValuePtr sharp_elim(const ValuePtr& v);
  ValuePtr flat_let(const Closure& motive, const Closure& body, const ValuePtr& scrutinee,
                    std::vector<std::string> names = {"x", "u"});

  TermPtr quote(std::size_t depth, const ValuePtr& v);
  TermPtr normalize(const Valuation& rho, const TermPtr& t) { return quote(rho.size(), eval(rho, t)); }

  /// Untyped conversion with η for Π, Σ and ♯.
  bool conv(std::size_t depth, const ValuePtr& a, const ValuePtr& b);
  /// As conv, but unsolved flexible variables may be assigned.
  bool unify(std::size_t depth, const ValuePtr& a, const ValuePtr& b, FlexSet& flex);

  static ValuePtr var(std::size_t level);
  static ValuePtr universe(Level level);

 private:
  void tick();
  bool conv_impl(std::size_t depth, const ValuePtr& a, const ValuePtr& b, FlexSet* flex);
  bool conv_spine(std::size_t depth, const Value& a, const Value& b, FlexSet* flex);
  ValuePtr push(const ValuePtr& neutral, Elim e);
  ValuePtr constant(const std::string& name);
  ValuePtr j_elim(const Closure& motive, const Closure& base, const ValuePtr& lhs, const ValuePtr& rhs,
                  const ValuePtr& proof, std::vector<std::string> names);

  const Environment& env_;
  std::uint64_t fuel_;
  std::uint64_t remaining_;
  std::size_t depth_guard_ = 0;
};

/// Thrown (as a DiagnosticError) with code FuelExhausted when the budget or
/// the recursion guard runs out.
[[noreturn]] void fuel_exhausted(const std::string& why);

}  // namespace cohesive
