#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace cohesive {

/// Universe index. `Type i` inhabits `Type (i+1)`; there is no cumulativity.
struct Level {
  std::uint32_t value = 0;

  Level succ() const { return Level{value + 1}; }
  friend auto operator<=>(const Level&, const Level&) = default;
};

inline Level max(Level a, Level b) { return a.value < b.value ? b : a; }

/// Whether a hypothesis is crisp (`x :: A`) or cohesive (`x : A`).
enum class Polarity { Crisp, Cohesive };

const char* polarity_name(Polarity p);

/// Position of a node in its source file. Zero line means "unknown".
struct Span {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_col = 0;

  bool known() const { return line != 0; }
};

enum class Tag {
  Var,
  Const,
  Universe,
  Pi,
  Lam,
  App,
  Sigma,
  Pair,
  Fst,
  Snd,
  Id,
  Refl,
  J,
  Unit,
  Star,
  SharpTy,
  SharpIntro,
  SharpElim,
  FlatTy,
  FlatIntro,
  FlatLet,
};

const char* tag_name(Tag tag);

/// Number of variables bound around child `child` of a node tagged `tag`.
///
/// Pi/Sigma bind one variable in their second child, Lam in its body, J binds
/// three in the motive and one in the base case, and FlatLet binds one in its
/// motive and one in its body.
std::size_t binder_count(Tag tag, std::size_t child);

/// Polarity of the variables bound around `child`. Only the body of a
/// FlatLet introduces a crisp variable.
Polarity binder_polarity(Tag tag, std::size_t child);

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Core-language term with de Bruijn indices.
///
/// Children follow a fixed order per tag:
///   Pi(domain, codomain)        Lam(body)            App(fn, arg)
///   Sigma(first, second)        Pair(fst, snd)       Fst(p) / Snd(p)
///   Id(type, lhs, rhs)          Refl(point)
///   J(motive, base, lhs, rhs, proof)
///   SharpTy/SharpIntro/SharpElim/FlatTy/FlatIntro(inner)
///   FlatLet(motive, scrutinee, body)
///
/// `binders` holds display names, one per bound variable in child order
/// (J: x y p then the base's x; FlatLet: the motive's variable then the
/// crisp body variable). Names and spans never affect equality.
class Term {
 public:
  Tag tag = Tag::Unit;
  std::size_t index = 0;
  std::string name;
  Level level;
  std::vector<TermPtr> children;
  std::vector<std::string> binders;
  Span span;

  const TermPtr& child(std::size_t i) const { return children.at(i); }
};

/// Alpha-insensitive structural equality.
bool alpha_equal(const Term& a, const Term& b);
bool alpha_equal(const TermPtr& a, const TermPtr& b);

namespace mk {
TermPtr var(std::size_t index);
TermPtr constant(std::string name);
TermPtr universe(Level level);
TermPtr pi(std::string name, TermPtr domain, TermPtr codomain);
TermPtr arrow(TermPtr domain, TermPtr codomain);
TermPtr lam(std::string name, TermPtr body);
TermPtr app(TermPtr fn, TermPtr arg);
TermPtr apps(TermPtr fn, std::vector<TermPtr> args);
TermPtr sigma(std::string name, TermPtr first, TermPtr second);
TermPtr pair(TermPtr fst, TermPtr snd);
TermPtr fst(TermPtr p);
TermPtr snd(TermPtr p);
TermPtr id(TermPtr type, TermPtr lhs, TermPtr rhs);
TermPtr refl(TermPtr point);
TermPtr j(std::vector<std::string> motive_names, TermPtr motive, std::string base_name, TermPtr base,
          TermPtr lhs, TermPtr rhs, TermPtr proof);
TermPtr unit();
TermPtr star();
TermPtr sharp(TermPtr type);
TermPtr sharp_intro(TermPtr inner);
TermPtr sharp_elim(TermPtr inner);
TermPtr flat(TermPtr type);
TermPtr flat_intro(TermPtr inner);
TermPtr flat_let(std::string motive_name, TermPtr motive, TermPtr scrutinee, std::string body_name,
                 TermPtr body);

/// Copy of `node` with new children; everything else is preserved.
TermPtr with_children(const Term& node, std::vector<TermPtr> children);
TermPtr with_span(const TermPtr& t, Span span);
}  // namespace mk

/// Displace free variables with index >= cutoff by `amount`.
/// Throws std::logic_error if an index would become negative.
TermPtr shift(const TermPtr& t, std::size_t cutoff, std::ptrdiff_t amount);

/// Replace free occurrences of `target` by `replacement`. Other indices are
/// left as they are; the variable is not removed from scope.
TermPtr subst(const TermPtr& t, std::size_t target, const TermPtr& replacement);

/// Substitute for index 0 and remove it from scope (the beta step).
TermPtr instantiate(const TermPtr& body, const TermPtr& replacement);

std::set<std::size_t> free_vars(const TermPtr& t);

/// Rename free variables through `map`; nullopt if some free variable has no
/// image. `map` receives and returns indices relative to the term's root.
std::optional<TermPtr> rename_free(const TermPtr& t,
                                   const std::function<std::optional<std::size_t>(std::size_t)>& map);

/// Names of all constants occurring in `t`.
std::set<std::string> constants_of(const TermPtr& t);

/// Number of nodes; used to bound test generators.
std::size_t term_size(const TermPtr& t);

/// A telescope entry. The type is scoped over the entries to its left.
struct Entry {
  std::string name;
  TermPtr type;
  Polarity polarity = Polarity::Cohesive;
};

/// Ordered context `Δ | Γ`, kept as a single list with per-entry polarity.
class Telescope {
 public:
  Telescope() = default;
  explicit Telescope(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const Entry& at_level(std::size_t level) const { return entries_.at(level); }
  const Entry& at_index(std::size_t index) const { return entries_.at(entries_.size() - 1 - index); }

  const std::vector<Entry>& entries() const { return entries_; }

  Telescope extended(Entry entry) const;

  /// Every entry's type is well-scoped over earlier entries, and crisp
  /// entries only mention crisp entries.
  bool well_formed() const;

  std::vector<std::string> names() const;

 private:
  std::vector<Entry> entries_;
};

/// An argument of a rewrite left-hand side: either a fresh pattern variable
/// or a constant applied to pattern variables.
struct PatternArg {
  enum class Kind { Variable, Constructor };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<std::string> vars;
};

struct Pattern {
  std::string head;
  std::vector<PatternArg> args;

  /// Pattern variables in left-to-right order of occurrence.
  std::vector<std::string> variables() const;
};

struct Definition {
  std::string name;
  TermPtr type;
  TermPtr body;
};

struct Postulate {
  std::string name;
  TermPtr type;
};

/// `rhs` is scoped over the pattern variables, the last one being index 0.
struct RewriteRule {
  std::string name;
  Pattern lhs;
  TermPtr rhs;
};

struct DeclSpan {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
};

struct Declaration {
  std::variant<Definition, Postulate, RewriteRule> item;
  DeclSpan span;

  const std::string& name() const;
};

}  // namespace cohesive
