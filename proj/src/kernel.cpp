#include "cohesive/kernel.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "cohesive/parser.hpp"

namespace cohesive {

namespace {

struct CtxEntry {
  std::string name;
  ValuePtr type;
  Polarity polarity = Polarity::Cohesive;
  bool defined = false;
};

// Checking context: entry types as values plus the valuation used to
// evaluate terms scoped over it. Defined entries (rewrite admission only)
// carry their value in the valuation instead of a fresh variable.
struct Context {
  std::vector<CtxEntry> entries;
  Valuation env;

  std::size_t depth() const { return entries.size(); }

  Context bind(std::string name, ValuePtr type, Polarity p) const {
    Context c = *this;
    c.entries.push_back({std::move(name), std::move(type), p, false});
    c.env.push_back(Evaluator::var(depth()));
    return c;
  }

  Context define(std::string name, ValuePtr type, ValuePtr value) const {
    Context c = *this;
    c.entries.push_back({std::move(name), std::move(type), Polarity::Cohesive, true});
    c.env.push_back(std::move(value));
    return c;
  }

  Context promoted() const {
    Context c = *this;
    for (auto& e : c.entries) e.polarity = Polarity::Crisp;
    return c;
  }

  bool has_definitions() const {
    for (const auto& e : entries) {
      if (e.defined) return true;
    }
    return false;
  }
};

ValuePtr make_unary(VTag tag, ValuePtr a) {
  auto v = std::make_shared<Value>();
  v->tag = tag;
  v->a = std::move(a);
  return v;
}

class Checker {
 public:
  Checker(const Environment& env, const CheckOptions& opts) : env_(env), ev_(env, opts.fuel), opts_(opts) {}

  Evaluator& ev() { return ev_; }

  Context from_telescope(const Telescope& tel) {
    Context c;
    for (const auto& e : tel.entries()) c = c.bind(e.name, ev_.eval(c.env, e.type), e.polarity);
    return c;
  }

  Telescope to_telescope(const Context& ctx) {
    std::vector<Entry> out;
    for (std::size_t i = 0; i < ctx.depth(); ++i) {
      const auto& e = ctx.entries[i];
      out.push_back({e.name, ev_.quote(i, e.type), e.polarity});
    }
    return Telescope(std::move(out));
  }

  std::vector<std::string> display_names(const Context& ctx) const {
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& e : ctx.entries) {
      std::string base = e.name.empty() || e.name == "_" ? "x" : e.name;
      std::string n = base;
      for (int k = 1; seen.count(n) != 0; ++k) n = base + std::to_string(k);
      seen.insert(n);
      names.push_back(n);
    }
    return names;
  }

  std::string show(const Context& ctx, const ValuePtr& v) {
    return print_term(ev_.quote(ctx.depth(), v), display_names(ctx));
  }

  std::string show_term(const Context& ctx, const TermPtr& t) { return print_term(t, display_names(ctx)); }

  [[noreturn]] void error(const Context& ctx, Code code, const std::string& message) {
    Diagnostic d;
    d.code = code;
    d.message = message;
    d.span = span_;
    auto names = display_names(ctx);
    for (std::size_t i = 0; i < ctx.depth(); ++i) {
      std::vector<std::string> scope(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(i));
      std::string type;
      try {
        type = print_term(ev_.quote(i, ctx.entries[i].type), scope);
      } catch (const std::exception&) {
        type = "<unprintable>";
      }
      d.context.push_back({names[i], type, ctx.entries[i].polarity});
    }
    throw DiagnosticError(std::move(d));
  }

  bool conv(const Context& ctx, const ValuePtr& a, const ValuePtr& b) {
    ev_.reset_fuel();
    return ev_.conv(ctx.depth(), a, b);
  }

  CrispDecision crisp(const Context& ctx, const TermPtr& t) const {
    CrispDecision d;
    for (auto idx : free_vars(t)) {
      if (idx >= ctx.depth()) throw std::logic_error("is_crisp: variable out of scope");
      const auto& e = ctx.entries[ctx.depth() - 1 - idx];
      if (e.polarity != Polarity::Crisp) {
        d.crisp = false;
        d.offender = idx;
        d.offender_name = e.name;
        return d;
      }
    }
    return d;
  }

  // Re-express `v` (a value over `from_depth` levels) over `to_env`, where
  // `level_map` sends source levels to target levels.
  std::optional<ValuePtr> transport(const ValuePtr& v, std::size_t from_depth,
                                    const std::vector<std::optional<std::size_t>>& level_map,
                                    const Valuation& to_env) {
    auto t = ev_.quote(from_depth, v);
    auto renamed = rename_free(t, [&](std::size_t idx) -> std::optional<std::size_t> {
      std::size_t level = from_depth - 1 - idx;
      if (level >= level_map.size() || !level_map[level]) return std::nullopt;
      return to_env.size() - 1 - *level_map[level];
    });
    if (!renamed) return std::nullopt;
    return ev_.eval(to_env, *renamed);
  }

  struct Restriction {
    Context ctx;
    std::vector<std::optional<std::size_t>> old_to_new;
    std::vector<std::optional<std::size_t>> new_to_old;
  };

  // The telescope `Δ | ·`: cohesive entries removed, indices remapped.
  Restriction restrict(const Context& ctx) {
    Restriction r;
    r.old_to_new.resize(ctx.depth());
    for (std::size_t i = 0; i < ctx.depth(); ++i) {
      const auto& e = ctx.entries[i];
      if (e.polarity != Polarity::Crisp) continue;
      auto type = transport(e.type, i, r.old_to_new, r.ctx.env);
      if (!type) error(ctx, Code::CrispnessViolation, "the type of crisp variable '" + e.name + "' is not crisp");
      r.ctx = r.ctx.bind(e.name, *type, Polarity::Crisp);
      r.old_to_new[i] = r.ctx.depth() - 1;
      r.new_to_old.push_back(i);
    }
    return r;
  }

  // `t` (crisp in `ctx`) with its variables renumbered for `r.ctx`.
  TermPtr restrict_term(const Context& ctx, const Restriction& r, const TermPtr& t) {
    auto out = rename_free(t, [&](std::size_t idx) -> std::optional<std::size_t> {
      auto level = r.old_to_new.at(ctx.depth() - 1 - idx);
      if (!level) return std::nullopt;
      return r.ctx.depth() - 1 - *level;
    });
    if (!out) throw std::logic_error("restrict_term: term is not crisp");
    return *out;
  }

  ValuePtr back(const Restriction& r, const Context& ctx, const ValuePtr& v) {
    auto out = transport(v, r.ctx.depth(), r.new_to_old, ctx.env);
    if (!out) throw std::logic_error("transport out of a crisp restriction failed");
    return *out;
  }

  void require_crisp(const Context& ctx, const TermPtr& t, Code code, const std::string& what) {
    auto d = crisp(ctx, t);
    if (d) return;
    error(ctx, code,
          what + " uses the cohesive variable '" + d.offender_name + "', but only crisp variables are allowed here");
  }

  Level infer_type(const Context& ctx, const TermPtr& t) {
    auto ty = infer(ctx, t);
    if (ty->tag != VTag::Universe) {
      SpanScope s(*this, t->span);
      error(ctx, Code::UniverseError, "expected a type, but '" + show_term(ctx, t) + "' has type " + show(ctx, ty));
    }
    return ty->level;
  }

  ValuePtr infer(const Context& ctx, const TermPtr& t) {
    SpanScope s(*this, t->span);
    auto ty = infer_core(ctx, t);
    if (opts_.observer && !ctx.has_definitions()) opts_.observer(to_telescope(ctx), t, ev_.quote(ctx.depth(), ty));
    return ty;
  }

  void check(const Context& ctx, const TermPtr& t, const ValuePtr& expected) {
    SpanScope s(*this, t->span);
    const auto& c = t->children;
    switch (t->tag) {
      case Tag::Lam: {
        if (expected->tag != VTag::Pi) {
          error(ctx, Code::TypeMismatch, "a function was given where " + show(ctx, expected) + " was expected");
        }
        auto inner = ctx.bind(t->binders.at(0), expected->a, Polarity::Cohesive);
        check(inner, c[0], ev_.instantiate(expected->clo, {inner.env.back()}));
        return;
      }
      case Tag::Pair: {
        if (expected->tag != VTag::Sigma) {
          error(ctx, Code::TypeMismatch, "a pair was given where " + show(ctx, expected) + " was expected");
        }
        check(ctx, c[0], expected->a);
        check(ctx, c[1], ev_.instantiate(expected->clo, {ev_.eval(ctx.env, c[0])}));
        return;
      }
      case Tag::Refl: {
        if (expected->tag != VTag::Id) break;
        check(ctx, c[0], expected->a);
        auto point = ev_.eval(ctx.env, c[0]);
        if (!conv(ctx, point, expected->b) || !conv(ctx, point, expected->c)) {
          error(ctx, Code::TypeMismatch,
                "refl " + show(ctx, point) + " does not inhabit " + show(ctx, expected) +
                    ": the endpoints are not judgmentally equal");
        }
        return;
      }
      case Tag::SharpIntro: {
        if (expected->tag != VTag::SharpTy) break;
        check(ctx.promoted(), c[0], expected->a);
        return;
      }
      case Tag::FlatIntro: {
        if (expected->tag != VTag::FlatTy) break;
        require_crisp(ctx, c[0], Code::CrispnessViolation, "the argument of ^flat");
        auto r = restrict(ctx);
        auto inner = transport(expected->a, ctx.depth(), r.old_to_new, r.ctx.env);
        if (!inner) error(ctx, Code::CrispnessViolation, "the expected ♭-type is not crisp");
        check(r.ctx, restrict_term(ctx, r, c[0]), *inner);
        return;
      }
      default: break;
    }
    auto actual = infer(ctx, t);
    if (conv(ctx, actual, expected)) return;
    Code code = Code::TypeMismatch;
    if (actual->tag == VTag::Universe && expected->tag == VTag::Universe) code = Code::UniverseError;
    error(ctx, code,
          "type mismatch: expected " + show(ctx, expected) + ", but '" + show_term(ctx, t) + "' has type " +
              show(ctx, actual));
  }

 private:
  struct SpanScope {
    SpanScope(Checker& c, Span s) : checker(c), saved(c.span_) {
      if (s.known()) c.span_ = s;
    }
    ~SpanScope() { checker.span_ = saved; }
    SpanScope(const SpanScope&) = delete;
    SpanScope& operator=(const SpanScope&) = delete;
    Checker& checker;
    Span saved;
  };

  ValuePtr constant_type(const Context& ctx, const std::string& name) {
    const ConstInfo* info = env_.lookup(name);
    if (info == nullptr) error(ctx, Code::ScopeError, "unknown constant '" + name + "'");
    return info->type_value ? info->type_value : ev_.eval({}, info->type);
  }

  ValuePtr infer_core(const Context& ctx, const TermPtr& t) {
    const auto& c = t->children;
    switch (t->tag) {
      case Tag::Var:
        if (t->index >= ctx.depth()) error(ctx, Code::ScopeError, "variable #" + std::to_string(t->index) + " is unbound");
        return ctx.entries[ctx.depth() - 1 - t->index].type;
      case Tag::Const: return constant_type(ctx, t->name);
      case Tag::Universe: return Evaluator::universe(t->level.succ());
      case Tag::Pi:
      case Tag::Sigma: {
        Level a = infer_type(ctx, c[0]);
        auto inner = ctx.bind(t->binders.at(0), ev_.eval(ctx.env, c[0]), Polarity::Cohesive);
        Level b = infer_type(inner, c[1]);
        return Evaluator::universe(max(a, b));
      }
      case Tag::Lam:
        error(ctx, Code::TypeMismatch,
              "cannot infer the type of '" + show_term(ctx, t) + "'; functions must appear where their type is known");
      case Tag::App: {
        if (c[0]->tag == Tag::Lam) {
          // (fun x. b) a: type b under x : A, then substitute a.
          auto arg_type = infer(ctx, c[1]);
          auto inner = ctx.bind(c[0]->binders.at(0), arg_type, Polarity::Cohesive);
          auto body_type = ev_.quote(inner.depth(), infer(inner, c[0]->children[0]));
          auto rho = ctx.env;
          rho.push_back(ev_.eval(ctx.env, c[1]));
          return ev_.eval(rho, body_type);
        }
        auto fn_type = infer(ctx, c[0]);
        if (fn_type->tag != VTag::Pi) {
          error(ctx, Code::NotAFunction,
                "'" + show_term(ctx, c[0]) + "' has type " + show(ctx, fn_type) + " and cannot be applied");
        }
        check(ctx, c[1], fn_type->a);
        return ev_.instantiate(fn_type->clo, {ev_.eval(ctx.env, c[1])});
      }
      case Tag::Pair: {
        auto a = infer(ctx, c[0]);
        auto b = infer(ctx, c[1]);
        auto v = std::make_shared<Value>();
        v->tag = VTag::Sigma;
        v->a = a;
        v->binder = "_";
        v->clo = Closure{ctx.env, shift(ev_.quote(ctx.depth(), b), 0, 1)};
        return v;
      }
      case Tag::Fst:
      case Tag::Snd: {
        auto p = infer(ctx, c[0]);
        if (p->tag != VTag::Sigma) {
          error(ctx, Code::NotAPair, "'" + show_term(ctx, c[0]) + "' has type " + show(ctx, p) + ", not a Σ-type");
        }
        if (t->tag == Tag::Fst) return p->a;
        return ev_.instantiate(p->clo, {ev_.fst(ev_.eval(ctx.env, c[0]))});
      }
      case Tag::Id: {
        Level l = infer_type(ctx, c[0]);
        auto a = ev_.eval(ctx.env, c[0]);
        check(ctx, c[1], a);
        check(ctx, c[2], a);
        return Evaluator::universe(l);
      }
      case Tag::Refl: {
        auto a = infer(ctx, c[0]);
        auto point = ev_.eval(ctx.env, c[0]);
        auto v = std::make_shared<Value>();
        v->tag = VTag::Id;
        v->a = a;
        v->b = point;
        v->c = point;
        return v;
      }
      case Tag::J: return infer_j(ctx, t);
      case Tag::Unit: return Evaluator::universe(Level{0});
      case Tag::Star: return std::make_shared<Value>();
      case Tag::SharpTy: return Evaluator::universe(infer_type(ctx.promoted(), c[0]));
      case Tag::SharpIntro: return make_unary(VTag::SharpTy, infer(ctx.promoted(), c[0]));
      case Tag::SharpElim: {
        auto d = crisp(ctx, c[0]);
        if (!d) {
          Code code = c[0]->tag == Tag::Var ? Code::SharpElimCohesive : Code::CrispnessViolation;
          error(ctx, code,
                "_sharp needs a crisp subject, but '" + show_term(ctx, c[0]) + "' uses the cohesive variable '" +
                    d.offender_name + "'");
        }
        auto ty = infer(ctx, c[0]);
        if (ty->tag != VTag::SharpTy) {
          error(ctx, Code::TypeMismatch,
                "_sharp applied to '" + show_term(ctx, c[0]) + "' of type " + show(ctx, ty) + ", not a ♯-type");
        }
        return ty->a;
      }
      case Tag::FlatTy: {
        require_crisp(ctx, c[0], Code::FlatOnCohesiveType, "the type under Flat");
        auto r = restrict(ctx);
        return Evaluator::universe(infer_type(r.ctx, restrict_term(ctx, r, c[0])));
      }
      case Tag::FlatIntro: {
        require_crisp(ctx, c[0], Code::CrispnessViolation, "the argument of ^flat");
        auto r = restrict(ctx);
        auto ty = infer(r.ctx, restrict_term(ctx, r, c[0]));
        return make_unary(VTag::FlatTy, back(r, ctx, ty));
      }
      case Tag::FlatLet: return infer_flat_let(ctx, t);
    }
    throw std::logic_error("infer: unknown tag");
  }

  ValuePtr infer_j(const Context& ctx, const TermPtr& t) {
    const auto& c = t->children;
    auto proof_type = infer(ctx, c[4]);
    if (proof_type->tag != VTag::Id) {
      error(ctx, Code::TypeMismatch,
            "J eliminates an identification, but '" + show_term(ctx, c[4]) + "' has type " + show(ctx, proof_type));
    }
    auto a = proof_type->a;
    check(ctx, c[2], a);
    check(ctx, c[3], a);
    auto lhs = ev_.eval(ctx.env, c[2]);
    auto rhs = ev_.eval(ctx.env, c[3]);
    if (!conv(ctx, lhs, proof_type->b) || !conv(ctx, rhs, proof_type->c)) {
      error(ctx, Code::TypeMismatch,
            "J endpoints " + show(ctx, lhs) + " and " + show(ctx, rhs) + " do not match the path type " +
                show(ctx, proof_type));
    }
    // Motive over x y : A, p : Id A x y.
    auto cx = ctx.bind(t->binders.at(0), a, Polarity::Cohesive);
    auto cy = cx.bind(t->binders.at(1), a, Polarity::Cohesive);
    auto id = std::make_shared<Value>();
    id->tag = VTag::Id;
    id->a = a;
    id->b = cy.env[cy.depth() - 2];
    id->c = cy.env.back();
    auto cp = cy.bind(t->binders.at(2), id, Polarity::Cohesive);
    motive_is_type(cp, c[0]);
    Closure motive{ctx.env, c[0]};
    auto base_ctx = ctx.bind(t->binders.at(3), a, Polarity::Cohesive);
    auto x = base_ctx.env.back();
    check(base_ctx, c[1], ev_.instantiate(motive, {x, x, make_unary(VTag::Refl, x)}));
    return ev_.instantiate(motive, {lhs, rhs, ev_.eval(ctx.env, c[4])});
  }

  void motive_is_type(const Context& ctx, const TermPtr& motive) {
    auto ty = infer(ctx, motive);
    if (ty->tag != VTag::Universe) {
      SpanScope s(*this, motive->span);
      error(ctx, Code::MotiveMismatch,
            "the motive '" + show_term(ctx, motive) + "' must be a type family, but has type " + show(ctx, ty));
    }
  }

  ValuePtr infer_flat_let(const Context& ctx, const TermPtr& t) {
    const auto& c = t->children;
    auto scrutinee_type = infer(ctx, c[1]);
    if (scrutinee_type->tag != VTag::FlatTy) {
      SpanScope s(*this, c[1]->span);
      error(ctx, Code::TypeMismatch,
            "letflat scrutinee '" + show_term(ctx, c[1]) + "' has type " + show(ctx, scrutinee_type) +
                ", not a ♭-type");
    }
    auto motive_ctx = ctx.bind(t->binders.at(0), scrutinee_type, Polarity::Cohesive);
    motive_is_type(motive_ctx, c[0]);
    Closure motive{ctx.env, c[0]};
    auto body_ctx = ctx.bind(t->binders.at(1), scrutinee_type->a, Polarity::Crisp);
    check(body_ctx, c[2], ev_.instantiate(motive, {make_unary(VTag::FlatIntro, body_ctx.env.back())}));
    return ev_.instantiate(motive, {ev_.eval(ctx.env, c[1])});
  }

  const Environment& env_;
  Evaluator ev_;
  const CheckOptions& opts_;
  Span span_;
};

// Runs `f`, turning escaped diagnostics and internal faults into a Diagnostic.
template <typename F>
auto guarded(F&& f) -> Result<decltype(f())> {
  try {
    return f();
  } catch (const DiagnosticError& e) {
    return e.diagnostic();
  } catch (const std::logic_error& e) {
    Diagnostic d;
    d.code = Code::TypeMismatch;
    d.message = std::string("internal error: ") + e.what();
    return d;
  }
}

ValuePtr neutral_app(const std::string& head, const std::vector<ValuePtr>& args) {
  auto v = std::make_shared<Value>();
  v->tag = VTag::Neutral;
  v->head.global = true;
  v->head.name = head;
  for (const auto& a : args) {
    Elim e;
    e.tag = ElimTag::App;
    e.arg = a;
    v->spine.push_back(std::move(e));
  }
  return v;
}

[[noreturn]] void ill_formed(const std::string& message) { fail(Code::RewriteIllFormed, message); }

// Builds the pattern-variable context of a rewrite rule. In the first pass
// constructor parameters are flexible and get solved by unification; in
// the second pass solved parameters become defined entries.
struct PatternScope {
  Context ctx;
  ValuePtr lhs_type;
};

PatternScope pattern_scope(Checker& checker, const Environment& env, const RewriteRule& rule, FlexSet& flex,
                           bool second_pass) {
  auto& ev = checker.ev();
  const ConstInfo* head = env.lookup(rule.lhs.head);
  PatternScope out;
  ValuePtr cur = head->type_value ? head->type_value : ev.eval({}, head->type);
  // Level of each solved variable in pass one → its solution quoted at that level.
  for (const auto& arg : rule.lhs.args) {
    if (cur->tag != VTag::Pi) ill_formed("'" + rule.lhs.head + "' is applied to too many pattern arguments");
    ValuePtr value;
    if (arg.kind == PatternArg::Kind::Variable) {
      out.ctx = out.ctx.bind(arg.name, cur->a, Polarity::Cohesive);
      value = out.ctx.env.back();
    } else {
      const ConstInfo* ctor = env.lookup(arg.name);
      if (ctor == nullptr || ctor->kind != ConstKind::Postulate) {
        ill_formed("constructor '" + arg.name + "' in a pattern must be a postulate");
      }
      ValuePtr ctype = ctor->type_value ? ctor->type_value : ev.eval({}, ctor->type);
      std::vector<ValuePtr> args;
      std::vector<std::size_t> levels;
      for (const auto& v : arg.vars) {
        if (ctype->tag != VTag::Pi) ill_formed("constructor '" + arg.name + "' is applied to too many variables");
        std::size_t level = out.ctx.depth();
        auto solved = flex.solutions.find(level);
        if (second_pass && solved != flex.solutions.end()) {
          auto sol = ev.eval(out.ctx.env, ev.quote(level, solved->second));
          out.ctx = out.ctx.define(v, ctype->a, sol);
        } else {
          out.ctx = out.ctx.bind(v, ctype->a, Polarity::Cohesive);
        }
        levels.push_back(level);
        args.push_back(out.ctx.env.back());
        ctype = ev.instantiate(ctype->clo, {args.back()});
      }
      ev.reset_fuel();
      bool fits;
      if (second_pass) {
        fits = ev.conv(out.ctx.depth(), ctype, cur->a);
      } else {
        flex.flexible.insert(flex.flexible.end(), levels.begin(), levels.end());
        fits = ev.unify(out.ctx.depth(), ctype, cur->a, flex);
      }
      if (!fits) {
        ill_formed("constructor '" + arg.name + "' builds " + checker.show(out.ctx, ctype) + ", but '" +
                   rule.lhs.head + "' expects " + checker.show(out.ctx, cur->a) + " here");
      }
      value = neutral_app(arg.name, args);
    }
    cur = ev.instantiate(cur->clo, {value});
  }
  out.lhs_type = cur;
  return out;
}

Environment admit_rewrite(const Environment& env, const RewriteRule& rule, const CheckOptions& opts) {
  if (env.contains(rule.name)) fail(Code::DuplicateName, "'" + rule.name + "' is already declared");
  const ConstInfo* head = env.lookup(rule.lhs.head);
  if (head == nullptr) fail(Code::ScopeError, "unknown constant '" + rule.lhs.head + "'");
  if (head->kind != ConstKind::Postulate) ill_formed("rewrite head '" + rule.lhs.head + "' is not a postulate");
  auto vars = rule.lhs.variables();
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (!seen.insert(v).second) ill_formed("pattern variable '" + v + "' occurs more than once");
  }
  Checker checker(env, opts);
  FlexSet flex;
  pattern_scope(checker, env, rule, flex, false);
  auto scope = pattern_scope(checker, env, rule, flex, true);
  try {
    checker.check(scope.ctx, rule.rhs, scope.lhs_type);
  } catch (const DiagnosticError& e) {
    if (e.diagnostic().code == Code::FuelExhausted) throw;
    auto d = e.diagnostic();
    d.message = "right-hand side of '" + rule.name + "' does not have the left-hand side's type: " + d.message;
    d.code = Code::RewriteIllFormed;
    throw DiagnosticError(std::move(d));
  }
  Environment out = env;
  out.add_rewrite(rule);
  return out;
}

}  // namespace

Telescope promote(const Telescope& ctx) {
  auto entries = ctx.entries();
  for (auto& e : entries) e.polarity = Polarity::Crisp;
  return Telescope(std::move(entries));
}

CrispDecision is_crisp(const Telescope& ctx, const TermPtr& t) {
  CrispDecision d;
  for (auto idx : free_vars(t)) {
    if (idx >= ctx.size()) throw std::logic_error("is_crisp: variable out of scope");
    const auto& e = ctx.at_index(idx);
    if (e.polarity != Polarity::Crisp) {
      d.crisp = false;
      d.offender = idx;
      d.offender_name = e.name;
      return d;
    }
  }
  return d;
}

std::optional<Telescope> crisp_restriction(const Telescope& ctx) {
  std::vector<Entry> out;
  std::vector<std::optional<std::size_t>> map(ctx.size());
  for (std::size_t level = 0; level < ctx.size(); ++level) {
    const auto& e = ctx.at_level(level);
    if (e.polarity != Polarity::Crisp) continue;
    std::size_t new_depth = out.size();
    auto type = rename_free(e.type, [&](std::size_t idx) -> std::optional<std::size_t> {
      std::size_t src = level - 1 - idx;
      if (!map[src]) return std::nullopt;
      return new_depth - 1 - *map[src];
    });
    if (!type) return std::nullopt;
    map[level] = new_depth;
    out.push_back({e.name, *type, Polarity::Crisp});
  }
  return Telescope(std::move(out));
}

Result<TermPtr> infer(const Environment& env, const Telescope& ctx, const TermPtr& t, const CheckOptions& opts) {
  return guarded([&] {
    Checker checker(env, opts);
    auto c = checker.from_telescope(ctx);
    auto ty = checker.infer(c, t);
    return checker.ev().quote(c.depth(), ty);
  });
}

std::optional<Diagnostic> check(const Environment& env, const Telescope& ctx, const TermPtr& t,
                                const TermPtr& expected, const CheckOptions& opts) {
  auto r = guarded([&] {
    Checker checker(env, opts);
    auto c = checker.from_telescope(ctx);
    checker.check(c, t, checker.ev().eval(c.env, expected));
    return true;
  });
  if (r.ok()) return std::nullopt;
  return r.error();
}

Result<bool> convertible(const Environment& env, const Telescope& ctx, const TermPtr& lhs, const TermPtr& rhs,
                         const TermPtr& type, const CheckOptions& opts) {
  return guarded([&] {
    Checker checker(env, opts);
    auto c = checker.from_telescope(ctx);
    auto ty = checker.ev().eval(c.env, type);
    checker.check(c, lhs, ty);
    checker.check(c, rhs, ty);
    return checker.conv(c, checker.ev().eval(c.env, lhs), checker.ev().eval(c.env, rhs));
  });
}

Result<TermPtr> normalize(const Environment& env, const Telescope& ctx, const TermPtr& t, const CheckOptions& opts) {
  return guarded([&] {
    Checker checker(env, opts);
    auto c = checker.from_telescope(ctx);
    return checker.ev().normalize(c.env, t);
  });
}

Result<Environment> check_declaration(const Environment& env, const Declaration& decl, const CheckOptions& opts) {
  auto r = guarded([&]() -> Environment {
    if (const auto* rule = std::get_if<RewriteRule>(&decl.item)) return admit_rewrite(env, *rule, opts);
    const std::string& name = decl.name();
    if (env.contains(name)) fail(Code::DuplicateName, "'" + name + "' is already declared");
    Checker checker(env, opts);
    Context empty;
    ConstInfo info;
    info.name = name;
    if (const auto* def = std::get_if<Definition>(&decl.item)) {
      checker.infer_type(empty, def->type);
      info.kind = ConstKind::Definition;
      info.type = def->type;
      info.body = def->body;
      info.type_value = checker.ev().eval({}, def->type);
      checker.check(empty, def->body, info.type_value);
      checker.ev().reset_fuel();
      info.body_value = checker.ev().eval({}, def->body);
    } else {
      const auto& post = std::get<Postulate>(decl.item);
      checker.infer_type(empty, post.type);
      info.kind = ConstKind::Postulate;
      info.type = post.type;
      info.type_value = checker.ev().eval({}, post.type);
    }
    Environment out = env;
    out.add_constant(std::move(info));
    return out;
  });
  if (!r.ok() && !r.error().span.known() && decl.span.line != 0) {
    auto d = r.error();
    d.span = Span{decl.span.line, decl.span.col, decl.span.line, decl.span.col};
    return d;
  }
  return r;
}

Result<Environment> check_rewrite(const Environment& env, const RewriteRule& rule, const CheckOptions& opts) {
  return guarded([&] { return admit_rewrite(env, rule, opts); });
}

}  // namespace cohesive
