#include "cohesive/equality.hpp"

#include <algorithm>
#include <stdexcept>

#include "cohesive/diagnostic.hpp"

namespace cohesive {

namespace {

// Evaluation recursion deeper than this is treated like running out of fuel
// rather than risking the native stack.
constexpr std::size_t kMaxDepth = 12'000;

std::shared_ptr<Value> fresh(VTag tag) {
  auto v = std::make_shared<Value>();
  v->tag = tag;
  return v;
}

ValuePtr unary(VTag tag, ValuePtr a) {
  auto v = fresh(tag);
  v->a = std::move(a);
  return v;
}

struct DepthGuard {
  explicit DepthGuard(std::size_t& d) : depth(d) {
    if (++depth > kMaxDepth) {
      --depth;
      fuel_exhausted("recursion limit reached during reduction");
    }
  }
  ~DepthGuard() { --depth; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;
  std::size_t& depth;
};

[[noreturn]] void stuck(const char* what) { throw std::logic_error(std::string("ill-typed elimination: ") + what); }

bool all_apps(const std::vector<Elim>& spine) {
  return std::all_of(spine.begin(), spine.end(), [](const Elim& e) { return e.tag == ElimTag::App; });
}

}  // namespace

void fuel_exhausted(const std::string& why) { fail(Code::FuelExhausted, why); }

bool FlexSet::is_flex(std::size_t level) const {
  return std::find(flexible.begin(), flexible.end(), level) != flexible.end();
}

std::optional<RewriteMatch> match_rewrite(const RewriteIndex& index, const std::string& head,
                                          const std::vector<Elim>& spine) {
  if (!all_apps(spine)) return std::nullopt;
  for (const auto& rule : index.rules_for(head)) {
    if (rule.lhs.args.size() != spine.size()) continue;
    RewriteMatch m;
    m.rule = &rule;
    bool ok = true;
    for (std::size_t i = 0; ok && i < spine.size(); ++i) {
      const auto& pat = rule.lhs.args[i];
      const auto& arg = spine[i].arg;
      if (pat.kind == PatternArg::Kind::Variable) {
        m.assignment.push_back(arg);
        continue;
      }
      ok = arg->tag == VTag::Neutral && arg->head.global && arg->head.name == pat.name &&
           arg->spine.size() == pat.vars.size() && all_apps(arg->spine);
      if (ok) {
        for (const auto& e : arg->spine) m.assignment.push_back(e.arg);
      }
    }
    if (ok) return m;
  }
  return std::nullopt;
}

Evaluator::Evaluator(const Environment& env, std::uint64_t fuel) : env_(env), fuel_(fuel), remaining_(fuel) {}

void Evaluator::tick() {
  if (remaining_ == 0) fuel_exhausted("reduction budget of " + std::to_string(fuel_) + " steps exhausted");
  --remaining_;
}

ValuePtr Evaluator::var(std::size_t level) {
  auto v = fresh(VTag::Neutral);
  v->head.level = level;
  return v;
}

ValuePtr Evaluator::universe(Level level) {
  auto v = fresh(VTag::Universe);
  v->level = level;
  return v;
}

ValuePtr Evaluator::constant(const std::string& name) {
  const ConstInfo* info = env_.lookup(name);
  if (info == nullptr) fail(Code::ScopeError, "unknown constant '" + name + "'");
  if (info->kind == ConstKind::Definition) {
    return info->body_value ? info->body_value : eval({}, info->body);
  }
  auto v = fresh(VTag::Neutral);
  v->head.global = true;
  v->head.name = name;
  if (auto m = match_rewrite(env_.rewrites(), name, {})) return eval(m->assignment, m->rule->rhs);
  return v;
}

ValuePtr Evaluator::push(const ValuePtr& neutral, Elim e) {
  auto v = std::make_shared<Value>(*neutral);
  bool was_app = e.tag == ElimTag::App;
  v->spine.push_back(std::move(e));
  if (was_app && v->head.global && env_.rewrites().has_rules(v->head.name)) {
    if (auto m = match_rewrite(env_.rewrites(), v->head.name, v->spine)) {
      tick();
      return eval(m->assignment, m->rule->rhs);
    }
  }
  return v;
}

ValuePtr Evaluator::instantiate(const Closure& c, const std::vector<ValuePtr>& args) {
  Valuation rho = c.env;
  rho.insert(rho.end(), args.begin(), args.end());
  return eval(rho, c.body);
}

ValuePtr Evaluator::apply(const ValuePtr& f, const ValuePtr& arg) {
  tick();
  if (f->tag == VTag::Lam) return instantiate(f->clo, {arg});
  if (f->tag != VTag::Neutral) stuck("application of a non-function");
  Elim e;
  e.tag = ElimTag::App;
  e.arg = arg;
  return push(f, std::move(e));
}

ValuePtr Evaluator::fst(const ValuePtr& p) {
  if (p->tag == VTag::Pair) return p->a;
  if (p->tag != VTag::Neutral) stuck("first projection of a non-pair");
  Elim e;
  e.tag = ElimTag::Fst;
  return push(p, std::move(e));
}

ValuePtr Evaluator::snd(const ValuePtr& p) {
  if (p->tag == VTag::Pair) return p->b;
  if (p->tag != VTag::Neutral) stuck("second projection of a non-pair");
  Elim e;
  e.tag = ElimTag::Snd;
  return push(p, std::move(e));
}

ValuePtr Evaluator::sharp_intro(const ValuePtr& v) {
  // No (n_♯)^♯ contraction here: n may only be typable under promotion, so
  // the contracted normal form could be ill typed. conv has ♯-η instead.
  return unary(VTag::SharpIntro, v);
}

ValuePtr Evaluator::sharp_elim(const ValuePtr& v) {
  if (v->tag == VTag::SharpIntro) return v->a;
  if (v->tag != VTag::Neutral) stuck("_sharp of a non-sharp value");
  Elim e;
  e.tag = ElimTag::SharpElim;
  return push(v, std::move(e));
}

ValuePtr Evaluator::flat_let(const Closure& motive, const Closure& body, const ValuePtr& scrutinee,
                             std::vector<std::string> names) {
  tick();
  if (scrutinee->tag == VTag::FlatIntro) return instantiate(body, {scrutinee->a});
  if (scrutinee->tag != VTag::Neutral) stuck("letflat on a non-flat value");
  Elim e;
  e.tag = ElimTag::FlatLet;
  e.motive = motive;
  e.body = body;
  e.names = std::move(names);
  return push(scrutinee, std::move(e));
}

ValuePtr Evaluator::j_elim(const Closure& motive, const Closure& base, const ValuePtr& lhs, const ValuePtr& rhs,
                           const ValuePtr& proof, std::vector<std::string> names) {
  tick();
  if (proof->tag == VTag::Refl) return instantiate(base, {lhs});
  if (proof->tag != VTag::Neutral) stuck("J on a non-path");
  Elim e;
  e.tag = ElimTag::J;
  e.motive = motive;
  e.body = base;
  e.lhs = lhs;
  e.rhs = rhs;
  e.names = std::move(names);
  return push(proof, std::move(e));
}

ValuePtr Evaluator::eval(const Valuation& rho, const TermPtr& t) {
  DepthGuard guard(depth_guard_);
  tick();
  const auto& c = t->children;
  auto binder = [&](std::size_t i) { return i < t->binders.size() ? t->binders[i] : std::string("x"); };
  switch (t->tag) {
    case Tag::Var:
      if (t->index >= rho.size()) throw std::logic_error("eval: variable out of scope");
      return rho[rho.size() - 1 - t->index];
    case Tag::Const: return constant(t->name);
    case Tag::Universe: return universe(t->level);
    case Tag::Pi:
    case Tag::Sigma: {
      auto v = fresh(t->tag == Tag::Pi ? VTag::Pi : VTag::Sigma);
      v->a = eval(rho, c[0]);
      v->clo = Closure{rho, c[1]};
      v->binder = binder(0);
      return v;
    }
    case Tag::Lam: {
      auto v = fresh(VTag::Lam);
      v->clo = Closure{rho, c[0]};
      v->binder = binder(0);
      return v;
    }
    case Tag::App: return apply(eval(rho, c[0]), eval(rho, c[1]));
    case Tag::Pair: {
      auto v = fresh(VTag::Pair);
      v->a = eval(rho, c[0]);
      v->b = eval(rho, c[1]);
      return v;
    }
    case Tag::Fst: return fst(eval(rho, c[0]));
    case Tag::Snd: return snd(eval(rho, c[0]));
    case Tag::Id: {
      auto v = fresh(VTag::Id);
      v->a = eval(rho, c[0]);
      v->b = eval(rho, c[1]);
      v->c = eval(rho, c[2]);
      return v;
    }
    case Tag::Refl: return unary(VTag::Refl, eval(rho, c[0]));
    case Tag::J: {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < 4; ++i) names.push_back(binder(i));
      return j_elim(Closure{rho, c[0]}, Closure{rho, c[1]}, eval(rho, c[2]), eval(rho, c[3]), eval(rho, c[4]),
                    std::move(names));
    }
    case Tag::Unit: return fresh(VTag::Unit);
    case Tag::Star: return fresh(VTag::Star);
    case Tag::SharpTy: return unary(VTag::SharpTy, eval(rho, c[0]));
    case Tag::SharpIntro: return sharp_intro(eval(rho, c[0]));
    case Tag::SharpElim: return sharp_elim(eval(rho, c[0]));
    case Tag::FlatTy: return unary(VTag::FlatTy, eval(rho, c[0]));
    case Tag::FlatIntro: return unary(VTag::FlatIntro, eval(rho, c[0]));
    case Tag::FlatLet:
      return flat_let(Closure{rho, c[0]}, Closure{rho, c[2]}, eval(rho, c[1]), {binder(0), binder(1)});
  }
  throw std::logic_error("eval: unknown tag");
}

TermPtr Evaluator::quote(std::size_t depth, const ValuePtr& v) {
  DepthGuard guard(depth_guard_);
  auto bound = [&](const Closure& clo, std::size_t n) {
    std::vector<ValuePtr> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(var(depth + i));
    return quote(depth + n, instantiate(clo, args));
  };
  switch (v->tag) {
    case VTag::Universe: return mk::universe(v->level);
    case VTag::Pi: return mk::pi(v->binder, quote(depth, v->a), bound(v->clo, 1));
    case VTag::Sigma: return mk::sigma(v->binder, quote(depth, v->a), bound(v->clo, 1));
    case VTag::Lam: return mk::lam(v->binder, bound(v->clo, 1));
    case VTag::Pair: return mk::pair(quote(depth, v->a), quote(depth, v->b));
    case VTag::Id: return mk::id(quote(depth, v->a), quote(depth, v->b), quote(depth, v->c));
    case VTag::Refl: return mk::refl(quote(depth, v->a));
    case VTag::Unit: return mk::unit();
    case VTag::Star: return mk::star();
    case VTag::SharpTy: return mk::sharp(quote(depth, v->a));
    case VTag::SharpIntro: return mk::sharp_intro(quote(depth, v->a));
    case VTag::FlatTy: return mk::flat(quote(depth, v->a));
    case VTag::FlatIntro: return mk::flat_intro(quote(depth, v->a));
    case VTag::Neutral: break;
  }
  TermPtr t;
  if (v->head.global) {
    t = mk::constant(v->head.name);
  } else {
    if (v->head.level >= depth) throw std::logic_error("quote: level out of scope");
    t = mk::var(depth - 1 - v->head.level);
  }
  for (const auto& e : v->spine) {
    switch (e.tag) {
      case ElimTag::App: t = mk::app(t, quote(depth, e.arg)); break;
      case ElimTag::Fst: t = mk::fst(t); break;
      case ElimTag::Snd: t = mk::snd(t); break;
      case ElimTag::SharpElim: t = mk::sharp_elim(t); break;
      case ElimTag::J: {
        auto names = e.names;
        names.resize(4, "x");
        t = mk::j({names[0], names[1], names[2]}, bound(e.motive, 3), names[3], bound(e.body, 1),
                  quote(depth, e.lhs), quote(depth, e.rhs), t);
        break;
      }
      case ElimTag::FlatLet: {
        auto names = e.names;
        names.resize(2, "x");
        t = mk::flat_let(names[0], bound(e.motive, 1), t, names[1], bound(e.body, 1));
        break;
      }
    }
  }
  return t;
}

bool Evaluator::conv(std::size_t depth, const ValuePtr& a, const ValuePtr& b) {
  return conv_impl(depth, a, b, nullptr);
}

bool Evaluator::unify(std::size_t depth, const ValuePtr& a, const ValuePtr& b, FlexSet& flex) {
  return conv_impl(depth, a, b, &flex);
}

bool Evaluator::conv_impl(std::size_t depth, const ValuePtr& a, const ValuePtr& b, FlexSet* flex) {
  DepthGuard guard(depth_guard_);
  tick();
  if (a == b) return true;

  if (flex != nullptr) {
    // A bare flexible variable on either side: solve it or compare against its solution.
    for (int side = 0; side < 2; ++side) {
      const ValuePtr& x = side == 0 ? a : b;
      const ValuePtr& other = side == 0 ? b : a;
      if (x->tag != VTag::Neutral || x->head.global || !x->spine.empty() || !flex->is_flex(x->head.level)) continue;
      auto it = flex->solutions.find(x->head.level);
      if (it != flex->solutions.end()) return conv_impl(depth, it->second, other, flex);
      if (other->tag == VTag::Neutral && !other->head.global && other->spine.empty() &&
          other->head.level == x->head.level) {
        return true;
      }
      // The solution may only mention variables bound before the flexible one.
      auto t = quote(depth, other);
      for (auto idx : free_vars(t)) {
        if (depth - 1 - idx >= x->head.level) return false;
      }
      flex->solutions[x->head.level] = other;
      return true;
    }
  }

  auto is_neutral = [](const ValuePtr& v) { return v->tag == VTag::Neutral; };

  if (a->tag == VTag::Lam || b->tag == VTag::Lam) {
    if (!(a->tag == VTag::Lam || is_neutral(a)) || !(b->tag == VTag::Lam || is_neutral(b))) return false;
    auto x = var(depth);
    return conv_impl(depth + 1, apply(a, x), apply(b, x), flex);
  }
  if (a->tag == VTag::Pair || b->tag == VTag::Pair) {
    if (!(a->tag == VTag::Pair || is_neutral(a)) || !(b->tag == VTag::Pair || is_neutral(b))) return false;
    return conv_impl(depth, fst(a), fst(b), flex) && conv_impl(depth, snd(a), snd(b), flex);
  }
  if (a->tag == VTag::SharpIntro && is_neutral(b)) return conv_impl(depth, a->a, sharp_elim(b), flex);
  if (b->tag == VTag::SharpIntro && is_neutral(a)) return conv_impl(depth, sharp_elim(a), b->a, flex);

  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case VTag::Universe: return a->level == b->level;
    case VTag::Pi:
    case VTag::Sigma: {
      if (!conv_impl(depth, a->a, b->a, flex)) return false;
      auto x = var(depth);
      return conv_impl(depth + 1, instantiate(a->clo, {x}), instantiate(b->clo, {x}), flex);
    }
    case VTag::Id:
      return conv_impl(depth, a->a, b->a, flex) && conv_impl(depth, a->b, b->b, flex) &&
             conv_impl(depth, a->c, b->c, flex);
    case VTag::Refl:
    case VTag::SharpTy:
    case VTag::SharpIntro:
    case VTag::FlatTy:
    case VTag::FlatIntro: return conv_impl(depth, a->a, b->a, flex);
    case VTag::Unit:
    case VTag::Star: return true;
    case VTag::Neutral: return conv_spine(depth, *a, *b, flex);
    case VTag::Lam:
    case VTag::Pair: break;
  }
  return false;
}

bool Evaluator::conv_spine(std::size_t depth, const Value& a, const Value& b, FlexSet* flex) {
  if (a.head.global != b.head.global) return false;
  if (a.head.global ? a.head.name != b.head.name : a.head.level != b.head.level) return false;
  if (a.spine.size() != b.spine.size()) return false;
  auto vars = [&](std::size_t n) {
    std::vector<ValuePtr> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(var(depth + i));
    return out;
  };
  for (std::size_t i = 0; i < a.spine.size(); ++i) {
    const Elim& x = a.spine[i];
    const Elim& y = b.spine[i];
    if (x.tag != y.tag) return false;
    switch (x.tag) {
      case ElimTag::App:
        if (!conv_impl(depth, x.arg, y.arg, flex)) return false;
        break;
      case ElimTag::Fst:
      case ElimTag::Snd:
      case ElimTag::SharpElim: break;
      case ElimTag::J:
        if (!conv_impl(depth + 3, instantiate(x.motive, vars(3)), instantiate(y.motive, vars(3)), flex)) return false;
        if (!conv_impl(depth + 1, instantiate(x.body, vars(1)), instantiate(y.body, vars(1)), flex)) return false;
        if (!conv_impl(depth, x.lhs, y.lhs, flex) || !conv_impl(depth, x.rhs, y.rhs, flex)) return false;
        break;
      case ElimTag::FlatLet:
        if (!conv_impl(depth + 1, instantiate(x.motive, vars(1)), instantiate(y.motive, vars(1)), flex)) return false;
        if (!conv_impl(depth + 1, instantiate(x.body, vars(1)), instantiate(y.body, vars(1)), flex)) return false;
        break;
    }
  }
  return true;
}

}  // namespace cohesive
