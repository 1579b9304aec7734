#include "cohesive/syntax.hpp"

#include <stdexcept>

namespace cohesive {

const char* polarity_name(Polarity p) { return p == Polarity::Crisp ? "crisp" : "cohesive"; }

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::Var: return "Var";
    case Tag::Const: return "Const";
    case Tag::Universe: return "Universe";
    case Tag::Pi: return "Pi";
    case Tag::Lam: return "Lam";
    case Tag::App: return "App";
    case Tag::Sigma: return "Sigma";
    case Tag::Pair: return "Pair";
    case Tag::Fst: return "Fst";
    case Tag::Snd: return "Snd";
    case Tag::Id: return "Id";
    case Tag::Refl: return "Refl";
    case Tag::J: return "J";
    case Tag::Unit: return "Unit";
    case Tag::Star: return "Star";
    case Tag::SharpTy: return "SharpTy";
    case Tag::SharpIntro: return "SharpIntro";
    case Tag::SharpElim: return "SharpElim";
    case Tag::FlatTy: return "FlatTy";
    case Tag::FlatIntro: return "FlatIntro";
    case Tag::FlatLet: return "FlatLet";
  }
  return "?";
}

std::size_t binder_count(Tag tag, std::size_t child) {
  switch (tag) {
    case Tag::Pi:
    case Tag::Sigma: return child == 1 ? 1 : 0;
    case Tag::Lam: return 1;
    case Tag::J: return child == 0 ? 3 : child == 1 ? 1 : 0;
    case Tag::FlatLet: return child == 1 ? 0 : 1;
    default: return 0;
  }
}

Polarity binder_polarity(Tag tag, std::size_t child) {
  return tag == Tag::FlatLet && child == 2 ? Polarity::Crisp : Polarity::Cohesive;
}

bool alpha_equal(const Term& a, const Term& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case Tag::Var:
      if (a.index != b.index) return false;
      break;
    case Tag::Const:
      if (a.name != b.name) return false;
      break;
    case Tag::Universe:
      if (a.level != b.level) return false;
      break;
    default: break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!alpha_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return alpha_equal(*a, *b);
}

namespace mk {
namespace {

TermPtr node(Tag tag, std::vector<TermPtr> children = {}, std::vector<std::string> binders = {}) {
  auto t = std::make_shared<Term>();
  t->tag = tag;
  t->children = std::move(children);
  t->binders = std::move(binders);
  return t;
}

}  // namespace

TermPtr var(std::size_t index) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Var;
  t->index = index;
  return t;
}

TermPtr constant(std::string name) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Const;
  t->name = std::move(name);
  return t;
}

TermPtr universe(Level level) {
  auto t = std::make_shared<Term>();
  t->tag = Tag::Universe;
  t->level = level;
  return t;
}

TermPtr pi(std::string name, TermPtr domain, TermPtr codomain) {
  return node(Tag::Pi, {std::move(domain), std::move(codomain)}, {std::move(name)});
}

TermPtr arrow(TermPtr domain, TermPtr codomain) { return pi("_", std::move(domain), shift(codomain, 0, 1)); }

TermPtr lam(std::string name, TermPtr body) { return node(Tag::Lam, {std::move(body)}, {std::move(name)}); }

TermPtr app(TermPtr fn, TermPtr arg) { return node(Tag::App, {std::move(fn), std::move(arg)}); }

TermPtr apps(TermPtr fn, std::vector<TermPtr> args) {
  for (auto& a : args) fn = app(std::move(fn), std::move(a));
  return fn;
}

TermPtr sigma(std::string name, TermPtr first, TermPtr second) {
  return node(Tag::Sigma, {std::move(first), std::move(second)}, {std::move(name)});
}

TermPtr pair(TermPtr fst, TermPtr snd) { return node(Tag::Pair, {std::move(fst), std::move(snd)}); }
TermPtr fst(TermPtr p) { return node(Tag::Fst, {std::move(p)}); }
TermPtr snd(TermPtr p) { return node(Tag::Snd, {std::move(p)}); }

TermPtr id(TermPtr type, TermPtr lhs, TermPtr rhs) {
  return node(Tag::Id, {std::move(type), std::move(lhs), std::move(rhs)});
}

TermPtr refl(TermPtr point) { return node(Tag::Refl, {std::move(point)}); }

TermPtr j(std::vector<std::string> motive_names, TermPtr motive, std::string base_name, TermPtr base, TermPtr lhs,
          TermPtr rhs, TermPtr proof) {
  if (motive_names.size() != 3) throw std::logic_error("J motive binds three variables");
  motive_names.push_back(std::move(base_name));
  return node(Tag::J, {std::move(motive), std::move(base), std::move(lhs), std::move(rhs), std::move(proof)},
              std::move(motive_names));
}

TermPtr unit() { return node(Tag::Unit); }
TermPtr star() { return node(Tag::Star); }
TermPtr sharp(TermPtr type) { return node(Tag::SharpTy, {std::move(type)}); }
TermPtr sharp_intro(TermPtr inner) { return node(Tag::SharpIntro, {std::move(inner)}); }
TermPtr sharp_elim(TermPtr inner) { return node(Tag::SharpElim, {std::move(inner)}); }
TermPtr flat(TermPtr type) { return node(Tag::FlatTy, {std::move(type)}); }
TermPtr flat_intro(TermPtr inner) { return node(Tag::FlatIntro, {std::move(inner)}); }

TermPtr flat_let(std::string motive_name, TermPtr motive, TermPtr scrutinee, std::string body_name, TermPtr body) {
  return node(Tag::FlatLet, {std::move(motive), std::move(scrutinee), std::move(body)},
              {std::move(motive_name), std::move(body_name)});
}

TermPtr with_children(const Term& n, std::vector<TermPtr> children) {
  auto t = std::make_shared<Term>(n);
  t->children = std::move(children);
  return t;
}

TermPtr with_span(const TermPtr& t, Span span) {
  auto c = std::make_shared<Term>(*t);
  c->span = span;
  return c;
}

}  // namespace mk

namespace {

// Generic traversal: `on_var(node, depth)` rewrites each variable occurrence,
// where depth counts binders crossed since the root.
template <typename F>
TermPtr map_vars(const TermPtr& t, std::size_t depth, F& on_var) {
  if (t->tag == Tag::Var) return on_var(t, depth);
  if (t->children.empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->children.size());
  bool changed = false;
  for (std::size_t i = 0; i < t->children.size(); ++i) {
    kids.push_back(map_vars(t->children[i], depth + binder_count(t->tag, i), on_var));
    changed = changed || kids.back() != t->children[i];
  }
  return changed ? mk::with_children(*t, std::move(kids)) : t;
}

template <typename F>
void visit_vars(const TermPtr& t, std::size_t depth, F& f) {
  if (t->tag == Tag::Var) {
    f(t->index, depth);
    return;
  }
  for (std::size_t i = 0; i < t->children.size(); ++i) visit_vars(t->children[i], depth + binder_count(t->tag, i), f);
}

TermPtr var_like(const TermPtr& original, std::size_t index) {
  auto v = std::make_shared<Term>(*original);
  v->index = index;
  return v;
}

}  // namespace

TermPtr shift(const TermPtr& t, std::size_t cutoff, std::ptrdiff_t amount) {
  if (amount == 0) return t;
  auto f = [&](const TermPtr& v, std::size_t depth) -> TermPtr {
    if (v->index < cutoff + depth) return v;
    auto moved = static_cast<std::ptrdiff_t>(v->index) + amount;
    if (moved < static_cast<std::ptrdiff_t>(cutoff + depth)) throw std::logic_error("shift: index underflow");
    return var_like(v, static_cast<std::size_t>(moved));
  };
  return map_vars(t, 0, f);
}

TermPtr subst(const TermPtr& t, std::size_t target, const TermPtr& replacement) {
  auto f = [&](const TermPtr& v, std::size_t depth) -> TermPtr {
    if (v->index != target + depth) return v;
    return shift(replacement, 0, static_cast<std::ptrdiff_t>(depth));
  };
  return map_vars(t, 0, f);
}

TermPtr instantiate(const TermPtr& body, const TermPtr& replacement) {
  return shift(subst(body, 0, shift(replacement, 0, 1)), 0, -1);
}

std::set<std::size_t> free_vars(const TermPtr& t) {
  std::set<std::size_t> out;
  auto f = [&](std::size_t index, std::size_t depth) {
    if (index >= depth) out.insert(index - depth);
  };
  visit_vars(t, 0, f);
  return out;
}

std::optional<TermPtr> rename_free(const TermPtr& t,
                                   const std::function<std::optional<std::size_t>(std::size_t)>& map) {
  bool failed = false;
  auto f = [&](const TermPtr& v, std::size_t depth) -> TermPtr {
    if (v->index < depth) return v;
    auto image = map(v->index - depth);
    if (!image) {
      failed = true;
      return v;
    }
    return var_like(v, *image + depth);
  };
  auto out = map_vars(t, 0, f);
  if (failed) return std::nullopt;
  return out;
}

std::set<std::string> constants_of(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<const Term*> stack{t.get()};
  while (!stack.empty()) {
    const Term* n = stack.back();
    stack.pop_back();
    if (n->tag == Tag::Const) out.insert(n->name);
    for (const auto& c : n->children) stack.push_back(c.get());
  }
  return out;
}

std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  for (const auto& c : t->children) n += term_size(c);
  return n;
}

Telescope Telescope::extended(Entry entry) const {
  auto copy = entries_;
  copy.push_back(std::move(entry));
  return Telescope(std::move(copy));
}

bool Telescope::well_formed() const {
  for (std::size_t level = 0; level < entries_.size(); ++level) {
    const auto& e = entries_[level];
    if (!e.type) return false;
    for (auto idx : free_vars(e.type)) {
      if (idx >= level) return false;
      if (e.polarity == Polarity::Crisp && entries_[level - 1 - idx].polarity != Polarity::Crisp) return false;
    }
  }
  return true;
}

std::vector<std::string> Telescope::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

std::vector<std::string> Pattern::variables() const {
  std::vector<std::string> out;
  for (const auto& a : args) {
    if (a.kind == PatternArg::Kind::Variable) {
      out.push_back(a.name);
    } else {
      out.insert(out.end(), a.vars.begin(), a.vars.end());
    }
  }
  return out;
}

const std::string& Declaration::name() const {
  return std::visit([](const auto& d) -> const std::string& { return d.name; }, item);
}

}  // namespace cohesive
