#include <algorithm>
#include <set>

#include "cohesive/parser.hpp"

namespace cohesive {

namespace {

using SurfaceMut = std::shared_ptr<SurfaceTerm>;

Span join(Span a, Span b) { return Span{a.line, a.col, b.end_line, b.end_col}; }

SurfacePtr make(Tag tag, Span span, std::vector<SurfacePtr> children = {}, std::vector<std::string> binders = {}) {
  auto t = std::make_shared<SurfaceTerm>();
  t->tag = tag;
  t->span = span;
  t->children = std::move(children);
  t->binders = std::move(binders);
  return t;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<SurfaceDecl> module() {
    std::vector<SurfaceDecl> out;
    while (peek().kind != TokenKind::Eof) out.push_back(decl());
    return out;
  }

  SurfacePtr lone_term() {
    auto t = expr();
    expect(TokenKind::Eof, "end of input");
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(TokenKind k) const { return peek().kind == k; }
  Span last_span() const { return pos_ == 0 ? peek().span : toks_[pos_ - 1].span; }

  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void error(const std::string& expected) const {
    Diagnostic d;
    d.code = Code::ParseError;
    const Token& t = peek();
    d.span = t.span;
    d.expected = expected;
    d.message = t.kind == TokenKind::Eof ? "unexpected end of input"
                                         : "unexpected token '" + t.text + "' (" + token_kind_name(t.kind) + ")";
    throw DiagnosticError(std::move(d));
  }

  const Token& expect(TokenKind k, const std::string& what) {
    if (!at(k)) error(what);
    return next();
  }

  std::string binder_name() {
    if (!at(TokenKind::Ident)) error("a binder name");
    return next().text;
  }

  SurfaceDecl decl() {
    SurfaceDecl d;
    Span start = peek().span;
    switch (peek().kind) {
      case TokenKind::KwDef:
        next();
        d.kind = SurfaceDecl::Kind::Def;
        d.name = expect(TokenKind::Ident, "a declaration name").text;
        expect(TokenKind::Colon, "':'");
        d.type = expr();
        expect(TokenKind::Assign, "':='");
        d.body = expr();
        break;
      case TokenKind::KwPostulate:
        next();
        d.kind = SurfaceDecl::Kind::Postulate;
        d.name = expect(TokenKind::Ident, "a declaration name").text;
        expect(TokenKind::Colon, "':'");
        d.type = expr();
        break;
      case TokenKind::KwRewrite: {
        next();
        d.kind = SurfaceDecl::Kind::Rewrite;
        d.name = expect(TokenKind::Ident, "a rule name").text;
        expect(TokenKind::Colon, "':'");
        const Token& head = expect(TokenKind::Ident, "a rewrite head constant");
        d.head = head.text;
        d.head_span = head.span;
        while (!at(TokenKind::FatArrow)) d.pattern.push_back(pattern_arg());
        next();
        d.rhs = expr();
        break;
      }
      default: error("'def', 'postulate' or 'rewrite'");
    }
    d.span = join(start, last_span());
    return d;
  }

  SurfacePatternArg pattern_arg() {
    SurfacePatternArg a;
    a.span = peek().span;
    if (at(TokenKind::Ident)) {
      a.name = next().text;
      return a;
    }
    if (!at(TokenKind::LParen)) error("a pattern variable, '(' or '=>'");
    next();
    a.applied = true;
    a.name = expect(TokenKind::Ident, "a constructor name").text;
    while (at(TokenKind::Ident)) a.args.push_back(next().text);
    expect(TokenKind::RParen, "')'");
    a.span = join(a.span, last_span());
    return a;
  }

  // True when a parenthesized binder group `(x y : A)` starts here.
  bool binder_group_ahead() const {
    if (!at(TokenKind::LParen)) return false;
    std::size_t i = 1;
    while (peek(i).kind == TokenKind::Ident) ++i;
    return i > 1 && peek(i).kind == TokenKind::Colon;
  }

  SurfacePtr expr() {
    Span start = peek().span;
    if (at(TokenKind::KwFun)) {
      next();
      std::vector<std::string> names;
      do {
        names.push_back(binder_name());
      } while (at(TokenKind::Ident));
      expect(TokenKind::Dot, "'.'");
      auto body = expr();
      for (auto it = names.rbegin(); it != names.rend(); ++it) {
        body = make(Tag::Lam, join(start, body->span), {body}, {*it});
      }
      return body;
    }
    if (at(TokenKind::KwLetflat)) {
      next();
      auto u = binder_name();
      expect(TokenKind::Assign, "':='");
      auto scrutinee = expr();
      expect(TokenKind::KwMotive, "'motive'");
      auto x = binder_name();
      expect(TokenKind::Dot, "'.'");
      auto motive = expr();
      expect(TokenKind::KwIn, "'in'");
      auto body = expr();
      return make(Tag::FlatLet, join(start, body->span), {motive, scrutinee, body}, {x, u});
    }
    auto lhs = prod();
    if (at(TokenKind::Arrow)) {
      next();
      auto rhs = expr();
      return make(Tag::Pi, join(lhs->span, rhs->span), {lhs, rhs}, {"_"});
    }
    return lhs;
  }

  SurfacePtr prod() {
    Span start = peek().span;
    if (binder_group_ahead()) {
      std::vector<std::pair<std::string, SurfacePtr>> binders;
      while (binder_group_ahead()) {
        next();
        std::vector<std::string> names;
        while (at(TokenKind::Ident)) names.push_back(next().text);
        expect(TokenKind::Colon, "':'");
        auto type = expr();
        expect(TokenKind::RParen, "')'");
        for (auto& n : names) binders.emplace_back(std::move(n), type);
      }
      Tag tag;
      SurfacePtr body;
      if (at(TokenKind::Arrow)) {
        next();
        tag = Tag::Pi;
        body = expr();
      } else if (at(TokenKind::Times)) {
        next();
        tag = Tag::Sigma;
        body = prod();
      } else {
        error("'->' or '*' after a binder group");
      }
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        body = make(tag, join(start, body->span), {it->second, body}, {it->first});
      }
      return body;
    }
    auto lhs = app();
    if (at(TokenKind::Times)) {
      next();
      auto rhs = prod();
      return make(Tag::Sigma, join(lhs->span, rhs->span), {lhs, rhs}, {"_"});
    }
    return lhs;
  }

  bool atom_ahead() const {
    switch (peek().kind) {
      case TokenKind::Ident:
      case TokenKind::KwType:
      case TokenKind::KwUnit:
      case TokenKind::KwStar:
      case TokenKind::KwSharp:
      case TokenKind::KwFlat:
      case TokenKind::KwId:
      case TokenKind::KwRefl:
      case TokenKind::KwJ:
      case TokenKind::LParen: return true;
      default: return false;
    }
  }

  SurfacePtr app() {
    auto t = atom();
    while (atom_ahead()) {
      auto arg = atom();
      t = make(Tag::App, join(t->span, arg->span), {t, arg});
    }
    for (;;) {
      Tag tag;
      switch (peek().kind) {
        case TokenKind::OpSharpIntro: tag = Tag::SharpIntro; break;
        case TokenKind::OpSharpElim: tag = Tag::SharpElim; break;
        case TokenKind::OpFlatIntro: tag = Tag::FlatIntro; break;
        case TokenKind::Proj1: tag = Tag::Fst; break;
        case TokenKind::Proj2: tag = Tag::Snd; break;
        default: return t;
      }
      Span op = next().span;
      t = make(tag, join(t->span, op), {t});
    }
  }

  SurfacePtr atom() {
    const Token& tok = peek();
    Span start = tok.span;
    switch (tok.kind) {
      case TokenKind::Ident: {
        auto t = std::make_shared<SurfaceTerm>();
        t->tag = Tag::Var;
        t->name = next().text;
        t->span = start;
        return t;
      }
      case TokenKind::KwType: {
        next();
        const Token& n = expect(TokenKind::Nat, "a universe level");
        auto t = std::make_shared<SurfaceTerm>();
        t->tag = Tag::Universe;
        try {
          t->level = Level{static_cast<std::uint32_t>(std::stoul(n.text))};
        } catch (const std::exception&) {
          Diagnostic d;
          d.code = Code::ParseError;
          d.message = "universe level out of range";
          d.span = n.span;
          throw DiagnosticError(std::move(d));
        }
        t->span = join(start, n.span);
        return t;
      }
      case TokenKind::KwUnit: next(); return make(Tag::Unit, start);
      case TokenKind::KwStar: next(); return make(Tag::Star, start);
      case TokenKind::KwSharp:
      case TokenKind::KwFlat: {
        Tag tag = tok.kind == TokenKind::KwSharp ? Tag::SharpTy : Tag::FlatTy;
        next();
        auto inner = atom();
        return make(tag, join(start, inner->span), {inner});
      }
      case TokenKind::KwId: {
        next();
        auto a = atom();
        auto l = atom();
        auto r = atom();
        return make(Tag::Id, join(start, r->span), {a, l, r});
      }
      case TokenKind::KwRefl: {
        next();
        auto a = atom();
        return make(Tag::Refl, join(start, a->span), {a});
      }
      case TokenKind::KwJ: return j_form();
      case TokenKind::LParen: {
        next();
        auto first = expr();
        if (at(TokenKind::Comma)) {
          next();
          auto second = expr();
          expect(TokenKind::RParen, "')'");
          return make(Tag::Pair, join(start, last_span()), {first, second});
        }
        expect(TokenKind::RParen, "')'");
        auto t = std::make_shared<SurfaceTerm>(*first);
        t->span = join(start, last_span());
        return t;
      }
      default: error("a term");
    }
  }

  // J (x.y.p. C) (x. d) a b p
  SurfacePtr j_form() {
    Span start = next().span;
    expect(TokenKind::LParen, "'(' opening the J motive");
    std::vector<std::string> names;
    for (int i = 0; i < 3; ++i) {
      names.push_back(binder_name());
      expect(TokenKind::Dot, "'.'");
    }
    auto motive = expr();
    expect(TokenKind::RParen, "')'");
    expect(TokenKind::LParen, "'(' opening the J base case");
    names.push_back(binder_name());
    expect(TokenKind::Dot, "'.'");
    auto base = expr();
    expect(TokenKind::RParen, "')'");
    auto lhs = atom();
    auto rhs = atom();
    auto proof = atom();
    return make(Tag::J, join(start, proof->span), {motive, base, lhs, rhs, proof}, std::move(names));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

template <typename F>
auto guarded(F&& f) -> Result<decltype(f())> {
  try {
    return f();
  } catch (const DiagnosticError& e) {
    return e.diagnostic();
  }
}

[[noreturn]] void scope_error(const std::string& name, Span span) {
  fail(Code::ScopeError, "unbound identifier '" + name + "'", span);
}

class Resolver {
 public:
  Resolver(const Environment& env, const std::set<std::string>& extra) : env_(env), extra_(extra) {}

  bool is_constant(const std::string& n) const { return env_.is_constant(n) || extra_.count(n) != 0; }

  TermPtr term(const SurfaceTerm& s, std::vector<std::string>& scope) {
    TermPtr out;
    switch (s.tag) {
      case Tag::Var: {
        if (s.name != "_") {
          for (std::size_t i = scope.size(); i-- > 0;) {
            if (scope[i] == s.name) {
              out = mk::var(scope.size() - 1 - i);
              break;
            }
          }
          if (!out && is_constant(s.name)) out = mk::constant(s.name);
        }
        if (!out) scope_error(s.name, s.span);
        break;
      }
      case Tag::Universe: out = mk::universe(s.level); break;
      default: {
        std::vector<TermPtr> kids;
        std::size_t binder = 0;
        for (std::size_t i = 0; i < s.children.size(); ++i) {
          std::size_t n = binder_count(s.tag, i);
          for (std::size_t k = 0; k < n; ++k) scope.push_back(s.binders.at(binder + k));
          kids.push_back(term(*s.children[i], scope));
          scope.resize(scope.size() - n);
          binder += n;
        }
        auto t = std::make_shared<Term>();
        t->tag = s.tag;
        t->children = std::move(kids);
        t->binders = s.binders;
        out = t;
      }
    }
    return mk::with_span(out, s.span);
  }

  Declaration decl(const SurfaceDecl& d) {
    Declaration out;
    out.span = DeclSpan{d.span.line, d.span.col};
    if (is_constant(d.name) || env_.contains(d.name)) {
      fail(Code::DuplicateName, "'" + d.name + "' is already declared", d.span);
    }
    std::vector<std::string> scope;
    switch (d.kind) {
      case SurfaceDecl::Kind::Def: out.item = Definition{d.name, term(*d.type, scope), term(*d.body, scope)}; break;
      case SurfaceDecl::Kind::Postulate: out.item = Postulate{d.name, term(*d.type, scope)}; break;
      case SurfaceDecl::Kind::Rewrite: {
        if (!is_constant(d.head)) scope_error(d.head, d.head_span);
        Pattern p;
        p.head = d.head;
        for (const auto& a : d.pattern) {
          PatternArg arg;
          if (a.applied) {
            if (!is_constant(a.name)) scope_error(a.name, a.span);
            arg.kind = PatternArg::Kind::Constructor;
            arg.name = a.name;
            arg.vars = a.args;
          } else if (is_constant(a.name)) {
            arg.kind = PatternArg::Kind::Constructor;
            arg.name = a.name;
          } else {
            arg.kind = PatternArg::Kind::Variable;
            arg.name = a.name;
          }
          p.args.push_back(std::move(arg));
        }
        scope = p.variables();
        auto rhs = term(*d.rhs, scope);
        out.item = RewriteRule{d.name, std::move(p), std::move(rhs)};
        break;
      }
    }
    return out;
  }

 private:
  const Environment& env_;
  const std::set<std::string>& extra_;
};

}  // namespace

Result<std::vector<SurfaceDecl>> parse_module(std::string_view source, const std::string& file) {
  auto r = guarded([&] { return Parser(tokenize(source)).module(); });
  if (!r.ok()) {
    auto d = r.error();
    d.file = file;
    return d;
  }
  return r;
}

Result<SurfacePtr> parse_term(std::string_view source) {
  return guarded([&] { return Parser(tokenize(source)).lone_term(); });
}

Result<Declaration> resolve_declaration(const SurfaceDecl& decl, const Environment& env,
                                        const std::set<std::string>& extra) {
  return guarded([&] { return Resolver(env, extra).decl(decl); });
}

Result<std::vector<Declaration>> resolve(const std::vector<SurfaceDecl>& decls, const Environment& env) {
  return guarded([&] {
    std::set<std::string> declared;
    std::set<std::string> rules;
    std::vector<Declaration> out;
    for (const auto& d : decls) {
      if (rules.count(d.name) != 0) fail(Code::DuplicateName, "'" + d.name + "' is already declared", d.span);
      out.push_back(Resolver(env, declared).decl(d));
      (d.kind == SurfaceDecl::Kind::Rewrite ? rules : declared).insert(d.name);
    }
    return out;
  });
}

Result<TermPtr> resolve_term(const SurfaceTerm& term, const Environment& env, const std::vector<std::string>& scope,
                             const std::set<std::string>& extra) {
  return guarded([&] {
    auto s = scope;
    return Resolver(env, extra).term(term, s);
  });
}

}  // namespace cohesive
