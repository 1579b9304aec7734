#include <sstream>

#include "cohesive/parser.hpp"

namespace cohesive {

namespace {

// Precedence levels, loosest first.
enum Prec { kExpr = 0, kArrow = 1, kProd = 2, kApp = 3, kCompound = 4, kAtom = 5 };

bool uses_var0(const TermPtr& t) { return free_vars(t).count(0) != 0; }

Prec natural(const Term& t) {
  switch (t.tag) {
    case Tag::Lam:
    case Tag::FlatLet: return kExpr;
    case Tag::Pi: return uses_var0(t.children[1]) ? kExpr : kArrow;
    case Tag::Sigma: return kProd;
    case Tag::App:
    case Tag::Fst:
    case Tag::Snd:
    case Tag::SharpIntro:
    case Tag::SharpElim:
    case Tag::FlatIntro: return kApp;
    case Tag::Universe:
    case Tag::SharpTy:
    case Tag::FlatTy:
    case Tag::Id:
    case Tag::Refl:
    case Tag::J: return kCompound;
    default: return kAtom;
  }
}

class Printer {
 public:
  Printer(const TermPtr& root, std::vector<std::string> scope)
      : constants_(constants_of(root)), scope_(std::move(scope)) {}

  std::string run(const TermPtr& t) {
    print(t, kExpr);
    return out_.str();
  }

 private:
  bool taken(const std::string& n) const {
    if (is_keyword(n) || constants_.count(n) != 0) return true;
    for (const auto& s : scope_) {
      if (s == n) return true;
    }
    return false;
  }

  // Name for a binder; `_` when the bound variable is unused.
  std::string fresh(const std::string& hint, bool used) {
    if (!used) return "_";
    std::string base = hint;
    if (base.empty() || base[0] == '_' || is_keyword(base)) base = "x";
    std::string candidate = base;
    for (int k = 1; taken(candidate); ++k) candidate = base + std::to_string(k);
    return candidate;
  }

  void print(const TermPtr& t, Prec min) {
    bool parens = natural(*t) < min;
    if (parens) out_ << '(';
    body(t);
    if (parens) out_ << ')';
  }

  // Under `n` new binders named `names`, print `t` at precedence `p`.
  void under(const std::vector<std::string>& names, const TermPtr& t, Prec p) {
    for (const auto& n : names) scope_.push_back(n);
    print(t, p);
    scope_.resize(scope_.size() - names.size());
  }

  static bool used_at(const TermPtr& t, std::size_t index) { return free_vars(t).count(index) != 0; }

  void postfix(const TermPtr& t, const char* op) {
    print(t->children[0], kApp);
    out_ << ' ' << op;
  }

  void body(const TermPtr& t) {
    const auto& c = t->children;
    auto hint = [&](std::size_t i) { return i < t->binders.size() ? t->binders[i] : std::string("x"); };
    switch (t->tag) {
      case Tag::Var:
        if (t->index < scope_.size()) {
          out_ << scope_[scope_.size() - 1 - t->index];
        } else {
          out_ << '#' << t->index;
        }
        return;
      case Tag::Const: out_ << t->name; return;
      case Tag::Universe: out_ << "Type " << t->level.value; return;
      case Tag::Unit: out_ << "Unit"; return;
      case Tag::Star: out_ << "star"; return;
      case Tag::Pi:
      case Tag::Sigma: {
        const char* op = t->tag == Tag::Pi ? " -> " : " * ";
        if (!uses_var0(c[1])) {
          print(c[0], t->tag == Tag::Pi ? kProd : kApp);
          out_ << op;
          under({"_"}, c[1], t->tag == Tag::Pi ? kExpr : kProd);
          return;
        }
        auto n = fresh(hint(0), true);
        out_ << '(' << n << " : ";
        print(c[0], kExpr);
        out_ << ')' << op;
        under({n}, c[1], t->tag == Tag::Pi ? kExpr : kProd);
        return;
      }
      case Tag::Lam: {
        auto n = fresh(hint(0), used_at(c[0], 0));
        out_ << "fun " << n << ". ";
        under({n}, c[0], kExpr);
        return;
      }
      case Tag::App: {
        if (c[0]->tag == Tag::App) {
          body(c[0]);
        } else {
          print(c[0], kAtom);
        }
        out_ << ' ';
        print(c[1], kAtom);
        return;
      }
      case Tag::Pair:
        out_ << '(';
        print(c[0], kExpr);
        out_ << ", ";
        print(c[1], kExpr);
        out_ << ')';
        return;
      case Tag::Fst: postfix(t, ".1"); return;
      case Tag::Snd: postfix(t, ".2"); return;
      case Tag::SharpIntro: postfix(t, "^sharp"); return;
      case Tag::SharpElim: postfix(t, "_sharp"); return;
      case Tag::FlatIntro: postfix(t, "^flat"); return;
      case Tag::SharpTy:
      case Tag::FlatTy:
        out_ << (t->tag == Tag::SharpTy ? "Sharp " : "Flat ");
        print(c[0], kAtom);
        return;
      case Tag::Id:
        out_ << "Id ";
        print(c[0], kAtom);
        out_ << ' ';
        print(c[1], kAtom);
        out_ << ' ';
        print(c[2], kAtom);
        return;
      case Tag::Refl:
        out_ << "refl ";
        print(c[0], kAtom);
        return;
      case Tag::J: {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < 3; ++i) {
          names.push_back(fresh(hint(i), used_at(c[0], 2 - i)));
          scope_.push_back(names.back());
        }
        scope_.resize(scope_.size() - 3);
        out_ << "J (" << names[0] << '.' << names[1] << '.' << names[2] << ". ";
        under(names, c[0], kExpr);
        auto b = fresh(hint(3), used_at(c[1], 0));
        out_ << ") (" << b << ". ";
        under({b}, c[1], kExpr);
        out_ << ") ";
        print(c[2], kAtom);
        out_ << ' ';
        print(c[3], kAtom);
        out_ << ' ';
        print(c[4], kAtom);
        return;
      }
      case Tag::FlatLet: {
        auto u = fresh(hint(1), used_at(c[2], 0));
        out_ << "letflat " << u << " := ";
        print(c[1], kExpr);
        auto x = fresh(hint(0), used_at(c[0], 0));
        out_ << " motive " << x << ". ";
        under({x}, c[0], kExpr);
        out_ << " in ";
        under({u}, c[2], kExpr);
        return;
      }
    }
  }

  std::set<std::string> constants_;
  std::vector<std::string> scope_;
  std::ostringstream out_;
};

}  // namespace

std::string print_term(const TermPtr& term, const std::vector<std::string>& scope) {
  return Printer(term, scope).run(term);
}

std::string print_pattern(const Pattern& pattern) {
  std::string out = pattern.head;
  for (const auto& a : pattern.args) {
    out += ' ';
    if (a.kind == PatternArg::Kind::Constructor && !a.vars.empty()) {
      out += '(' + a.name;
      for (const auto& v : a.vars) out += ' ' + v;
      out += ')';
    } else {
      out += a.name;
    }
  }
  return out;
}

std::string print_declaration(const Declaration& decl) {
  struct Visitor {
    std::string operator()(const Definition& d) const {
      return "def " + d.name + " : " + print_term(d.type) + " := " + print_term(d.body);
    }
    std::string operator()(const Postulate& p) const { return "postulate " + p.name + " : " + print_term(p.type); }
    std::string operator()(const RewriteRule& r) const {
      return "rewrite " + r.name + " : " + print_pattern(r.lhs) + " => " + print_term(r.rhs, r.lhs.variables());
    }
  };
  return std::visit(Visitor{}, decl.item);
}

}  // namespace cohesive
