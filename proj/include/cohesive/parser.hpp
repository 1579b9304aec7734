#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cohesive/diagnostic.hpp"
#include "cohesive/environment.hpp"
#include "cohesive/syntax.hpp"

namespace cohesive {

enum class TokenKind {
  KwDef,
  KwPostulate,
  KwRewrite,
  KwFun,
  KwLetflat,
  KwMotive,
  KwIn,
  KwType,
  KwUnit,
  KwStar,
  KwSharp,
  KwFlat,
  KwId,
  KwRefl,
  KwJ,
  Ident,
  Nat,
  Colon,
  Assign,
  Arrow,
  FatArrow,
  Times,
  Dot,
  Comma,
  LParen,
  RParen,
  OpSharpIntro,
  OpSharpElim,
  OpFlatIntro,
  Proj1,
  Proj2,
  Eof,
};

const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string text;
  Span span;
};

/// Throws DiagnosticError (ParseError) on an illegal character.
std::vector<Token> tokenize(std::string_view source);

/// Named mirror of Term. Identifier references use Tag::Var with `name`
/// set; resolution decides whether they are bound variables or constants.
struct SurfaceTerm;
using SurfacePtr = std::shared_ptr<const SurfaceTerm>;

struct SurfaceTerm {
  Tag tag = Tag::Unit;
  std::string name;
  Level level;
  std::vector<SurfacePtr> children;
  std::vector<std::string> binders;
  Span span;
};

struct SurfacePatternArg {
  std::string name;
  std::vector<std::string> args;
  bool applied = false;  // written as `(c x ...)`
  Span span;
};

struct SurfaceDecl {
  enum class Kind { Def, Postulate, Rewrite };

  Kind kind = Kind::Def;
  std::string name;
  SurfacePtr type;  // Def, Postulate
  SurfacePtr body;  // Def
  std::string head;  // Rewrite
  Span head_span;
  std::vector<SurfacePatternArg> pattern;
  SurfacePtr rhs;
  Span span;
};

Result<std::vector<SurfaceDecl>> parse_module(std::string_view source, const std::string& file = "");
Result<SurfacePtr> parse_term(std::string_view source);

/// Resolve a whole module. Names declared earlier in `decls` count as
/// constants for later declarations.
Result<std::vector<Declaration>> resolve(const std::vector<SurfaceDecl>& decls, const Environment& env);

/// Resolve one declaration against `env` plus the extra constant names.
Result<Declaration> resolve_declaration(const SurfaceDecl& decl, const Environment& env,
                                        const std::set<std::string>& extra = {});

/// `scope` lists bound names, outermost first.
Result<TermPtr> resolve_term(const SurfaceTerm& term, const Environment& env,
                             const std::vector<std::string>& scope = {},
                             const std::set<std::string>& extra = {});

/// Concrete syntax that parses and resolves back to an alpha-equal term.
/// Free variables are named from `scope` (outermost first).
std::string print_term(const TermPtr& term, const std::vector<std::string>& scope = {});
std::string print_pattern(const Pattern& pattern);
std::string print_declaration(const Declaration& decl);

bool is_keyword(std::string_view word);

}  // namespace cohesive
