#include <cctype>
#include <map>

#include "cohesive/parser.hpp"

namespace cohesive {

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::KwDef: return "KwDef";
    case TokenKind::KwPostulate: return "KwPostulate";
    case TokenKind::KwRewrite: return "KwRewrite";
    case TokenKind::KwFun: return "KwFun";
    case TokenKind::KwLetflat: return "KwLetflat";
    case TokenKind::KwMotive: return "KwMotive";
    case TokenKind::KwIn: return "KwIn";
    case TokenKind::KwType: return "KwType";
    case TokenKind::KwUnit: return "KwUnit";
    case TokenKind::KwStar: return "KwStar";
    case TokenKind::KwSharp: return "KwSharp";
    case TokenKind::KwFlat: return "KwFlat";
    case TokenKind::KwId: return "KwId";
    case TokenKind::KwRefl: return "KwRefl";
    case TokenKind::KwJ: return "KwJ";
    case TokenKind::Ident: return "Ident";
    case TokenKind::Nat: return "Nat";
    case TokenKind::Colon: return "Colon";
    case TokenKind::Assign: return "Assign";
    case TokenKind::Arrow: return "Arrow";
    case TokenKind::FatArrow: return "FatArrow";
    case TokenKind::Times: return "Times";
    case TokenKind::Dot: return "Dot";
    case TokenKind::Comma: return "Comma";
    case TokenKind::LParen: return "LParen";
    case TokenKind::RParen: return "RParen";
    case TokenKind::OpSharpIntro: return "OpSharpIntro";
    case TokenKind::OpSharpElim: return "OpSharpElim";
    case TokenKind::OpFlatIntro: return "OpFlatIntro";
    case TokenKind::Proj1: return "Proj1";
    case TokenKind::Proj2: return "Proj2";
    case TokenKind::Eof: return "Eof";
  }
  return "?";
}

namespace {

const std::map<std::string_view, TokenKind>& keywords() {
  static const std::map<std::string_view, TokenKind> kw{
      {"def", TokenKind::KwDef},       {"postulate", TokenKind::KwPostulate},
      {"rewrite", TokenKind::KwRewrite}, {"fun", TokenKind::KwFun},
      {"letflat", TokenKind::KwLetflat}, {"motive", TokenKind::KwMotive},
      {"in", TokenKind::KwIn},         {"Type", TokenKind::KwType},
      {"Unit", TokenKind::KwUnit},     {"star", TokenKind::KwStar},
      {"Sharp", TokenKind::KwSharp},   {"Flat", TokenKind::KwFlat},
      {"Id", TokenKind::KwId},         {"refl", TokenKind::KwRefl},
      {"J", TokenKind::KwJ},
  };
  return kw;
}

// Unicode spellings accepted as aliases of ASCII tokens.
struct Alias {
  std::string_view bytes;
  TokenKind kind;
};

constexpr Alias kAliases[] = {
    {"\xCE\xBB", TokenKind::KwFun},        // λ
    {"\xE2\x86\x92", TokenKind::Arrow},    // →
    {"\xC3\x97", TokenKind::Times},        // ×
    {"\xE2\x99\xAF", TokenKind::KwSharp},  // ♯
    {"\xE2\x99\xAD", TokenKind::KwFlat},   // ♭
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t;
      t.span.line = line_;
      t.span.col = col_;
      if (pos_ >= src_.size()) {
        t.kind = TokenKind::Eof;
        finish(t);
        out.push_back(std::move(t));
        return out;
      }
      lex_one(t);
      finish(t);
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      char c = src_[pos_++];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  void finish(Token& t) const {
    t.span.end_line = line_;
    t.span.end_col = col_;
  }

  void skip_trivia() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void error(const std::string& msg) const {
    Diagnostic d;
    d.code = Code::ParseError;
    d.message = msg;
    d.span = Span{line_, col_, line_, col_ + 1};
    throw DiagnosticError(std::move(d));
  }

  std::string read_ident() {
    std::size_t start = pos_;
    while (ident_char(peek())) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  void lex_one(Token& t) {
    char c = peek();
    for (const auto& alias : kAliases) {
      if (src_.substr(pos_, alias.bytes.size()) == alias.bytes) {
        t.kind = alias.kind;
        t.text = std::string(alias.bytes);
        advance(alias.bytes.size());
        return;
      }
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      t.kind = TokenKind::Nat;
      t.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (ident_start(c)) {
      t.text = read_ident();
      if (t.text == "_sharp") {
        t.kind = TokenKind::OpSharpElim;
        return;
      }
      auto it = keywords().find(t.text);
      t.kind = it == keywords().end() ? TokenKind::Ident : it->second;
      return;
    }
    switch (c) {
      case '(': t.kind = TokenKind::LParen; break;
      case ')': t.kind = TokenKind::RParen; break;
      case ',': t.kind = TokenKind::Comma; break;
      case '*': t.kind = TokenKind::Times; break;
      case ':':
        if (peek(1) == '=') {
          t.kind = TokenKind::Assign;
          t.text = ":=";
          advance(2);
          return;
        }
        t.kind = TokenKind::Colon;
        break;
      case '-':
        if (peek(1) != '>') error("unexpected '-'");
        t.kind = TokenKind::Arrow;
        t.text = "->";
        advance(2);
        return;
      case '=':
        if (peek(1) != '>') error("unexpected '='");
        t.kind = TokenKind::FatArrow;
        t.text = "=>";
        advance(2);
        return;
      case '.':
        if ((peek(1) == '1' || peek(1) == '2') && !ident_char(peek(2))) {
          t.kind = peek(1) == '1' ? TokenKind::Proj1 : TokenKind::Proj2;
          t.text = std::string(src_.substr(pos_, 2));
          advance(2);
          return;
        }
        t.kind = TokenKind::Dot;
        break;
      case '^': {
        advance();
        auto word = ident_start(peek()) ? read_ident() : std::string();
        if (word == "sharp") {
          t.kind = TokenKind::OpSharpIntro;
        } else if (word == "flat") {
          t.kind = TokenKind::OpFlatIntro;
        } else {
          error("expected ^sharp or ^flat");
        }
        t.text = "^" + word;
        return;
      }
      default: {
        std::string shown(1, c);
        if (std::isprint(static_cast<unsigned char>(c)) == 0) shown = "\\x" + std::to_string(static_cast<unsigned char>(c));
        error("illegal character '" + shown + "'");
      }
    }
    t.text = std::string(1, c);
    advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

bool is_keyword(std::string_view word) { return keywords().count(word) != 0 || word == "_sharp"; }

}  // namespace cohesive
