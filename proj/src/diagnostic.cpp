#include "cohesive/diagnostic.hpp"

#include <array>
#include <sstream>
#include <utility>

namespace cohesive {

namespace {

constexpr std::array<std::pair<Code, const char*>, 13> kCodes{{
    {Code::ScopeError, "ScopeError"},
    {Code::TypeMismatch, "TypeMismatch"},
    {Code::NotAFunction, "NotAFunction"},
    {Code::NotAPair, "NotAPair"},
    {Code::CrispnessViolation, "CrispnessViolation"},
    {Code::FlatOnCohesiveType, "FlatOnCohesiveType"},
    {Code::SharpElimCohesive, "SharpElimCohesive"},
    {Code::UniverseError, "UniverseError"},
    {Code::MotiveMismatch, "MotiveMismatch"},
    {Code::RewriteIllFormed, "RewriteIllFormed"},
    {Code::DuplicateName, "DuplicateName"},
    {Code::FuelExhausted, "FuelExhausted"},
    {Code::ParseError, "ParseError"},
}};

}  // namespace

const char* code_name(Code code) {
  for (const auto& [c, n] : kCodes) {
    if (c == code) return n;
  }
  return "?";
}

std::optional<Code> code_from_name(const std::string& name) {
  for (const auto& [c, n] : kCodes) {
    if (name == n) return c;
  }
  return std::nullopt;
}

std::string Diagnostic::render() const {
  std::ostringstream out;
  out << (file.empty() ? "<input>" : file);
  if (span.known()) out << ':' << span.line << ':' << span.col;
  out << ": " << code_name(code) << ": " << message;
  if (!expected.empty()) out << " (expected " << expected << ')';
  for (const auto& line : context) {
    out << "\n  " << line.name << (line.polarity == Polarity::Crisp ? " :: " : " : ") << line.type;
  }
  return out.str();
}

void fail(Code code, std::string message, Span span) {
  Diagnostic d;
  d.code = code;
  d.message = std::move(message);
  d.span = span;
  throw DiagnosticError(std::move(d));
}

}  // namespace cohesive
