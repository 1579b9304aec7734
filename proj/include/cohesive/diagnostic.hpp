#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cohesive/syntax.hpp"

namespace cohesive {

enum class Code {
  ScopeError,
  TypeMismatch,
  NotAFunction,
  NotAPair,
  CrispnessViolation,
  FlatOnCohesiveType,
  SharpElimCohesive,
  UniverseError,
  MotiveMismatch,
  RewriteIllFormed,
  DuplicateName,
  // Reduction budget ran out; the theory has no normalization theorem.
  FuelExhausted,
  // Surface-level failure; reported by the parser, never by the kernel.
  ParseError,
};

const char* code_name(Code code);
std::optional<Code> code_from_name(const std::string& name);

struct ContextLine {
  std::string name;
  std::string type;
  Polarity polarity = Polarity::Cohesive;
};

struct Diagnostic {
  Code code = Code::TypeMismatch;
  std::string message;
  std::string file;
  Span span;
  std::vector<ContextLine> context;
  // Parse errors only: what the parser was looking for.
  std::string expected;

  /// `file:line:col: Code: message` followed by the context, one entry per line.
  std::string render() const;
};

/// Carrier used to unwind from deep inside the checker or parser.
class DiagnosticError : public std::runtime_error {
 public:
  explicit DiagnosticError(Diagnostic d) : std::runtime_error(d.message), diagnostic_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diagnostic_; }
  Diagnostic& diagnostic() { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

[[noreturn]] void fail(Code code, std::string message, Span span = {});

/// Either a value or the diagnostic explaining why there is none.
template <typename T>
class Result {
 public:
  Result(T value) : data_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(Diagnostic d) : data_(std::move(d)) {}  // NOLINT(google-explicit-constructor)

  bool ok() const { return data_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const { return std::get<0>(data_); }
  T& value() { return std::get<0>(data_); }
  const Diagnostic& error() const { return std::get<1>(data_); }

 private:
  std::variant<T, Diagnostic> data_;
};

}  // namespace cohesive
