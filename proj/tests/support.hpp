#pragma once

// Helpers for building environments and terms from concrete syntax in tests.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cohesive/corpus.hpp"
#include "cohesive/kernel.hpp"
#include "cohesive/parser.hpp"

namespace cohesive::testing {

inline std::filesystem::path corpus_path(const std::string& rel) {
  return std::filesystem::path(COHESIVE_CORPUS_DIR) / rel;
}

/// Checks `source` on top of `env`; throws with the rendered diagnostic.
inline Environment extend(const Environment& env, std::string_view source) {
  auto out = check_source(env, source, "<test>", CheckOptions{});
  if (!out.ok()) throw std::runtime_error(out.diagnostic->render());
  return out.env;
}

inline Environment load(const std::vector<std::string>& files, Environment env = {}) {
  for (const auto& f : files) {
    auto out = check_file(env, corpus_path(f), CheckOptions{});
    if (!out.ok()) throw std::runtime_error(out.diagnostic->render());
    env = std::move(out.env);
  }
  return env;
}

inline const Environment& prelude() {
  static const Environment env = load({"prelude/prelude.coh", "prelude/hits.coh", "prelude/axioms.coh"});
  return env;
}

/// Parses and resolves a term whose free variables are `scope` (outermost first).
inline TermPtr term(const Environment& env, std::string_view source, const std::vector<std::string>& scope = {}) {
  auto parsed = parse_term(source);
  if (!parsed.ok()) throw std::runtime_error(parsed.error().render());
  auto resolved = resolve_term(*parsed.value(), env, scope);
  if (!resolved.ok()) throw std::runtime_error(resolved.error().render());
  return resolved.value();
}

/// Builds a telescope from `name : type` / `name :: type` pairs.
struct Hyp {
  std::string name;
  std::string type;
  Polarity polarity = Polarity::Cohesive;
};

inline Telescope telescope(const Environment& env, const std::vector<Hyp>& hyps) {
  Telescope ctx;
  std::vector<std::string> scope;
  for (const auto& h : hyps) {
    ctx = ctx.extended(Entry{h.name, term(env, h.type, scope), h.polarity});
    scope.push_back(h.name);
  }
  return ctx;
}

inline Hyp crisp(std::string name, std::string type) { return {std::move(name), std::move(type), Polarity::Crisp}; }
inline Hyp cohesive(std::string name, std::string type) {
  return {std::move(name), std::move(type), Polarity::Cohesive};
}

}  // namespace cohesive::testing
