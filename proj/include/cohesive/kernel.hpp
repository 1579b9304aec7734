#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cohesive/diagnostic.hpp"
#include "cohesive/environment.hpp"
#include "cohesive/equality.hpp"
#include "cohesive/syntax.hpp"

namespace cohesive {

/// Called on every successful inference with the local telescope, the
/// subterm and its inferred type (in normal form).
using InferObserver = std::function<void(const Telescope&, const TermPtr&, const TermPtr&)>;

struct CheckOptions {
  std::uint64_t fuel = kDefaultFuel;
  InferObserver observer;
};

/// Every entry becomes crisp (the premise of ♯-formation and ♯-introduction).
Telescope promote(const Telescope& ctx);

struct CrispDecision {
  bool crisp = true;
  std::optional<std::size_t> offender;  // de Bruijn index of a cohesive free variable
  std::string offender_name;

  explicit operator bool() const { return crisp; }
};

/// Affirms iff every free variable of `t` is a crisp entry of `ctx`.
CrispDecision is_crisp(const Telescope& ctx, const TermPtr& t);

/// Telescope with the cohesive entries removed; nullopt if a crisp entry's
/// type mentions a cohesive one.
std::optional<Telescope> crisp_restriction(const Telescope& ctx);

Result<TermPtr> infer(const Environment& env, const Telescope& ctx, const TermPtr& t, const CheckOptions& opts = {});
std::optional<Diagnostic> check(const Environment& env, const Telescope& ctx, const TermPtr& t,
                                const TermPtr& expected, const CheckOptions& opts = {});

/// Both sides are checked at `type` first.
Result<bool> convertible(const Environment& env, const Telescope& ctx, const TermPtr& lhs, const TermPtr& rhs,
                         const TermPtr& type, const CheckOptions& opts = {});

/// β/♯/♭/rewrite normal form of a checked term.
Result<TermPtr> normalize(const Environment& env, const Telescope& ctx, const TermPtr& t,
                          const CheckOptions& opts = {});

Result<Environment> check_declaration(const Environment& env, const Declaration& decl,
                                      const CheckOptions& opts = {});
Result<Environment> check_rewrite(const Environment& env, const RewriteRule& rule, const CheckOptions& opts = {});

}  // namespace cohesive
