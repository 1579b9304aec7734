#pragma once

// Property suites over the corpus and over random inputs. Each returns a
// PropertyReport; the unit tests assert on it and the acceptance binary
// prints it.

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cohesive/corpus.hpp"
#include "cohesive/kernel.hpp"
#include "cohesive/parser.hpp"
#include "term_gen.hpp"

namespace cohesive::props {

struct PropertyReport {
  std::string name;
  std::size_t cases = 0;
  std::vector<std::string> failures;

  bool passed() const { return cases > 0 && failures.empty(); }

  void fail(const std::string& why) {
    if (failures.size() < 20) failures.push_back(why);
    else if (failures.size() == 20) failures.push_back("...");
  }
};

inline std::filesystem::path corpus_dir() { return COHESIVE_CORPUS_DIR; }

struct Observation {
  Telescope ctx;
  TermPtr term;
  TermPtr type;
};

/// Every inference made while checking the must-check corpus files, each
/// paired with the environment it was made in.
struct CorpusObservations {
  Environment env;  // after the last file
  std::vector<Observation> seen;
  std::vector<std::string> errors;
};

inline CorpusObservations observe_corpus() {
  CorpusObservations out;
  auto manifest = load_manifest(corpus_dir() / "manifest.txt");
  if (!manifest.ok()) {
    out.errors.push_back(manifest.error().render());
    return out;
  }
  CheckOptions opts;
  opts.observer = [&](const Telescope& ctx, const TermPtr& t, const TermPtr& ty) {
    out.seen.push_back({ctx, t, ty});
  };
  for (const auto& e : manifest.value().entries) {
    if (e.expectation == Expectation::Fail) continue;
    auto outcome = check_file(out.env, manifest.value().root / e.file, opts);
    if (!outcome.ok()) {
      out.errors.push_back(outcome.diagnostic->render());
      continue;
    }
    out.env = std::move(outcome.env);
  }
  return out;
}

inline std::vector<std::string> names_of(const Telescope& ctx) { return ctx.names(); }

/// normalize(normalize t) = normalize t.
inline PropertyReport normalize_idempotent(const CorpusObservations& obs) {
  PropertyReport r{"normalize idempotence on every corpus term"};
  for (const auto& o : obs.seen) {
    ++r.cases;
    auto once = normalize(obs.env, o.ctx, o.term);
    if (!once.ok()) {
      r.fail("normalize failed on " + print_term(o.term, names_of(o.ctx)) + ": " + once.error().message);
      continue;
    }
    auto twice = normalize(obs.env, o.ctx, once.value());
    if (!twice.ok() || !alpha_equal(once.value(), twice.value())) {
      r.fail("not idempotent: " + print_term(o.term, names_of(o.ctx)));
    }
  }
  return r;
}

/// infer(ctx, t) = T implies check(ctx, t, T).
inline PropertyReport infer_check_round_trip(const CorpusObservations& obs) {
  PropertyReport r{"infer/check round trip on every corpus subterm"};
  for (const auto& o : obs.seen) {
    ++r.cases;
    if (auto d = check(obs.env, o.ctx, o.term, o.type)) {
      r.fail(print_term(o.term, names_of(o.ctx)) + ": " + d->message);
    }
  }
  return r;
}

/// The normal form still has the inferred type.
inline PropertyReport preservation(const CorpusObservations& obs) {
  PropertyReport r{"type preservation under normalization"};
  for (const auto& o : obs.seen) {
    ++r.cases;
    auto nf = normalize(obs.env, o.ctx, o.term);
    if (!nf.ok()) {
      r.fail("normalize failed: " + nf.error().message);
      continue;
    }
    if (auto d = check(obs.env, o.ctx, nf.value(), o.type)) {
      r.fail(print_term(nf.value(), names_of(o.ctx)) + ": " + d->message);
    }
  }
  return r;
}

/// infer(ctx, t) = T implies infer(ctx + fresh, shift t) = shift T.
inline PropertyReport weakening(const CorpusObservations& obs) {
  PropertyReport r{"weakening by a fresh cohesive Unit entry"};
  for (const auto& o : obs.seen) {
    ++r.cases;
    auto wider = o.ctx.extended(Entry{"fresh", mk::unit(), Polarity::Cohesive});
    auto ty = infer(obs.env, wider, shift(o.term, 0, 1));
    if (!ty.ok()) {
      r.fail(print_term(o.term, names_of(o.ctx)) + ": " + ty.error().message);
      continue;
    }
    auto expected = normalize(obs.env, wider, shift(o.type, 0, 1));
    if (!expected.ok() || !alpha_equal(ty.value(), expected.value())) {
      r.fail("type changed under weakening: " + print_term(o.term, names_of(o.ctx)));
    }
  }
  return r;
}

inline bool same_telescope(const Telescope& a, const Telescope& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.at_level(i);
    const auto& y = b.at_level(i);
    if (x.polarity != y.polarity || !alpha_equal(x.type, y.type)) return false;
  }
  return true;
}

/// promote is idempotent and well-formedness preserving; is_crisp is
/// monotone under promote; the crisp restriction is well formed.
inline PropertyReport telescope_properties(std::uint64_t seed, std::size_t count) {
  PropertyReport r{"promote idempotence and is_crisp monotonicity on random telescopes"};
  gen::TermGen g(seed, {"c", "d"});
  for (std::size_t i = 0; i < count; ++i) {
    ++r.cases;
    auto ctx = gen::telescope(g, 8, 3);
    std::ostringstream tag;
    tag << "telescope #" << i << " (" << ctx.size() << " entries)";
    if (!ctx.well_formed()) {
      r.fail(tag.str() + ": generator produced an ill-formed telescope");
      continue;
    }
    auto p = promote(ctx);
    if (!p.well_formed()) r.fail(tag.str() + ": promote broke well-formedness");
    if (!same_telescope(promote(p), p)) r.fail(tag.str() + ": promote is not idempotent");
    for (const auto& e : p.entries()) {
      if (e.polarity != Polarity::Crisp) r.fail(tag.str() + ": promote left a cohesive entry");
    }
    auto restricted = crisp_restriction(ctx);
    if (!restricted || !restricted->well_formed()) r.fail(tag.str() + ": crisp restriction is ill formed");
    for (int k = 0; k < 4; ++k) {
      auto t = g.term(ctx.size(), 3);
      bool before = static_cast<bool>(is_crisp(ctx, t));
      bool after = static_cast<bool>(is_crisp(p, t));
      if (before && !after) r.fail(tag.str() + ": is_crisp not monotone under promote");
      if (!after) r.fail(tag.str() + ": a term over a promoted telescope is not crisp");
    }
  }
  return r;
}

/// resolve(parse(print t)) = t, and shift/subst/instantiate/free_vars agree
/// with the named-variable oracle.
inline PropertyReport syntax_round_trip(const Environment& env, std::uint64_t seed, std::size_t count) {
  PropertyReport r{"print/parse/resolve round trip and named-variable oracle on random terms"};
  std::vector<std::string> constants;
  for (const auto& n : env.order()) {
    if (constants.size() < 6) constants.push_back(n);
  }
  gen::TermGen g(seed, constants);
  for (std::size_t i = 0; i < count; ++i) {
    ++r.cases;
    std::size_t n = g.below(4);
    auto t = g.term(n, 5);
    auto scope = gen::scope_names(n);
    std::string text = print_term(t, scope);
    std::string tag = "term #" + std::to_string(i) + " `" + text + "`";

    auto parsed = parse_term(text);
    if (!parsed.ok()) {
      r.fail(tag + ": " + parsed.error().message);
      continue;
    }
    auto back = resolve_term(*parsed.value(), env, scope);
    if (!back.ok()) {
      r.fail(tag + ": " + back.error().message);
      continue;
    }
    if (!alpha_equal(back.value(), t)) r.fail(tag + ": reparsed as `" + print_term(back.value(), scope) + "`");

    if (free_vars(t) != gen::oracle_free_vars(t, n)) r.fail(tag + ": free_vars disagrees with the oracle");

    std::size_t cutoff = g.below(n + 1);
    std::size_t amount = g.below(3);
    if (!alpha_equal(shift(t, cutoff, static_cast<std::ptrdiff_t>(amount)), gen::oracle_shift(t, n, cutoff, amount))) {
      r.fail(tag + ": shift disagrees with the oracle");
    }
    if (!alpha_equal(shift(shift(t, cutoff, 1), cutoff, 2), shift(t, cutoff, 3))) {
      r.fail(tag + ": shift does not compose");
    }
    auto rep = g.term(n, 2);
    if (!alpha_equal(subst(shift(t, 0, 1), 0, shift(rep, 0, 1)), shift(t, 0, 1))) {
      r.fail(tag + ": substituting for a variable that was shifted away changed the term");
    }
    if (n > 0) {
      std::size_t target = g.below(n);
      if (!alpha_equal(subst(t, target, rep), gen::oracle_subst(t, n, target, rep))) {
        r.fail(tag + ": subst disagrees with the oracle");
      }
      // Treat index 0 as the bound variable of an enclosing binder.
      auto outer = g.term(n - 1, 2);
      if (!alpha_equal(instantiate(t, outer), gen::oracle_instantiate(t, n - 1, outer))) {
        r.fail(tag + ": instantiate disagrees with the oracle");
      }
    }
  }
  return r;
}

}  // namespace cohesive::props
