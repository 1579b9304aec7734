// cohc: check proof files, normalize terms, run the corpus.
//
//   cohc check FILE...            exit 0 iff every file checks
//   cohc eval EXPR [FILE...]      print the normal form of EXPR and its type
//   cohc corpus [--tier NAME]     run the manifest; --list prints the targets
//
// Exit status: 0 success, 1 semantic failure, 2 usage, parse, scope or I/O.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohesive/corpus.hpp"
#include "cohesive/kernel.hpp"
#include "cohesive/parser.hpp"

#ifndef COHC_DEFAULT_MANIFEST
#define COHC_DEFAULT_MANIFEST "corpus/manifest.txt"
#endif

namespace {

using namespace cohesive;
using Json = nlohmann::ordered_json;

struct Config {
  std::vector<std::string> files;
  std::string expr;
  bool json = false;
  std::optional<std::uint64_t> fuel;
  std::optional<std::string> tier;
  std::string manifest;
  bool list = false;
};

std::uint64_t resolve_fuel(const Config& cfg) {
  if (cfg.fuel) return *cfg.fuel;
  if (const char* env = std::getenv("COHC_FUEL")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "cohc: ignoring malformed COHC_FUEL='" << env << "'\n";
    }
  }
  return kDefaultFuel;
}

void print_diagnostics(const std::vector<Diagnostic>& diags, bool json) {
  if (json) {
    Json arr = Json::array();
    for (const auto& d : diags) arr.push_back(Json::parse(diagnostic_json(d)));
    std::cout << arr.dump(2) << '\n';
    return;
  }
  for (const auto& d : diags) std::cerr << d.render() << '\n';
}

int cmd_check(const Config& cfg) {
  CheckOptions opts;
  opts.fuel = resolve_fuel(cfg);
  Environment env;
  std::vector<Diagnostic> diags;
  int status = 0;
  for (const auto& file : cfg.files) {
    auto hook = [&](const Declaration& d) {
      if (!cfg.json) std::cout << "OK " << d.name() << '\n';
    };
    auto outcome = check_file(env, file, opts, hook);
    env = std::move(outcome.env);
    if (!outcome.ok()) {
      status = std::max(status, exit_status(*outcome.diagnostic));
      diags.push_back(*outcome.diagnostic);
    }
  }
  print_diagnostics(diags, cfg.json);
  return status;
}

int cmd_eval(const Config& cfg) {
  CheckOptions opts;
  opts.fuel = resolve_fuel(cfg);
  Environment env;
  for (const auto& file : cfg.files) {
    auto outcome = check_file(env, file, opts);
    if (!outcome.ok()) {
      print_diagnostics({*outcome.diagnostic}, cfg.json);
      return exit_status(*outcome.diagnostic);
    }
    env = std::move(outcome.env);
  }
  auto fail_with = [&](Diagnostic d) {
    d.file = "<expr>";
    print_diagnostics({d}, cfg.json);
    return exit_status(d);
  };
  auto parsed = parse_term(cfg.expr);
  if (!parsed.ok()) return fail_with(parsed.error());
  auto term = resolve_term(*parsed.value(), env);
  if (!term.ok()) return fail_with(term.error());
  auto type = infer(env, Telescope{}, term.value(), opts);
  if (!type.ok()) return fail_with(type.error());
  auto normal = normalize(env, Telescope{}, term.value(), opts);
  if (!normal.ok()) return fail_with(normal.error());
  auto type_nf = normalize(env, Telescope{}, type.value(), opts);
  if (!type_nf.ok()) return fail_with(type_nf.error());
  if (cfg.json) {
    Json arr = Json::array();
    arr.push_back(Json{{"term", print_term(normal.value())}, {"type", print_term(type_nf.value())}});
    std::cout << arr.dump(2) << '\n';
  } else {
    std::cout << print_term(normal.value()) << " : " << print_term(type_nf.value()) << '\n';
  }
  return 0;
}

std::filesystem::path default_manifest() {
  std::filesystem::path local = "corpus/manifest.txt";
  if (std::filesystem::exists(local)) return local;
  return COHC_DEFAULT_MANIFEST;
}

int cmd_corpus(const Config& cfg) {
  CheckOptions opts;
  opts.fuel = resolve_fuel(cfg);
  auto manifest = load_manifest(cfg.manifest.empty() ? default_manifest() : std::filesystem::path(cfg.manifest));
  if (!manifest.ok()) {
    print_diagnostics({manifest.error()}, cfg.json);
    return 2;
  }
  if (cfg.list) {
    auto targets = list_targets(manifest.value());
    if (cfg.json) {
      Json arr = Json::array();
      for (const auto& t : targets) {
        arr.push_back(Json{{"tier", t.tier}, {"file", t.file}, {"label", t.label}, {"anchor", t.anchor},
                           {"status", t.status}});
      }
      std::cout << arr.dump(2) << '\n';
    } else {
      for (const auto& t : targets) {
        std::cout << t.tier << "  " << t.file << "  " << t.status << "  " << t.label;
        if (!t.anchor.empty()) std::cout << "  -- " << t.anchor;
        std::cout << '\n';
      }
    }
    return 0;
  }
  if (cfg.tier) {
    auto tiers = manifest.value().tiers();
    if (std::find(tiers.begin(), tiers.end(), *cfg.tier) == tiers.end()) {
      std::cerr << "cohc: unknown tier '" << *cfg.tier << "'\n";
      return 2;
    }
  }
  auto report = run_corpus(manifest.value(), cfg.tier, opts);
  std::cout << (cfg.json ? report_json(report) : report_table(report));
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohc: a proof checker for spatial type theory with the flat and sharp modalities"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", cfg.json, "Emit JSON instead of text");
    sub->add_option("--fuel", cfg.fuel, "Reduction budget per query (overrides COHC_FUEL)")
        ->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "Check proof files in order");
  add_common(check);
  check->add_option("files", cfg.files, "Proof files (.coh)")->required();

  auto* eval = app.add_subcommand("eval", "Normalize an expression against the given files");
  add_common(eval);
  eval->add_option("expr", cfg.expr, "Expression")->required();
  eval->add_option("files", cfg.files, "Proof files loaded first");

  auto* corpus = app.add_subcommand("corpus", "Run the corpus manifest");
  add_common(corpus);
  corpus->add_option("--tier", cfg.tier, "Only report this tier (earlier tiers still load)");
  corpus->add_option("--manifest", cfg.manifest, "Manifest path (default corpus/manifest.txt)");
  corpus->add_flag("--list", cfg.list, "List targets instead of checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (check->parsed()) return cmd_check(cfg);
  if (eval->parsed()) return cmd_eval(cfg);
  return cmd_corpus(cfg);
}
