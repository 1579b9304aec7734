#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cohesive/diagnostic.hpp"
#include "cohesive/environment.hpp"
#include "cohesive/kernel.hpp"

namespace cohesive {

/// Outcome of checking one source text declaration by declaration.
struct FileOutcome {
  Environment env;  // extended with every declaration that checked
  std::optional<Diagnostic> diagnostic;
  std::size_t checked = 0;

  bool ok() const { return !diagnostic.has_value(); }
};

using DeclarationHook = std::function<void(const Declaration&)>;

/// Parse, resolve and check `source` against `env`, stopping at the first
/// diagnostic. `file` is recorded in diagnostics.
FileOutcome check_source(const Environment& env, std::string_view source, const std::string& file,
                         const CheckOptions& opts = {}, const DeclarationHook& on_checked = {});

/// As check_source, reading from disk. A missing file yields a ParseError
/// diagnostic whose message says so.
FileOutcome check_file(const Environment& env, const std::filesystem::path& path, const CheckOptions& opts = {},
                       const DeclarationHook& on_checked = {});

/// Process exit status for a diagnostic: 2 for parse/scope/IO trouble,
/// 1 for semantic failures.
int exit_status(const Diagnostic& d);

enum class Expectation {
  Check,   // a proof that must check
  Stated,  // statement only (postulated); must check
  Fail,    // must be rejected with `code`
};

struct ManifestEntry {
  std::string tier;
  std::string file;  // relative to the manifest directory
  Expectation expectation = Expectation::Check;
  Code code = Code::TypeMismatch;
  std::string label;
  std::string anchor;
};

/// Plain-text manifest, one file per line:
///   tier  file  expectation  [label  [anchor text ...]]
/// where expectation is `check`, `stated` or `fail:Code`; `#` starts a comment.
/// Tiers are ordered by first appearance; each sees all earlier tiers.
struct Manifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  /// Tier names in order of first appearance.
  std::vector<std::string> tiers() const;
};

Result<Manifest> parse_manifest(std::string_view text, const std::filesystem::path& root);
Result<Manifest> load_manifest(const std::filesystem::path& path);

std::string expectation_text(const ManifestEntry& e);

struct TargetRecord {
  std::string tier;
  std::string file;
  std::string label;
  std::string anchor;
  std::string status;
};

std::vector<TargetRecord> list_targets(const Manifest& manifest);

struct FileReport {
  std::string tier;
  std::string file;
  std::string label;
  std::string expectation;
  std::string outcome;  // "checked" or the diagnostic code
  bool passed = false;
  double millis = 0;
  std::optional<Diagnostic> diagnostic;
};

struct CorpusReport {
  std::vector<FileReport> files;

  bool passed() const;
  std::size_t count_passed() const;
};

/// Checks every tier in manifest order against the declarations of all
/// earlier files. A filter reports only that tier (plus failures of the
/// tiers it depends on); an empty filter reports everything.
CorpusReport run_corpus(const Manifest& manifest, const std::optional<std::string>& tier,
                        const CheckOptions& opts = {});

/// Deterministic JSON (no timings); newline-terminated.
std::string report_json(const CorpusReport& report);
std::string report_table(const CorpusReport& report);

std::string diagnostic_json(const Diagnostic& d);

}  // namespace cohesive
