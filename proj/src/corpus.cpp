#include "cohesive/corpus.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cohesive/parser.hpp"

namespace cohesive {

namespace {

using Json = nlohmann::ordered_json;

Json diagnostic_object(const Diagnostic& d) {
  Json ctx = Json::array();
  for (const auto& line : d.context) {
    ctx.push_back(Json{{"name", line.name}, {"type", line.type}, {"polarity", polarity_name(line.polarity)}});
  }
  return Json{{"code", code_name(d.code)}, {"message", d.message}, {"file", d.file},
              {"line", d.span.line},       {"col", d.span.col},       {"context", ctx}};
}

Diagnostic io_error(const std::string& file, const std::string& message) {
  Diagnostic d;
  d.code = Code::ParseError;
  d.file = file;
  d.message = message;
  return d;
}

}  // namespace

FileOutcome check_source(const Environment& env, std::string_view source, const std::string& file,
                         const CheckOptions& opts, const DeclarationHook& on_checked) {
  FileOutcome out{env, std::nullopt, 0};
  auto parsed = parse_module(source, file);
  if (!parsed.ok()) {
    out.diagnostic = parsed.error();
    return out;
  }
  std::set<std::string> seen;
  for (const auto& sdecl : parsed.value()) {
    // Names from this file are already in `out.env` once checked.
    auto decl = resolve_declaration(sdecl, out.env);
    if (!decl.ok()) {
      out.diagnostic = decl.error();
      out.diagnostic->file = file;
      return out;
    }
    auto next = check_declaration(out.env, decl.value(), opts);
    if (!next.ok()) {
      out.diagnostic = next.error();
      out.diagnostic->file = file;
      if (!out.diagnostic->span.known()) out.diagnostic->span = sdecl.span;
      return out;
    }
    out.env = std::move(next.value());
    ++out.checked;
    if (on_checked) on_checked(decl.value());
  }
  return out;
}

FileOutcome check_file(const Environment& env, const std::filesystem::path& path, const CheckOptions& opts,
                       const DeclarationHook& on_checked) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return FileOutcome{env, io_error(path.string(), "cannot read file"), 0};
  std::stringstream buf;
  buf << in.rdbuf();
  return check_source(env, buf.str(), path.string(), opts, on_checked);
}

int exit_status(const Diagnostic& d) {
  return d.code == Code::ParseError || d.code == Code::ScopeError ? 2 : 1;
}

std::vector<std::string> Manifest::tiers() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (std::find(out.begin(), out.end(), e.tier) == out.end()) out.push_back(e.tier);
  }
  return out;
}

Result<Manifest> parse_manifest(std::string_view text, const std::filesystem::path& root) {
  Manifest m;
  m.root = root;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::uint32_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    ManifestEntry e;
    std::string expectation;
    if (!(words >> e.tier)) continue;
    auto bad = [&](const std::string& why) {
      Diagnostic d;
      d.code = Code::ParseError;
      d.message = "manifest line " + std::to_string(lineno) + ": " + why;
      d.span = Span{lineno, 1, lineno, 1};
      return d;
    };
    if (!(words >> e.file >> expectation)) return bad("expected `tier file expectation`");
    if (expectation == "check") {
      e.expectation = Expectation::Check;
    } else if (expectation == "stated") {
      e.expectation = Expectation::Stated;
    } else if (expectation.rfind("fail:", 0) == 0) {
      auto code = code_from_name(expectation.substr(5));
      if (!code) return bad("unknown diagnostic code in '" + expectation + "'");
      e.expectation = Expectation::Fail;
      e.code = *code;
    } else {
      return bad("unknown expectation '" + expectation + "'");
    }
    words >> e.label;
    std::getline(words >> std::ws, e.anchor);
    while (!e.anchor.empty() && std::isspace(static_cast<unsigned char>(e.anchor.back()))) e.anchor.pop_back();
    if (e.label.empty()) e.label = std::filesystem::path(e.file).stem().string();
    m.entries.push_back(std::move(e));
  }
  return m;
}

Result<Manifest> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return io_error(path.string(), "cannot read manifest");
  std::stringstream buf;
  buf << in.rdbuf();
  auto m = parse_manifest(buf.str(), path.parent_path());
  if (!m.ok()) {
    auto d = m.error();
    d.file = path.string();
    return d;
  }
  for (const auto& e : m.value().entries) {
    if (!std::filesystem::exists(m.value().root / e.file)) {
      return io_error(path.string(), "manifest lists missing file '" + e.file + "'");
    }
  }
  return m;
}

std::string expectation_text(const ManifestEntry& e) {
  switch (e.expectation) {
    case Expectation::Check: return "check";
    case Expectation::Stated: return "stated";
    case Expectation::Fail: return std::string("fail:") + code_name(e.code);
  }
  return "?";
}

std::vector<TargetRecord> list_targets(const Manifest& manifest) {
  std::vector<TargetRecord> out;
  for (const auto& e : manifest.entries) {
    out.push_back({e.tier, e.file, e.label, e.anchor, expectation_text(e)});
  }
  return out;
}

bool CorpusReport::passed() const { return count_passed() == files.size(); }

std::size_t CorpusReport::count_passed() const {
  std::size_t n = 0;
  for (const auto& f : files) n += f.passed ? 1 : 0;
  return n;
}

CorpusReport run_corpus(const Manifest& manifest, const std::optional<std::string>& tier, const CheckOptions& opts) {
  CorpusReport report;
  auto run_file = [&](const ManifestEntry& e, const Environment& env) {
    FileReport r;
    r.tier = e.tier;
    r.file = e.file;
    r.label = e.label;
    r.expectation = expectation_text(e);
    auto start = std::chrono::steady_clock::now();
    auto outcome = check_file(env, manifest.root / e.file, opts);
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (outcome.ok()) {
      r.outcome = "checked";
      r.passed = e.expectation != Expectation::Fail;
    } else {
      outcome.diagnostic->file = e.file;
      r.outcome = code_name(outcome.diagnostic->code);
      r.passed = e.expectation == Expectation::Fail && outcome.diagnostic->code == e.code;
      r.diagnostic = outcome.diagnostic;
    }
    return std::make_pair(r, std::move(outcome.env));
  };

  // Tiers run in manifest order on one accumulating environment. With a
  // filter, earlier tiers still load; they are reported only if they fail.
  Environment env;
  for (const auto& name : manifest.tiers()) {
    bool selected = !tier || *tier == name;
    for (const auto& e : manifest.entries) {
      if (e.tier != name) continue;
      auto [r, next] = run_file(e, env);
      if (r.outcome == "checked" && e.expectation != Expectation::Fail) env = std::move(next);
      if (selected || !r.passed) report.files.push_back(std::move(r));
    }
    if (tier && *tier == name) break;
  }
  return report;
}

std::string diagnostic_json(const Diagnostic& d) { return diagnostic_object(d).dump(); }

std::string report_json(const CorpusReport& report) {
  Json arr = Json::array();
  for (const auto& f : report.files) {
    Json o{{"tier", f.tier},   {"file", f.file},       {"label", f.label}, {"expectation", f.expectation},
           {"outcome", f.outcome}, {"passed", f.passed}};
    o["diagnostic"] = f.diagnostic ? diagnostic_object(*f.diagnostic) : Json(nullptr);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::string report_table(const CorpusReport& report) {
  std::size_t width = 4;
  for (const auto& f : report.files) width = std::max(width, f.file.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width) + 2) << "file" << std::setw(26) << "expectation"
      << std::setw(22) << "outcome" << std::setw(6) << "ok" << "ms\n";
  for (const auto& f : report.files) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << f.file << std::setw(26) << f.expectation
        << std::setw(22) << f.outcome << std::setw(6) << (f.passed ? "pass" : "FAIL") << std::fixed
        << std::setprecision(1) << f.millis << '\n';
  }
  out << report.count_passed() << '/' << report.files.size() << " files met their expectation\n";
  for (const auto& f : report.files) {
    if (!f.passed && f.diagnostic) out << "\n" << f.diagnostic->render() << '\n';
  }
  return out.str();
}

}  // namespace cohesive
