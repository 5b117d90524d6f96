#include "desiree/desiree.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace desiree;
using nlohmann::json;

namespace {

constexpr int kClean = 0;
constexpr int kErrors = 1;
constexpr int kUsage = 2;

struct Globals {
  bool json = false;
  bool lenient = false;
  std::size_t max_dnf = kDefaultMaxDnf;
  bool color = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* paint(const Globals& g, Severity s) {
  if (!g.color) return "";
  switch (s) {
    case Severity::Error: return "\033[31m";
    case Severity::Warning: return "\033[33m";
    case Severity::Info: return "\033[36m";
  }
  return "";
}

json diagnostic_json(const Diagnostic& d) {
  return {{"severity", to_string(d.severity)},
          {"code", d.code},
          {"line", d.span.line},
          {"column", d.span.column},
          {"message", d.message},
          {"related", d.related}};
}

void print_diagnostics(const Globals& g, const std::string& file, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    std::cout << file << ":" << d.span.line << ":" << d.span.column << ": " << paint(g, d.severity)
              << to_string(d.severity) << "[" << d.code << "]" << (g.color ? "\033[0m" : "") << ": " << d.message
              << "\n";
  }
}

LoadResult load(const Globals& g, const std::string& file) {
  LoadOptions options;
  options.max_dnf = g.max_dnf;
  return load_model_text(read_file(file), options);
}

std::size_t count(const std::vector<Diagnostic>& diags, Severity s) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.severity == s; }));
}

int cmd_check(const Globals& g, const std::string& file) {
  LoadResult r = load(g, file);
  const auto clashes = check_consistency(r.store);
  auto diags = r.diagnostics;
  const auto cons = consistency_diagnostics(clashes);
  diags.insert(diags.end(), cons.begin(), cons.end());
  sort_diagnostics(diags);

  const std::size_t errors = count(diags, Severity::Error);
  const std::size_t warnings = count(diags, Severity::Warning);
  if (g.json) {
    json out = {{"file", file}, {"diagnostics", json::array()}, {"clashes", json::array()}};
    for (const auto& d : diags) out["diagnostics"].push_back(diagnostic_json(d));
    for (const auto& c : clashes) out["clashes"].push_back(clash_json(c));
    out["summary"] = {{"errors", errors}, {"warnings", warnings}, {"clashes", clashes.size()}};
    std::cout << out.dump(2) << "\n";
  } else {
    print_diagnostics(g, file, diags);
    std::cout << file << ": " << errors << " error(s), " << warnings << " warning(s); consistency: "
              << (clashes.empty() ? std::string("no clashes") : std::to_string(clashes.size()) + " clash(es)")
              << "\n";
  }
  return errors ? kErrors : kClean;
}

int cmd_entail(const Globals& g, const std::string& file, const std::string& id1, const std::string& id2) {
  LoadResult r = load(g, file);
  const Element* a = r.store.find(id1);
  const Element* b = r.store.find(id2);
  if (!a || !b) throw UsageError("unknown element " + (a ? id2 : id1));
  const Verdict3 v = entails(r.store, *a, *b, g.max_dnf);
  if (g.json) {
    json out = {{"premise", id1}, {"conclusion", id2}, {"verdict", to_string(v.kind)}, {"reason", v.reason}};
    if (v.witness) out["witness"] = {{"root", v.witness_root}, {"interpretation", v.witness->to_json()}};
    std::cout << out.dump(2) << "\n";
    return kClean;
  }
  std::cout << id1 << " |= " << id2 << ": " << to_string(v.kind);
  if (!v.reason.empty()) std::cout << " (" << v.reason << ")";
  std::cout << "\n";
  if (v.witness) std::cout << "witness root " << v.witness_root << ": " << v.witness->to_json().dump() << "\n";
  return kClean;
}

int cmd_query(const Globals& g, const std::string& file, const std::string& text) {
  LoadResult r = load(g, file);
  DescRef q;
  try {
    q = parse_description(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad query: ") + e.what());
  }
  QueryOptions options;
  options.lenient = g.lenient;
  options.max_dnf = g.max_dnf;
  QueryResult res;
  try {
    res = eval_query(r.store, *q, options);
  } catch (const UnknownRelation& e) {
    throw UsageError(std::string("bad query: ") + e.what());
  }
  if (g.json) {
    std::cout << json{{"query", render_description(*q)}, {"ids", res.ids}, {"tentative", res.tentative}}.dump(2)
              << "\n";
    return kClean;
  }
  for (const auto& id : res.ids) std::cout << id << (res.tentative.count(id) ? " (tentative)" : "") << "\n";
  return kClean;
}

int cmd_stats(const Globals& g, const std::string& file) {
  LoadResult r = load(g, file);
  const ModelStats s = stats(r.store);
  if (g.json) {
    std::cout << stats_json(s).dump(2) << "\n";
    return kClean;
  }
  std::cout << std::left << std::setw(6) << "kind" << std::right << std::setw(7) << "total" << std::setw(8)
            << "active" << std::setw(9) << "dropped" << "\n";
  auto row = [](const std::string& name, const KindCount& c) {
    std::ostringstream os;
    os << std::left << std::setw(6) << name << std::right << std::setw(7) << c.total << std::setw(8) << c.active
       << std::setw(9) << c.dropped << "\n";
    return os.str();
  };
  for (const auto& [k, c] : s.per_kind) std::cout << row(display_name(k), c);
  std::cout << row("all", s.elements);
  std::cout << "applications " << s.applications << "\naxioms " << s.axioms << "\nconflicts " << s.conflicts << "\n";
  return kClean;
}

int cmd_export(const Globals& g, const std::string& file, const std::string& format) {
  LoadResult r = load(g, file);
  if (format == "json") {
    std::cout << export_json(r.store).dump(2) << "\n";
  } else {
    std::cout << export_dot(r.store);
  }
  return kClean;
}

int cmd_fmt(const Globals& g, const std::string& file, bool write) {
  const std::string text = read_file(file);
  const auto formatted = format_model_file(text);
  if (!formatted) {
    print_diagnostics(g, file, parse_model_file(text).diagnostics);
    return kErrors;
  }
  const std::string& out = *formatted;
  if (!write) {
    std::cout << out;
    return kClean;
  }
  if (out != text) {
    std::ofstream f(file, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write " + file);
    f << out;
  }
  return kClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check, query and reformat requirement models."};
  app.require_subcommand(1);
  Globals g;
  if (const char* c = std::getenv("DESIREE_COLOR")) g.color = std::string(c) == "1";
  app.add_flag("--json", g.json, "Machine-readable output")->configurable(false);
  app.add_flag("--lenient", g.lenient, "Accept query matches the reasoner cannot decide");
  app.add_option("--max-dnf", g.max_dnf, "Disjunct cap for normal forms")->check(CLI::PositiveNumber);
  app.fallthrough();

  std::string file, id1, id2, text, format = "json";
  bool write = false;
  auto* check = app.add_subcommand("check", "Parse, validate, verify strengths and check consistency");
  check->add_option("file", file)->required();
  auto* entail = app.add_subcommand("entail", "Decide whether one element entails another");
  entail->add_option("file", file)->required();
  entail->add_option("premise", id1)->required();
  entail->add_option("conclusion", id2)->required();
  auto* query = app.add_subcommand("query", "Ids matching a description-shaped query");
  query->add_option("file", file)->required();
  query->add_option("query", text)->required();
  auto* stats_cmd = app.add_subcommand("stats", "Element counts per kind");
  stats_cmd->add_option("file", file)->required();
  auto* export_cmd = app.add_subcommand("export", "Write the model as JSON or DOT");
  export_cmd->add_option("file", file)->required();
  export_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
  auto* fmt = app.add_subcommand("fmt", "Rewrite a model file in canonical form");
  fmt->add_option("file", file)->required();
  fmt->add_flag("--write", write, "Rewrite the file in place");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(g, file);
    if (*entail) return cmd_entail(g, file, id1, id2);
    if (*query) return cmd_query(g, file, text);
    if (*stats_cmd) return cmd_stats(g, file);
    if (*export_cmd) return cmd_export(g, file, format);
    if (*fmt) return cmd_fmt(g, file, write);
  } catch (const UsageError& e) {
    std::cerr << "desiree: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
