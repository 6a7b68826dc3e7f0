#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "cfsmkit/compose.hpp"
#include "cfsmkit/detail/lexer.hpp"
#include "cfsmkit/gateway.hpp"
#include "cfsmkit/globaltype.hpp"
#include "cfsmkit/gtir.hpp"
#include "cfsmkit/io.hpp"
#include "cfsmkit/safety.hpp"

namespace cfsmkit::cli {

namespace {

namespace fs = std::filesystem;

/// Input problems that are not syntax errors (missing files, bad flags).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string format;
  std::string output;
  std::size_t bound = 4;
  std::size_t max_states = 1'000'000;
  unsigned jobs = 1;
  bool components = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

enum class InputKind { Json, Gtir, GlobalType };

InputKind sniff(const std::string& text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '{') return InputKind::Json;
  // Comments are skipped by the tokenizer, so look at the first token.
  try {
    const auto toks = detail::tokenize(text);
    if (!toks.empty() && toks[0].kind == detail::Tok::Ident &&
        (toks[0].text == "global" || toks[0].text == "connect" || toks[0].text == "base")) {
      return InputKind::Gtir;
    }
  } catch (const ParseError&) {
  }
  return InputKind::GlobalType;
}

void emit(const Settings& s, const std::string& text, std::ostream& out) {
  if (s.output.empty() || s.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(s.output, std::ios::binary);
  if (!f || !(f << text)) throw InputError("cannot write " + s.output);
}

void require_format(const Settings& s, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (s.format == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw InputError("--format must be one of: " + list);
}

int cmd_project(const Settings& s, const std::string& file, const std::string& role, std::ostream& out) {
  require_format(s, {"json", "dot"});
  const auto text = read_file(file);
  Cfsm m;
  switch (sniff(text)) {
    case InputKind::Gtir: {
      const auto doc = parse_gtir(text, fs::path(file).parent_path());
      m = project_gtir(*doc.expr, Role{role});
      break;
    }
    case InputKind::GlobalType:
      m = project(parse_global_type(text), Role{role});
      break;
    case InputKind::Json:
      throw InputError(file + " is a machine or system file, not a global type");
  }
  emit(s, s.format == "dot" ? to_dot(m) : to_json(m), out);
  return kOk;
}

int cmd_compat(const Settings& s, const std::string& a, const std::string& b, std::ostream& out) {
  require_format(s, {"text", "json"});
  const auto m1 = machine_from_json(read_file(a));
  const auto m2 = machine_from_json(read_file(b));
  const auto v = check_compatibility(m1, m2);
  std::string text;
  if (s.format == "json") {
    nlohmann::ordered_json j;
    j["schema"] = "cfsmkit.compat-report/1";
    j["compatible"] = v.compatible;
    auto& fs = j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : v.failures) {
      fs.push_back({{"kind", to_string(f.kind)}, {"role", f.role.name}, {"description", f.describe()}});
    }
    text = j.dump(2) + "\n";
  } else {
    text = std::string(v.compatible ? "compatible" : "incompatible") + "\n";
    for (const auto& f : v.failures) text += "  " + std::string(to_string(f.kind)) + ": " + f.describe() + "\n";
  }
  emit(s, text, out);
  return v.compatible ? kOk : kIncompatible;
}

int cmd_gateway(const Settings& s, const std::string& file, const std::string& partner, std::ostream& out) {
  require_format(s, {"json", "dot"});
  const auto g = gateway(machine_from_json(read_file(file)), Role{partner});
  emit(s, s.format == "dot" ? to_dot(g) : to_json(g), out);
  return kOk;
}

int exit_code(const SafetyReport& r) {
  if (r.any_violation()) return kViolation;
  return r.all_complete() ? kOk : kInconclusive;
}

int cmd_check(const Settings& s, const std::string& file, std::ostream& out, std::ostream& err) {
  require_format(s, {"text", "json", "dot"});
  const auto text = read_file(file);
  CommunicatingSystem system;
  std::vector<std::pair<std::string, CommunicatingSystem>> parts;
  switch (sniff(text)) {
    case InputKind::Json:
      system = system_from_json(text);
      break;
    case InputKind::GlobalType: {
      const auto g = parse_global_type(text);
      system = base_system(GtirBase{file, g, {}});
      break;
    }
    case InputKind::Gtir: {
      const auto doc = parse_gtir(text, fs::path(file).parent_path());
      if (auto v = validate_gtir(*doc.expr); !v.empty()) {
        for (const auto& x : v) err << "error: " << x.describe() << "\n";
        return kInvalidInput;
      }
      system = semantics(*doc.expr);
      if (s.components) {
        for (const auto* b : components(*doc.expr)) parts.emplace_back(b->name, base_system(*b));
      }
      break;
    }
  }
  if (s.format == "dot") {
    emit(s, to_dot(system), out);
    return kOk;
  }

  ExploreOptions o;
  o.max_buffer_bound = s.bound;
  o.max_states = s.max_states;
  o.jobs = s.jobs;

  int code = kOk;
  auto worst = [&](int c) {
    // violation beats inconclusive beats ok
    if (c == kViolation || (c == kInconclusive && code == kOk)) code = c;
  };
  std::string doc;
  if (s.format == "json") {
    doc = "[\n";
    for (const auto& [name, sys] : parts) {
      const auto r = check_safety(sys, o);
      worst(exit_code(r));
      doc += render_json(r, file + "#" + name) + ",\n";
    }
    const auto r = check_safety(system, o);
    worst(exit_code(r));
    doc += render_json(r, file) + "]\n";
    if (parts.empty()) doc = render_json(r, file);
  } else {
    for (const auto& [name, sys] : parts) {
      const auto r = check_safety(sys, o);
      worst(exit_code(r));
      doc += "component " + name + ":\n" + render_text(r) + "\n";
    }
    const auto r = check_safety(system, o);
    worst(exit_code(r));
    if (!parts.empty()) doc += "composed system:\n";
    doc += render_text(r);
  }
  emit(s, doc, out);
  return code;
}

std::size_t default_bound() {
  const char* env = std::getenv("CFSMKIT_BOUND");
  if (!env || !*env) return 4;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw InputError(std::string("CFSMKIT_BOUND must be a positive integer, got '") + env + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Communicating finite-state machines: projection, gateways, composition and safety checking",
               "cfsmkit"};
  app.require_subcommand(1);

  Settings s;
  long long bound = -1, max_states = 1'000'000, jobs = 1;
  std::string file, file2, role, partner;

  auto* project_cmd = app.add_subcommand("project", "Project a global type (or GTIR document) onto a role");
  project_cmd->add_option("file", file, "Global type or GTIR file")->required();
  project_cmd->add_option("--role,-r", role, "Role to project on")->required();

  auto* compat_cmd = app.add_subcommand("compat", "Check two interface machines for compatibility");
  compat_cmd->add_option("first", file, "Machine file")->required();
  compat_cmd->add_option("second", file2, "Machine file")->required();

  auto* gateway_cmd = app.add_subcommand("gateway", "Build the gateway of a machine toward a partner role");
  gateway_cmd->add_option("file", file, "Machine file")->required();
  gateway_cmd->add_option("--partner,-k", partner, "Partner role")->required();

  auto* check_cmd = app.add_subcommand("check", "Check a GTIR, global type or system file for safety");
  check_cmd->add_option("file", file, "Input file")->required();
  check_cmd->add_option("--bound,-b", bound, "Buffer bound (default 4, or $CFSMKIT_BOUND)");
  check_cmd->add_option("--max-states", max_states, "Maximum number of stored configurations");
  check_cmd->add_option("--jobs,-j", jobs, "Worker threads for exploration (0: all cores)");
  check_cmd->add_flag("--components", s.components, "Also check each base component of a GTIR");

  for (auto* c : {project_cmd, compat_cmd, gateway_cmd, check_cmd}) {
    c->add_option("--format,-f", s.format, "Output format: text, json or dot");
    c->add_option("--output,-o", s.output, "Write output to a file instead of stdout");
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (project_cmd->parsed()) {
      if (s.format.empty()) s.format = "json";
      return cmd_project(s, file, role, out);
    }
    if (compat_cmd->parsed()) {
      if (s.format.empty()) s.format = "text";
      return cmd_compat(s, file, file2, out);
    }
    if (gateway_cmd->parsed()) {
      if (s.format.empty()) s.format = "json";
      return cmd_gateway(s, file, partner, out);
    }
    if (s.format.empty()) s.format = "text";
    s.bound = bound < 0 ? default_bound() : static_cast<std::size_t>(bound);
    if (bound == 0) throw InputError("--bound must be positive");
    if (max_states < 1) throw InputError("--max-states must be positive");
    if (jobs < 0) throw InputError("--jobs must not be negative");
    s.max_states = static_cast<std::size_t>(max_states);
    s.jobs = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : static_cast<unsigned>(jobs);
    return cmd_check(s, file, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace cfsmkit::cli
