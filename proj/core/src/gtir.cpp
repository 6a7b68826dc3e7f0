#include "cfsmkit/gtir.hpp"

#include <fstream>
#include <sstream>

#include "cfsmkit/detail/lexer.hpp"

namespace cfsmkit {

namespace detail {
GlobalType parse_global_type_tokens(TokenStream& ts);
}

namespace {

std::string join(const std::set<Role>& rs) {
  std::string out;
  for (const auto& r : rs) {
    if (!out.empty()) out += ", ";
    out += r.name;
  }
  return out;
}

}  // namespace

GtirPtr GtirExpr::base(std::string name, GlobalType type, std::set<Role> interfaces) {
  validate(type);
  auto rs = cfsmkit::roles(type);
  for (const auto& i : interfaces) {
    if (!rs.contains(i)) {
      throw GtirError("interface role " + i.name + " does not occur in global type " + name);
    }
  }
  std::shared_ptr<GtirExpr> e(new GtirExpr(GtirBase{std::move(name), std::move(type), interfaces}));
  e->roles_ = std::move(rs);
  e->interfaces_ = std::move(interfaces);
  return e;
}

GtirPtr GtirExpr::connect(GtirPtr left, Role h, GtirPtr right, Role k) {
  if (!left || !right) throw GtirError("connect needs two operands");
  if (!left->interfaces().contains(h)) throw GtirError(h.name + " is not an interface role of the left operand");
  if (!right->interfaces().contains(k)) throw GtirError(k.name + " is not an interface role of the right operand");
  std::set<Role> shared;
  for (const auto& r : left->roles()) {
    if (right->roles().contains(r)) shared.insert(r);
  }
  if (!shared.empty()) throw GtirError("operands share roles {" + join(shared) + "}");

  std::set<Role> rs = left->roles();
  rs.insert(right->roles().begin(), right->roles().end());
  std::set<Role> is = left->interfaces();
  is.insert(right->interfaces().begin(), right->interfaces().end());
  is.erase(h);
  is.erase(k);

  std::shared_ptr<GtirExpr> e(new GtirExpr(GtirConnect{std::move(left), std::move(h), std::move(right), std::move(k)}));
  e->roles_ = std::move(rs);
  e->interfaces_ = std::move(is);
  return e;
}

namespace {

void collect(const GtirExpr& g, std::vector<const GtirBase*>& out) {
  if (const auto* b = std::get_if<GtirBase>(&g.node())) {
    out.push_back(b);
    return;
  }
  const auto& c = std::get<GtirConnect>(g.node());
  collect(*c.left, out);
  collect(*c.right, out);
}

}  // namespace

std::vector<const GtirBase*> components(const GtirExpr& g) {
  std::vector<const GtirBase*> out;
  collect(g, out);
  return out;
}

Cfsm project_gtir(const GtirExpr& g, const Role& p) {
  for (const auto* b : components(g)) {
    if (cfsmkit::roles(b->type).contains(p)) return project(b->type, p);
  }
  throw PreconditionError("role " + p.name + " does not occur in the expression");
}

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::InterfaceCommunication: return "interface-communication";
    case ViolationKind::IncompatibleInterfaces: return "incompatible-interfaces";
  }
  return "?";
}

std::string GtirViolation::describe() const {
  if (kind == ViolationKind::InterfaceCommunication) {
    return "component " + component + ": interface roles communicate (" + projected_role->name +
           " has " + to_string(*transition) + ")";
  }
  std::string out = "interfaces " + h->name + " and " + k->name + " are not compatible";
  for (const auto& f : verdict->failures) out += "\n  " + f.describe();
  return out;
}

namespace {

void validate_into(const GtirExpr& g, std::vector<GtirViolation>& out) {
  if (const auto* b = std::get_if<GtirBase>(&g.node())) {
    for (const auto& r : b->interfaces) {
      const auto m = project(b->type, r);
      for (const auto& t : m.transitions()) {
        if (b->interfaces.contains(t.action.peer())) {
          GtirViolation v{ViolationKind::InterfaceCommunication, b->name, r, t, {}, {}, {}};
          out.push_back(std::move(v));
        }
      }
    }
    return;
  }
  const auto& c = std::get<GtirConnect>(g.node());
  validate_into(*c.left, out);
  validate_into(*c.right, out);
  auto verdict = check_compatibility(project_gtir(*c.left, c.h), project_gtir(*c.right, c.k));
  if (!verdict.compatible) {
    out.push_back({ViolationKind::IncompatibleInterfaces, {}, {}, {}, c.h, c.k, std::move(verdict)});
  }
}

std::string summarize(const std::vector<GtirViolation>& v) {
  std::string out = "not a valid GTIR";
  for (const auto& x : v) out += "\n" + x.describe();
  return out;
}

}  // namespace

std::vector<GtirViolation> validate_gtir(const GtirExpr& g) {
  std::vector<GtirViolation> out;
  validate_into(g, out);
  return out;
}

InvalidGtir::InvalidGtir(std::vector<GtirViolation> v) : GtirError(summarize(v)), violations_(std::move(v)) {}

CommunicatingSystem base_system(const GtirBase& b) {
  std::vector<Cfsm> ms;
  for (const auto& r : cfsmkit::roles(b.type)) ms.push_back(project(b.type, r));
  return CommunicatingSystem(std::move(ms));
}

namespace {

CommunicatingSystem eval(const GtirExpr& g) {
  if (const auto* b = std::get_if<GtirBase>(&g.node())) return base_system(*b);
  const auto& c = std::get<GtirConnect>(g.node());
  return compose(eval(*c.left), c.h, eval(*c.right), c.k);
}

}  // namespace

CommunicatingSystem semantics(const GtirExpr& g) {
  if (auto v = validate_gtir(g); !v.empty()) throw InvalidGtir(std::move(v));
  return eval(g);
}

// ---------------------------------------------------------------------------
// Text format

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class GtirParser {
 public:
  GtirParser(TokenStream& ts, std::filesystem::path dir, FileLoader loader)
      : ts_(ts), dir_(std::move(dir)), loader_(std::move(loader)) {}

  GtirDocument document() {
    while (ts_.at_keyword("global")) declaration();
    if (ts_.at(Tok::Eof)) ts_.fail("expected a GTIR expression");
    doc_.expr = expression();
    if (!ts_.at(Tok::Eof)) ts_.fail("unexpected '" + ts_.peek().text + "' after the expression");
    return std::move(doc_);
  }

 private:
  void declaration() {
    ts_.next();
    const auto name = ts_.expect(Tok::Ident, "global type name");
    if (doc_.globals.contains(name.text)) TokenStream::fail_at(name, "global type " + name.text + " redefined");
    ts_.expect(Tok::Equals, "'='");
    GlobalType g;
    if (ts_.at(Tok::LBrace)) {
      ts_.next();
      g = detail::parse_global_type_tokens(ts_);
      ts_.expect(Tok::RBrace, "'}'");
    } else if (ts_.at_keyword("file")) {
      ts_.next();
      const auto path = ts_.expect(Tok::String, "quoted file name");
      g = load(path);
    } else {
      ts_.fail("expected '{' or 'file'");
    }
    try {
      validate(g);
    } catch (const GlobalTypeError& e) {
      TokenStream::fail_at(name, e.what());
    }
    doc_.globals.emplace(name.text, std::move(g));
  }

  GlobalType load(const Token& path) {
    std::filesystem::path p(path.text);
    if (p.is_relative() && !dir_.empty()) p = dir_ / p;
    std::string text;
    try {
      text = loader_ ? loader_(p) : read_file(p);
    } catch (const std::exception& e) {
      TokenStream::fail_at(path, e.what());
    }
    try {
      return parse_global_type(text);
    } catch (const ParseError& e) {
      throw ParseError(p.string() + ":" + e.what());
    }
  }

  std::set<Role> role_set() {
    ts_.expect(Tok::LBrace, "'{'");
    std::set<Role> out;
    while (!ts_.at(Tok::RBrace)) {
      out.insert(Role{ts_.expect(Tok::Ident, "role name").text});
      if (!ts_.at(Tok::Comma)) break;
      ts_.next();
    }
    ts_.expect(Tok::RBrace, "'}'");
    return out;
  }

  GtirPtr expression() {
    const Token start = ts_.peek();
    try {
      if (ts_.at(Tok::LParen)) {
        ts_.next();
        auto e = expression();
        ts_.expect(Tok::RParen, "')'");
        return e;
      }
      if (ts_.at_keyword("base")) {
        ts_.next();
        const auto name = ts_.expect(Tok::Ident, "global type name");
        auto it = doc_.globals.find(name.text);
        if (it == doc_.globals.end()) TokenStream::fail_at(name, "unknown global type " + name.text);
        ts_.expect_keyword("interfaces");
        return GtirExpr::base(name.text, it->second, role_set());
      }
      if (ts_.at_keyword("connect")) {
        ts_.next();
        auto left = expression();
        ts_.expect_keyword("via");
        const auto h = ts_.expect(Tok::Ident, "interface role");
        ts_.expect(Tok::BiArrow, "'<->'");
        const auto k = ts_.expect(Tok::Ident, "interface role");
        auto right = expression();
        auto e = GtirExpr::connect(std::move(left), Role{h.text}, std::move(right), Role{k.text});
        if (ts_.at_keyword("interfaces")) {
          const auto kw = ts_.next();
          const auto declared = role_set();
          if (declared != e->interfaces()) {
            TokenStream::fail_at(kw, "declared interfaces {" + join(declared) + "} differ from computed {" +
                                         join(e->interfaces()) + "}");
          }
        }
        return e;
      }
    } catch (const GtirError& e) {
      throw GtirError(std::to_string(start.line) + ":" + std::to_string(start.column) + ": " + e.what());
    }
    ts_.fail("expected 'base', 'connect' or '('");
  }

  TokenStream& ts_;
  std::filesystem::path dir_;
  FileLoader loader_;
  GtirDocument doc_;
};

std::string indent_block(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out += "  " + line + "\n";
  return out;
}

void render(const GtirExpr& g, std::string& out, bool nested) {
  if (const auto* b = std::get_if<GtirBase>(&g.node())) {
    out += "base " + b->name + " interfaces {" + join(b->interfaces) + "}";
    return;
  }
  const auto& c = std::get<GtirConnect>(g.node());
  if (nested) out += "(";
  out += "connect ";
  render(*c.left, out, true);
  out += " via " + c.h.name + "<->" + c.k.name + " ";
  render(*c.right, out, true);
  out += " interfaces {" + join(g.interfaces()) + "}";
  if (nested) out += ")";
}

}  // namespace

GtirDocument parse_gtir(std::string_view text, const std::filesystem::path& base_dir, FileLoader loader) {
  TokenStream ts(detail::tokenize(text));
  return GtirParser(ts, base_dir, std::move(loader)).document();
}

std::string to_string(const GtirExpr& g) {
  std::string out;
  std::set<std::string> seen;
  for (const auto* b : components(g)) {
    if (!seen.insert(b->name).second) continue;
    out += "global " + b->name + " = {\n" + indent_block(to_string(b->type)) + "}\n";
  }
  render(g, out, false);
  out += "\n";
  return out;
}

}  // namespace cfsmkit
