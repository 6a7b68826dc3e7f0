#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cfsmkit/compose.hpp"
#include "cfsmkit/globaltype.hpp"
#include "cfsmkit/system.hpp"

namespace cfsmkit {

/// A GTIR expression was built outside its formation rules.
class GtirError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class GtirExpr;
using GtirPtr = std::shared_ptr<const GtirExpr>;

/// A global type with designated interface roles.
struct GtirBase {
  std::string name;
  GlobalType type;
  std::set<Role> interfaces;
};

/// Two expressions joined through interface roles `h` (left) and `k` (right).
struct GtirConnect {
  GtirPtr left;
  Role h;
  GtirPtr right;
  Role k;
};

/// Immutable expression tree. Role sets and interface sets are computed once
/// at construction.
class GtirExpr {
 public:
  /// Throws GtirError unless `interfaces` ⊆ roles(type); GlobalTypeError if
  /// `type` is malformed.
  static GtirPtr base(std::string name, GlobalType type, std::set<Role> interfaces);
  /// Throws GtirError unless h is an interface of `left`, k an interface of
  /// `right`, and the two sides share no role.
  static GtirPtr connect(GtirPtr left, Role h, GtirPtr right, Role k);

  const std::variant<GtirBase, GtirConnect>& node() const { return node_; }
  bool is_base() const { return std::holds_alternative<GtirBase>(node_); }

  const std::set<Role>& roles() const { return roles_; }
  const std::set<Role>& interfaces() const { return interfaces_; }

 private:
  explicit GtirExpr(std::variant<GtirBase, GtirConnect> n) : node_(std::move(n)) {}

  std::variant<GtirBase, GtirConnect> node_;
  std::set<Role> roles_;
  std::set<Role> interfaces_;
};

/// The base expressions of the tree, left to right.
std::vector<const GtirBase*> components(const GtirExpr& g);

/// Projection of `p` in the unique component mentioning it. Throws
/// PreconditionError when no component does.
Cfsm project_gtir(const GtirExpr& g, const Role& p);

enum class ViolationKind { InterfaceCommunication, IncompatibleInterfaces };

const char* to_string(ViolationKind k);

struct GtirViolation {
  ViolationKind kind;
  /// InterfaceCommunication: the component and the offending transition of
  /// `projected_role`'s machine.
  std::string component;
  std::optional<Role> projected_role;
  std::optional<Transition> transition;
  /// IncompatibleInterfaces: the connected roles and the failed check.
  std::optional<Role> h;
  std::optional<Role> k;
  std::optional<CompatibilityVerdict> verdict;

  std::string describe() const;
};

/// All violations of the GTIR conditions, children before parents. Empty
/// exactly when `g` is a GTIR.
std::vector<GtirViolation> validate_gtir(const GtirExpr& g);

class InvalidGtir : public GtirError {
 public:
  explicit InvalidGtir(std::vector<GtirViolation> v);
  const std::vector<GtirViolation>& violations() const { return violations_; }

 private:
  std::vector<GtirViolation> violations_;
};

/// The communicating system denoted by `g`. Throws InvalidGtir when
/// validation fails.
CommunicatingSystem semantics(const GtirExpr& g);

/// The system of all projections of a base expression.
CommunicatingSystem base_system(const GtirBase& b);

// Textual format:
//
//   global S  = { I->C:trialsNum; ... }
//   global S2 = file "s_prime.gt"
//   connect base S interfaces {I, J, H} via J<->K base S2 interfaces {K}
//     interfaces {I, H}
//
// A document is any number of `global` declarations followed by one
// expression. The trailing `interfaces {..}` of a connect is optional and
// must match the computed set when present.

struct GtirDocument {
  std::map<std::string, GlobalType> globals;
  GtirPtr expr;
};

/// Resolves `file "..."` references; by default relative to `base_dir`.
using FileLoader = std::function<std::string(const std::filesystem::path&)>;

GtirDocument parse_gtir(std::string_view text, const std::filesystem::path& base_dir = {},
                        FileLoader loader = {});

/// Renders the expression together with declarations of its components.
std::string to_string(const GtirExpr& g);

}  // namespace cfsmkit
