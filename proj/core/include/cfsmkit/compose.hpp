#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfsmkit/cfsm.hpp"
#include "cfsmkit/gateway.hpp"
#include "cfsmkit/lang.hpp"
#include "cfsmkit/system.hpp"

namespace cfsmkit {

enum class FailureKind { LanguageMismatch, MixedState, NotIoDeterministic };

const char* to_string(FailureKind k);

struct CompatibilityFailure {
  FailureKind kind;
  /// The machine the failure is attributed to.
  Role role;
  /// LanguageMismatch: an erased word in exactly one of L(first) and
  /// dual(L(second)); `in_first` tells which side accepts it.
  std::optional<ErasedWord> word;
  bool in_first = false;
  /// MixedState: the offending state.
  std::optional<StateId> state;
  /// NotIoDeterministic: the two conflicting transitions.
  std::optional<DeterminismWitness> witness;

  std::string describe() const;
};

struct CompatibilityVerdict {
  bool compatible = true;
  std::vector<CompatibilityFailure> failures;

  bool has(FailureKind k) const;
};

/// Checks the erased languages are dual to each other, that neither machine
/// has mixed states and that both are ?!-deterministic. Reports every
/// failure found, not only the first.
CompatibilityVerdict check_compatibility(const Cfsm& first, const Cfsm& second);

class IncompatibleInterfaces : public PreconditionError {
 public:
  IncompatibleInterfaces(const Role& h, const Role& k, CompatibilityVerdict v);
  const CompatibilityVerdict& verdict() const { return verdict_; }

 private:
  CompatibilityVerdict verdict_;
};

/// Joins two systems with disjoint roles, replacing the machines of `h` and
/// `k` by their gateways toward each other.
CommunicatingSystem compose(const CommunicatingSystem& s1, const Role& h, const CommunicatingSystem& s2,
                            const Role& k);

}  // namespace cfsmkit
