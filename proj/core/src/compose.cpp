#include "cfsmkit/compose.hpp"

#include <algorithm>

namespace cfsmkit {

const char* to_string(FailureKind k) {
  switch (k) {
    case FailureKind::LanguageMismatch: return "language-mismatch";
    case FailureKind::MixedState: return "mixed-state";
    case FailureKind::NotIoDeterministic: return "not-io-deterministic";
  }
  return "?";
}

std::string CompatibilityFailure::describe() const {
  switch (kind) {
    case FailureKind::LanguageMismatch:
      return "erased languages are not dual: " + to_string(*word) + " is accepted by " +
             (in_first ? "the first machine but not by the dual of the second"
                       : "the dual of the second machine but not by the first");
    case FailureKind::MixedState:
      return "machine " + role.name + " has mixed state " + *state;
    case FailureKind::NotIoDeterministic:
      return "machine " + role.name + " is not ?!-deterministic: " + to_string(witness->first) + " vs " +
             to_string(witness->second);
  }
  return {};
}

bool CompatibilityVerdict::has(FailureKind k) const {
  return std::any_of(failures.begin(), failures.end(), [k](const auto& f) { return f.kind == k; });
}

CompatibilityVerdict check_compatibility(const Cfsm& first, const Cfsm& second) {
  CompatibilityVerdict v;
  const auto lhs = erase_channels(first);
  const auto rhs = dualize(erase_channels(second));
  if (auto w = find_separating_word(lhs, rhs)) {
    const bool in_first = accepts(lhs, *w);
    v.failures.push_back({FailureKind::LanguageMismatch, in_first ? first.subject() : second.subject(), *w,
                          in_first, std::nullopt, std::nullopt});
  }
  for (const Cfsm* m : {&first, &second}) {
    for (const auto& q : mixed_states(*m)) {
      v.failures.push_back({FailureKind::MixedState, m->subject(), std::nullopt, false, q, std::nullopt});
    }
  }
  for (const Cfsm* m : {&first, &second}) {
    for (auto w : {receive_nondeterminism(*m), send_nondeterminism(*m)}) {
      if (w) {
        v.failures.push_back(
            {FailureKind::NotIoDeterministic, m->subject(), std::nullopt, false, std::nullopt, w});
      }
    }
  }
  v.compatible = v.failures.empty();
  return v;
}

namespace {

std::string verdict_summary(const Role& h, const Role& k, const CompatibilityVerdict& v) {
  std::string out = "interfaces " + h.name + " and " + k.name + " are not compatible";
  for (const auto& f : v.failures) out += "; " + f.describe();
  return out;
}

}  // namespace

IncompatibleInterfaces::IncompatibleInterfaces(const Role& h, const Role& k, CompatibilityVerdict v)
    : PreconditionError(verdict_summary(h, k, v)), verdict_(std::move(v)) {}

CommunicatingSystem compose(const CommunicatingSystem& s1, const Role& h, const CommunicatingSystem& s2,
                            const Role& k) {
  for (const auto& r : s1.roles()) {
    if (s2.contains(r)) throw PreconditionError("systems share role " + r.name);
  }
  if (!s1.contains(h)) throw PreconditionError("role " + h.name + " is not part of the first system");
  if (!s2.contains(k)) throw PreconditionError("role " + k.name + " is not part of the second system");

  const Cfsm& mh = s1.machine(h);
  const Cfsm& mk = s2.machine(k);
  auto verdict = check_compatibility(mh, mk);
  if (!verdict.compatible) throw IncompatibleInterfaces(h, k, std::move(verdict));

  std::vector<Cfsm> machines;
  for (const auto& [r, m] : s1.machines()) machines.push_back(r == h ? gateway(m, k) : m);
  for (const auto& [r, m] : s2.machines()) machines.push_back(r == k ? gateway(m, h) : m);
  return CommunicatingSystem(std::move(machines));
}

}  // namespace cfsmkit
