#pragma once

#include "desiree/diagnostics.hpp"
#include "desiree/model.hpp"
#include "desiree/operators.hpp"
#include "desiree/reasoner.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace desiree {

struct StrengthCheck {
  Verdict verdict = Verdict::Unknown;
  std::optional<Strength> strength;  // declared, else inferred; empty when neither exists
  std::string note;
  std::vector<Diagnostic> diagnostics;
};

namespace detail {

inline bool all_outputs_are_das(const ModelStore& m, const Application& a) {
  return !a.outputs.empty() && std::all_of(a.outputs.begin(), a.outputs.end(), [&](const std::string& id) {
    const Element* e = m.find(id);
    return e && e->kind == ElementKind::DA;
  });
}

inline bool has_nl_body(const ModelStore& m, const std::vector<std::string>& ids) {
  return std::any_of(ids.begin(), ids.end(), [&](const std::string& id) {
    const Element* e = m.find(id);
    return e && std::holds_alternative<NLText>(e->body);
  });
}

// Outcome of checking "every solution of `from` satisfies `to`".
enum class Holds { Yes, No, Unknown };

inline Holds holds(const Verdict3& v) {
  return v.is_proved() ? Holds::Yes : v.is_disproved() ? Holds::No : Holds::Unknown;
}

}  // namespace detail

/// Tags the entailment semantics permit for an operator. Operationalize
/// depends on its outputs; de-Universalize admits Equate only at 100%.
inline std::vector<Strength> admissible_strengths(const ModelStore& m, const Application& a) {
  using S = Strength;
  switch (a.op) {
    case OperatorKind::Interpret: return {S::Strengthen, S::Equate};
    case OperatorKind::Reduce: return {S::Strengthen, S::Weaken, S::Equate};
    case OperatorKind::ScaleUp: return {S::Strengthen, S::Equate};
    case OperatorKind::ScaleDown: return {S::Weaken, S::Equate};
    case OperatorKind::Focus: return {S::Weaken, S::Equate};
    case OperatorKind::Resolve: return {S::Weaken};
    case OperatorKind::Observe: return {S::Strengthen};
    case OperatorKind::Operationalize:
      return detail::all_outputs_are_das(m, a) ? std::vector<S>{S::Weaken} : std::vector<S>{S::Strengthen};
    case OperatorKind::DeUniversalize: {
      const auto* u = std::get_if<DeUniversalizeArgs>(&a.args);
      if (u && u->pct == Rational(1)) return {S::Weaken, S::Equate};
      return {S::Weaken};
    }
  }
  return {};
}

namespace detail {

// Does the conjunction of `from` entail element `to`? DA members of `from`
// act as extra axioms.
inline Holds entails_all(const ModelStore& m, const std::vector<std::string>& from, const std::string& to,
                         std::size_t cap, std::string& note) {
  std::vector<SubsumptionForm> extra;
  std::vector<const Element*> premises;
  for (const auto& id : from) {
    const Element* e = m.find(id);
    if (!e) return Holds::Unknown;
    if (e->kind == ElementKind::DA) {
      if (const auto* f = std::get_if<SubsumptionForm>(&e->body)) extra.push_back(*f);
      continue;
    }
    premises.push_back(e);
  }
  const Element* target = m.find(to);
  if (!target || premises.empty()) return Holds::Unknown;

  // One premise that entails the target is enough.
  Holds best = Holds::Unknown;
  for (const Element* p : premises) {
    const Verdict3 v = entails(m, *p, *target, cap, extra);
    if (v.is_proved()) {
      note = p->id + " entails " + to + " (" + v.reason + ")";
      return Holds::Yes;
    }
    if (premises.size() == 1 && v.is_disproved()) {
      note = p->id + " does not entail " + to + ": counter-model found";
      best = Holds::No;
    } else if (note.empty()) {
      note = v.reason;
    }
  }
  if (premises.size() == 1) return best;

  // Several descriptions: their intersection must entail the target.
  DescRef joined;
  for (const Element* p : premises) {
    DescRef d = element_description(*p);
    if (!d) return Holds::Unknown;
    joined = joined ? conj(joined, d) : d;
  }
  const DescRef t = element_description(*target);
  if (!t) return Holds::Unknown;
  TBox tbox = make_tbox(m, cap);
  for (const auto& ax : extra) tbox.add_axiom(ax.lhs, ax.rhs);
  const Verdict3 v = subsumes(tbox, *joined, *t);
  note = v.is_proved() ? "the outputs jointly entail " + to : v.reason;
  return holds(v);
}

// Checks the declared strength of a relator between input and outputs.
inline Holds relator_holds(const ModelStore& m, const Application& a, Strength s, std::size_t cap,
                           std::string& note) {
  const std::string& in = a.inputs.front();
  auto forward = [&]() {  // outputs entail input
    return entails_all(m, a.outputs, in, cap, note);
  };
  auto backward = [&]() {  // input entails every non-DA output
    Holds result = Holds::Yes;
    for (const auto& o : a.outputs) {
      const Element* e = m.find(o);
      if (!e || e->kind == ElementKind::DA) continue;
      std::string n;
      const Holds h = entails_all(m, {in}, o, cap, n);
      if (h == Holds::No) {
        note = n;
        return Holds::No;
      }
      if (h == Holds::Unknown) {
        result = Holds::Unknown;
        note = n;
      }
    }
    if (result == Holds::Yes) note = in + " entails every output";
    return result;
  };
  switch (s) {
    case Strength::Strengthen: return forward();
    case Strength::Weaken: return backward();
    case Strength::Equate: {
      const Holds f = forward();
      const std::string fn = note;
      const Holds b = backward();
      if (f == Holds::No || b == Holds::No) {
        if (f == Holds::No) note = fn;
        return Holds::No;
      }
      if (f == Holds::Yes && b == Holds::Yes) {
        note = "entailment holds both ways";
        return Holds::Yes;
      }
      if (b == Holds::Yes) note = fn;
      return Holds::Unknown;
    }
  }
  return Holds::Unknown;
}

}  // namespace detail

/// Checks the declared strength tag: admissibility first, then the
/// entailment where it can be computed.
inline StrengthCheck check_strength(const ModelStore& m, const Application& a, std::size_t cap = kDefaultMaxDnf) {
  StrengthCheck r;
  auto diag = [&](Severity sev, const char* code, std::string msg) {
    r.diagnostics.push_back(Diagnostic{sev, code, a.span, keyword(a.op) + std::string(": ") + std::move(msg), {a.id}});
  };
  const auto allowed = admissible_strengths(m, a);

  std::optional<Construction> built;
  if (is_constructor(a.op)) {
    try {
      built = construct(m, a);
    } catch (const ConstructError& e) {
      r.note = e.what();
      return r;
    }
  }

  r.strength = a.declared;
  if (!r.strength) {
    if (built) {
      r.strength = built->strength;
    } else if (allowed.size() == 1) {
      r.strength = allowed.front();
    } else {
      r.note = "strength is ambiguous for this operator and no tag was given";
      diag(Severity::Error, codes::kStrengthMissing, r.note);
      return r;
    }
  }

  const Strength s = *r.strength;
  if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
    r.verdict = Verdict::Violated;
    std::string tags;
    for (auto t : allowed) tags += std::string(tags.empty() ? "" : ", ") + '[' + tag(t) + ']';
    r.note = std::string("[") + tag(s) + "] is not admissible; allowed: " + tags;
    diag(Severity::Error, codes::kStrengthInadmissible, r.note);
    return r;
  }

  if (built) {
    if (built->strength == s || built->strength == Strength::Equate) {
      r.verdict = Verdict::Verified;
      r.note = std::string("construction yields ") + to_string(built->strength);
      // Named regions compare only through declared axioms.
      if (const auto* f = std::get_if<ScaleArgs>(&a.args); f && std::holds_alternative<std::string>(f->factor)) {
        r.verdict = Verdict::Asserted;
        r.note = "qualitative factor; region containment follows from the factor vocabulary";
        diag(Severity::Info, codes::kStrengthAsserted, r.note);
      }
    } else {
      r.verdict = Verdict::Violated;
      r.note = std::string("declared ") + to_string(s) + " but the construction yields " + to_string(built->strength);
      diag(Severity::Error, codes::kStrengthViolated, r.note);
    }
    return r;
  }

  const bool opaque = detail::has_nl_body(m, a.inputs) || detail::has_nl_body(m, a.outputs);
  if (a.op == OperatorKind::Operationalize || a.op == OperatorKind::Resolve || opaque) {
    r.verdict = Verdict::Asserted;
    r.note = opaque ? "natural-language bodies cannot be compared"
                    : a.op == OperatorKind::Resolve ? "resolution is a judgement of the analyst"
                                                    : "operationalization is recorded, not computed";
    diag(Severity::Info, codes::kStrengthAsserted, r.note);
    return r;
  }

  std::string note;
  switch (detail::relator_holds(m, a, s, cap, note)) {
    case detail::Holds::Yes:
      r.verdict = Verdict::Verified;
      r.note = note;
      break;
    case detail::Holds::No:
      r.verdict = Verdict::Violated;
      r.note = note;
      diag(Severity::Error, codes::kStrengthViolated, std::string("declared ") + to_string(s) + ", but " + note);
      break;
    case detail::Holds::Unknown:
      r.verdict = Verdict::Unknown;
      r.note = note.empty() ? "no proof either way" : note;
      diag(Severity::Warning, codes::kStrengthUnknown, std::string("cannot confirm ") + to_string(s) + ": " + r.note);
      break;
  }
  return r;
}

}  // namespace desiree
