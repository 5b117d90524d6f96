#pragma once

#include "desiree/declarations.hpp"
#include "desiree/diagnostics.hpp"
#include "desiree/model.hpp"
#include "desiree/reasoner.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace desiree {

/// A constructor refused its input or arguments.
class ConstructError : public std::runtime_error {
 public:
  enum class Kind {
    NotInHierarchy,
    ShiftRejected,
    FactorOutOfRange,
    RegionKindMismatch,
    PathUnresolved,
    PctOutOfRange,
    ObserverAlreadySet,
    EmptyTargets,
    NotAQualityForm
  };

  ConstructError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline const char* to_string(ConstructError::Kind k) {
  using K = ConstructError::Kind;
  switch (k) {
    case K::NotInHierarchy: return "NotInHierarchy";
    case K::ShiftRejected: return "ShiftRejected";
    case K::FactorOutOfRange: return "FactorOutOfRange";
    case K::RegionKindMismatch: return "RegionKindMismatch";
    case K::PathUnresolved: return "PathUnresolved";
    case K::PctOutOfRange: return "PctOutOfRange";
    case K::ObserverAlreadySet: return "ObserverAlreadySet";
    case K::EmptyTargets: return "EmptyTargets";
    case K::NotAQualityForm: return "NotAQualityForm";
  }
  return "?";
}

/// Outputs of a constructor together with the strength the construction implies.
struct Construction {
  std::vector<QualityForm> outputs;
  Strength strength = Strength::Weaken;
};

namespace detail {

inline std::vector<std::string> children(const std::vector<std::pair<std::string, std::string>>& edges,
                                         const std::string& parent) {
  std::vector<std::string> out;
  for (const auto& [c, p] : edges)
    if (p == parent && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Focus

/// One output per target. A target naming a dimension of the quality replaces
/// the quality; any other target replaces the subject.
inline Construction construct_focus(const ModelStore& m, const QualityForm& input,
                                    const std::vector<DescRef>& targets) {
  using K = ConstructError::Kind;
  if (targets.empty()) throw ConstructError(K::EmptyTargets, "focus needs at least one target");

  const TBox tbox = make_tbox(m);
  const auto subject = detail::subject_name(*input.subject);
  const bool subject_is_individual = input.subject->as<Enumeration>() != nullptr;

  Construction out;
  std::set<std::string> quality_targets, subject_targets;
  for (const auto& t : targets) {
    QualityForm q = input;
    const auto* a = t->as<Atom>();
    if (a && detail::reaches(m.dimension_of, a->name, input.quality) && a->name != input.quality) {
      q.quality = a->name;
      quality_targets.insert(a->name);
      out.outputs.push_back(std::move(q));
      continue;
    }
    const auto name = detail::subject_name(*t);
    const bool part = name && subject && *name != *subject && detail::reaches(m.part_of, *name, *subject);
    if (part) {
      // A part named bare keeps the individual form of the subject.
      q.subject = (a && subject_is_individual) ? enumeration({a->name}) : t;
      subject_targets.insert(*name);
    } else if (subsumes(tbox, *t, *input.subject).is_proved()) {
      q.subject = t;
      if (name) subject_targets.insert(*name);
    } else {
      throw ConstructError(K::NotInHierarchy,
                           render_description(*t) + " is neither a dimension of " + input.quality +
                               " nor a part of the subject " + render_description(*input.subject));
    }
    out.outputs.push_back(std::move(q));
  }

  out.strength = Strength::Weaken;
  auto covers = [](const std::set<std::string>& used, const std::vector<std::string>& all) {
    return !all.empty() && used.size() == all.size() &&
           std::all_of(all.begin(), all.end(), [&](const std::string& c) { return used.count(c); });
  };
  if (subject_targets.empty() && covers(quality_targets, detail::children(m.dimension_of, input.quality)))
    out.strength = Strength::Equate;
  if (quality_targets.empty() && subject && subject_targets.size() == targets.size() &&
      covers(subject_targets, detail::children(m.part_of, *subject)))
    out.strength = Strength::Equate;
  return out;
}

// ---------------------------------------------------------------------------
// Scale

inline std::string scaled_region_name(const std::string& factor, const std::string& region) {
  return factor + "_" + region;
}

/// `op` is ScaleUp or ScaleDown.
inline Construction construct_scale(const ModelStore& m, const QualityForm& input, const ScaleArgs& args,
                                    OperatorKind op) {
  using K = ConstructError::Kind;
  const bool down = op == OperatorKind::ScaleDown;
  Construction out;
  QualityForm q = input;

  if (const auto* factor = std::get_if<std::string>(&args.factor)) {
    const auto* named = std::get_if<NamedRegion>(&input.region);
    if (!named) throw ConstructError(K::RegionKindMismatch, "a qualitative factor needs a named region");
    auto it = m.factors.find(*factor);
    if (it == m.factors.end()) throw ConstructError(K::FactorOutOfRange, "unknown scale factor " + *factor);
    if (it->second != down)
      throw ConstructError(K::FactorOutOfRange, *factor + (it->second ? " weakens" : " strengthens") +
                                                    " and cannot be used to scale " + (down ? "down" : "up"));
    q.region = NamedRegion{scaled_region_name(*factor, named->name)};
    out.strength = down ? Strength::Weaken : Strength::Strengthen;
    out.outputs.push_back(std::move(q));
    return out;
  }

  const auto [f_lo, f_hi] = std::get<std::pair<Rational, Rational>>(args.factor);
  const auto* iv = std::get_if<Interval>(&input.region);
  if (!iv) throw ConstructError(K::RegionKindMismatch, "a quantitative factor needs an interval region");
  if (f_lo < 0 || f_hi <= 0) throw ConstructError(K::FactorOutOfRange, "scale factors must be positive");
  if (down && !(f_lo <= 1 && f_hi >= 1))
    throw ConstructError(K::FactorOutOfRange, "scaling down needs a low factor <= 1 and a high factor >= 1");
  if (!down && !(f_lo >= 1 && f_hi <= 1))
    throw ConstructError(K::FactorOutOfRange, "scaling up needs a low factor >= 1 and a high factor <= 1");

  Interval scaled = *iv;
  scaled.lo = iv->lo * f_lo;
  if (iv->hi) scaled.hi = *iv->hi * f_hi;
  const bool grows = scaled.lo <= iv->lo && (!iv->hi || *scaled.hi >= *iv->hi);
  const bool shrinks = scaled.lo >= iv->lo && (!iv->hi || *scaled.hi <= *iv->hi);
  if ((down && !grows) || (!down && !shrinks))
    throw ConstructError(K::ShiftRejected, render_region(*iv) + " would be shifted to " + render_region(scaled));
  if (scaled.hi && scaled.lo > *scaled.hi)
    throw ConstructError(K::ShiftRejected, "scaling leaves an empty interval");

  out.strength = scaled == *iv ? Strength::Equate : down ? Strength::Weaken : Strength::Strengthen;
  q.region = scaled;
  out.outputs.push_back(std::move(q));
  return out;
}

// ---------------------------------------------------------------------------
// de-Universalize

namespace detail {

// The slot chain occurs as nested slot descriptions in d.
inline bool has_slot_chain(const Description& d, const std::vector<std::string>& chain, std::size_t at) {
  if (at == chain.size()) return true;
  if (const auto* s = d.as<Slot>()) return s->slot == chain[at] && has_slot_chain(*s->filler, chain, at + 1);
  if (const auto* b = d.as<Binary>())
    return has_slot_chain(*b->lhs, chain, at) || (b->op != BinaryOp::Diff && has_slot_chain(*b->rhs, chain, at));
  return false;
}

}  // namespace detail

inline Construction construct_deuniversalize(const QualityForm& input, const DeUniversalizeArgs& args) {
  using K = ConstructError::Kind;
  if (args.pct <= 0 || args.pct > 1)
    throw ConstructError(K::PctOutOfRange, render_percent(args.pct) + " is outside (0%, 100%]");
  if (args.slot_path.empty()) throw ConstructError(K::PathUnresolved, "empty slot path");

  const std::string& head = args.slot_path.front();
  const std::vector<std::string> rest(args.slot_path.begin() + 1, args.slot_path.end());
  const DescRef* scope = nullptr;
  if (head == kInheresIn) {
    scope = &input.subject;
  } else if (head == kObservedBy) {
    if (!input.observer) throw ConstructError(K::PathUnresolved, "observed_by path on a QGC without an observer");
    scope = &input.observer;
  } else {
    throw ConstructError(K::PathUnresolved, "slot path must start at inheres_in or observed_by, not " + head);
  }
  if (!detail::has_slot_chain(**scope, rest, 0))
    throw ConstructError(K::PathUnresolved, render_slot_path(args.slot_path, "?" + args.var) +
                                                " does not resolve in " + render_description(**scope));

  Construction out;
  QualityForm q = input;
  q.pct_chain.push_back(PctEntry{args.var, args.slot_path, args.pct});
  out.strength = args.pct == Rational(1) ? Strength::Equate : Strength::Weaken;
  out.outputs.push_back(std::move(q));
  return out;
}

// ---------------------------------------------------------------------------
// Observe

inline Construction construct_observe(const QualityForm& input, const ObserveArgs& args) {
  if (input.observer)
    throw ConstructError(ConstructError::Kind::ObserverAlreadySet,
                         "already observed by " + render_description(*input.observer));
  Construction out;
  QualityForm q = input;
  q.observer = args.observer;
  out.strength = Strength::Strengthen;
  out.outputs.push_back(std::move(q));
  return out;
}

/// Runs the constructor an application names. The input must be a QGC.
inline Construction construct(const ModelStore& m, const Application& a) {
  const Element* in = a.inputs.empty() ? nullptr : m.find(a.inputs.front());
  const auto* q = in ? std::get_if<QualityForm>(&in->body) : nullptr;
  if (!q) throw ConstructError(ConstructError::Kind::NotAQualityForm, "constructor input must be a QG or QC");
  switch (a.op) {
    case OperatorKind::Focus: return construct_focus(m, *q, std::get<FocusArgs>(a.args).targets);
    case OperatorKind::ScaleUp:
    case OperatorKind::ScaleDown: return construct_scale(m, *q, std::get<ScaleArgs>(a.args), a.op);
    case OperatorKind::DeUniversalize: return construct_deuniversalize(*q, std::get<DeUniversalizeArgs>(a.args));
    case OperatorKind::Observe: return construct_observe(*q, std::get<ObserveArgs>(a.args));
    default: break;
  }
  throw std::logic_error("not a constructor");
}

/// Kind of element a constructor produces from an input of kind `in`.
inline ElementKind constructed_kind(OperatorKind op, ElementKind in) {
  return op == OperatorKind::Observe ? ElementKind::QC : in;
}

// ---------------------------------------------------------------------------
// Signatures

namespace detail {

struct Bounds {
  std::size_t in_min, in_max, out_min, out_max;
};

constexpr std::size_t kMany = static_cast<std::size_t>(-1);

inline Bounds bounds(OperatorKind op) {
  switch (op) {
    case OperatorKind::Reduce: return {1, 1, 1, kMany};
    case OperatorKind::Interpret: return {1, 1, 1, 1};
    case OperatorKind::Focus: return {1, 1, 1, kMany};
    case OperatorKind::ScaleUp:
    case OperatorKind::ScaleDown: return {1, 1, 1, 1};
    case OperatorKind::DeUniversalize: return {1, 1, 1, 1};
    case OperatorKind::Resolve: return {2, kMany, 0, kMany};
    case OperatorKind::Operationalize: return {1, 1, 1, kMany};
    case OperatorKind::Observe: return {1, 1, 1, 1};
  }
  return {1, 1, 1, 1};
}

inline std::string count_text(std::size_t lo, std::size_t hi) {
  if (lo == hi) return std::to_string(lo);
  return std::to_string(lo) + ".." + (hi == kMany ? std::string("n") : std::to_string(hi));
}

enum class Category { Goal, Spec, Assumption };

inline Category category(ElementKind k) {
  if (is_goal_kind(k)) return Category::Goal;
  if (is_spec_kind(k)) return Category::Spec;
  return Category::Assumption;
}

/// Allowed output kinds when operationalizing an input of kind `in`.
inline std::vector<ElementKind> operationalize_targets(ElementKind in) {
  using E = ElementKind;
  switch (in) {
    case E::FG: return {E::F, E::FC, E::DA};
    case E::QG: return {E::QC, E::F, E::FC, E::DA};
    case E::CTG: return {E::SC, E::DA};
    case E::Goal: return {E::DA};
    default: return {};
  }
}

inline std::string kind_list(const std::vector<ElementKind>& kinds) {
  std::string out;
  for (auto k : kinds) out += (out.empty() ? "" : ", ") + std::string(display_name(k));
  return "{" + out + "}";
}

}  // namespace detail

/// Checks an application against its operator's signature: counts, kinds,
/// categories, arguments, and the outputs of constructors.
inline std::vector<Diagnostic> validate_application(const ModelStore& m, const Application& a) {
  std::vector<Diagnostic> out;
  const std::string where = a.id;
  auto error = [&](const char* code, std::string msg, std::vector<std::string> related = {}) {
    related.insert(related.begin(), where);
    out.push_back(make_error(code, a.span, keyword(a.op) + std::string(": ") + std::move(msg), std::move(related)));
  };

  const detail::Bounds b = detail::bounds(a.op);
  if (a.inputs.size() < b.in_min || a.inputs.size() > b.in_max)
    error(codes::kSigArity, "takes " + detail::count_text(b.in_min, b.in_max) + " input(s), got " +
                                std::to_string(a.inputs.size()));
  if (a.outputs.size() < b.out_min || a.outputs.size() > b.out_max)
    error(codes::kSigArity, "yields " + detail::count_text(b.out_min, b.out_max) + " output(s), got " +
                                std::to_string(a.outputs.size()));

  std::vector<const Element*> ins, outs;
  for (const auto& id : a.inputs) {
    const Element* e = m.find(id);
    if (!e) {
      error(codes::kDanglingReference, "unknown input " + id, {id});
      continue;
    }
    ins.push_back(e);
  }
  for (const auto& id : a.outputs) {
    const Element* e = m.find(id);
    if (!e) {
      error(codes::kDanglingReference, "unknown output " + id, {id});
      continue;
    }
    outs.push_back(e);
  }
  if (has_errors(out) || ins.empty()) return out;

  const Element& in = *ins.front();
  auto kind_error = [&](const Element& e, const std::string& expected) {
    error(codes::kSigKind, e.id + " is " + display_name(e.kind) + ", expected " + expected, {e.id});
  };

  switch (a.op) {
    case OperatorKind::Reduce: {
      if (in.kind == ElementKind::DA) kind_error(in, "a goal or specification element");
      bool same = false;
      for (const Element* o : outs) {
        if (o->kind == in.kind) {
          same = true;
        } else if (o->kind != ElementKind::DA) {
          if (detail::category(o->kind) != detail::category(in.kind)) {
            error(codes::kSigCategory, "cannot refine " + std::string(display_name(in.kind)) + " " + in.id +
                                           " into " + display_name(o->kind) + " " + o->id, {o->id});
          } else {
            kind_error(*o, std::string(display_name(in.kind)) + " or DA");
          }
        }
      }
      if (!same) error(codes::kSigKind, "needs at least one output of kind " + std::string(display_name(in.kind)));
      break;
    }
    case OperatorKind::Interpret: {
      const Element& o = *outs.front();
      const bool ok = o.kind == in.kind || (in.kind == ElementKind::Goal && is_goal_kind(o.kind));
      if (!ok) {
        if (detail::category(o.kind) != detail::category(in.kind)) {
          error(codes::kSigCategory, "cannot interpret " + std::string(display_name(in.kind)) + " " + in.id +
                                         " as " + display_name(o.kind) + " " + o.id, {o.id});
        } else {
          kind_error(o, std::string(display_name(in.kind)) + " or a sub-kind of it");
        }
      }
      break;
    }
    case OperatorKind::Operationalize: {
      const auto allowed = detail::operationalize_targets(in.kind);
      if (allowed.empty()) {
        error(codes::kSigCategory, "only goals can be operationalized, " + in.id + " is " + display_name(in.kind),
              {in.id});
        break;
      }
      for (const Element* o : outs)
        if (std::find(allowed.begin(), allowed.end(), o->kind) == allowed.end())
          kind_error(*o, std::string("one of ") + detail::kind_list(allowed) + " for a " + display_name(in.kind));
      break;
    }
    case OperatorKind::Resolve: {
      for (const Element* o : outs) {
        const bool related = std::any_of(ins.begin(), ins.end(), [&](const Element* i) {
          return detail::category(i->kind) == detail::category(o->kind);
        });
        if (!related)
          error(codes::kSigCategory, o->id + " is not in the category of any resolved element", {o->id});
      }
      break;
    }
    case OperatorKind::Focus:
    case OperatorKind::ScaleUp:
    case OperatorKind::ScaleDown:
    case OperatorKind::DeUniversalize:
    case OperatorKind::Observe: {
      if (!is_qgc_kind(in.kind)) {
        kind_error(in, "QG or QC");
        break;
      }
      if (a.op == OperatorKind::Focus) {
        const auto& targets = std::get<FocusArgs>(a.args).targets;
        if (!targets.empty() && targets.size() != outs.size())
          error(codes::kSigArity, "one output per target: " + std::to_string(targets.size()) + " target(s), " +
                                      std::to_string(outs.size()) + " output(s)");
      }
      const ElementKind expected = constructed_kind(a.op, in.kind);
      for (const Element* o : outs)
        if (o->kind != expected) kind_error(*o, display_name(expected));
      if (has_errors(out)) break;

      try {
        const Construction c = construct(m, a);
        for (std::size_t i = 0; i < outs.size() && i < c.outputs.size(); ++i) {
          const auto* body = std::get_if<QualityForm>(&outs[i]->body);
          if (!body || !(*body == c.outputs[i]))
            error(codes::kSigOutputMismatch,
                  outs[i]->id + " should be " + render_body(ElementBody{c.outputs[i]}), {outs[i]->id});
        }
      } catch (const ConstructError& e) {
        error(codes::kSigArgument, std::string(to_string(e.kind())) + ": " + e.what());
      }
      break;
    }
  }
  return out;
}

}  // namespace desiree
