#pragma once

#include "desiree/diagnostics.hpp"
#include "desiree/model.hpp"
#include "desiree/operators.hpp"
#include "desiree/parser.hpp"
#include "desiree/strength.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace desiree {

struct LoadOptions {
  std::size_t max_dnf = kDefaultMaxDnf;
};

struct LoadResult {
  ModelStore store;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

namespace detail {

// Splits `Name <s: D> ...` into a function description.
inline std::optional<FunctionDesc> as_function(const Description& d) {
  if (const auto* a = d.as<Atom>()) return FunctionDesc{a->name, {}};
  const auto* b = d.as<Binary>();
  if (!b || b->op != BinaryOp::And || !b->rhs->as<Slot>()) return std::nullopt;
  auto f = as_function(*b->lhs);
  if (f) f->slots.push_back(b->rhs);
  return f;
}

// `A & B :< Nothing` is sugar for a disjointness declaration.
inline std::optional<std::pair<DescRef, DescRef>> disjoint_sugar(const DescRef& lhs, const DescRef& rhs) {
  const auto* bottom = rhs->as<Atom>();
  const auto* b = lhs->as<Binary>();
  if (!bottom || bottom->name != kNothing || !b || b->op != BinaryOp::And) return std::nullopt;
  return std::make_pair(b->lhs, b->rhs);
}

inline std::string body_shape(const ElementBody& body) {
  switch (body.index()) {
    case 0: return "natural-language text";
    case 1: return "a description";
    case 2: return "a subsumption form";
    case 3: return "a function description";
    default: return "a quality form";
  }
}

// Brings the parsed body into the shape its kind requires, or explains why not.
inline std::optional<std::string> conform(ElementKind kind, ElementBody& body) {
  using E = ElementKind;
  if (std::holds_alternative<NLText>(body)) return std::nullopt;
  switch (kind) {
    case E::Goal:
      if (std::holds_alternative<ConceptBody>(body) || std::holds_alternative<SubsumptionForm>(body))
        return std::nullopt;
      return "a goal body is text or a description";
    case E::FG:
    case E::CTG:
    case E::FC:
    case E::SC:
    case E::DA:
      if (std::holds_alternative<SubsumptionForm>(body)) return std::nullopt;
      return std::string("a ") + display_name(kind) + " body has the form `C :< D`";
    case E::F: {
      if (const auto* c = std::get_if<ConceptBody>(&body)) {
        if (auto f = as_function(*c->desc)) {
          body = std::move(*f);
          return std::nullopt;
        }
      }
      return "a function body is a name followed by slot-description pairs";
    }
    case E::QG:
    case E::QC: {
      const auto* q = std::get_if<QualityForm>(&body);
      if (!q) return std::string("a ") + display_name(kind) + " body has the form `Q (S) :: region`";
      const bool named = std::holds_alternative<NamedRegion>(q->region);
      if (kind == E::QG && !named) return "a QG needs a vague (named) region; measurable regions make it a QC";
      if (kind == E::QG && q->observer) return "a QG with an observer is a QC";
      if (kind == E::QC && named && !q->observer) return "a QC with a named region needs an observer";
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Materializes a parsed model: elements, axioms, hierarchies and
/// applications, each application validated and its strength checked.
inline LoadResult load_model(const ModelFileAst& ast, const LoadOptions& options = {}) {
  LoadResult r;
  ModelStore& m = r.store;
  auto error = [&](const char* code, Span span, std::string msg, std::vector<std::string> related = {}) {
    r.diagnostics.push_back(make_error(code, span, std::move(msg), std::move(related)));
  };

  // Everything but applications first, so applications may refer forward.
  for (const auto& decl : ast.declarations) {
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ElementDecl>) {
            Element e{d.id, d.kind, d.body, true, decl.span, std::nullopt};
            if (auto why = detail::conform(e.kind, e.body)) {
              error(codes::kKindMismatch, decl.span,
                    e.id + " is declared " + display_name(e.kind) + " but has " + detail::body_shape(d.body) +
                        ": " + *why,
                    {e.id});
            }
            if (!m.add(std::move(e))) error(codes::kDuplicateId, decl.span, "duplicate identifier '" + d.id + "'", {d.id});
          } else if constexpr (std::is_same_v<T, AxiomDecl>) {
            if (auto pair = detail::disjoint_sugar(d.lhs, d.rhs)) {
              m.disjointness.push_back(*pair);
            } else {
              m.axioms.push_back(SubsumptionForm{d.lhs, d.rhs});
            }
          } else if constexpr (std::is_same_v<T, DisjointDecl>) {
            m.disjointness.emplace_back(d.first, d.second);
          } else if constexpr (std::is_same_v<T, HierarchyDecl>) {
            auto& edges = d.kind == HierarchyKind::DimensionOf ? m.dimension_of : m.part_of;
            edges.emplace_back(d.child, d.parent);
          } else if constexpr (std::is_same_v<T, FactorDecl>) {
            m.factors[d.name] = d.weakens;
          }
        },
        decl.node);
  }
  for (const auto& decl : ast.declarations) {
    const auto* c = std::get_if<ConflictDecl>(&decl.node);
    if (!c) continue;
    for (const auto& id : c->ids)
      if (!m.contains(id)) error(codes::kDanglingReference, decl.span, "conflict names unknown element " + id, {id});
    m.conflicts.push_back(c->ids);
  }

  std::set<std::string> dropped;
  std::size_t counter = 0;
  for (const auto& decl : ast.declarations) {
    const auto* d = std::get_if<ApplicationDecl>(&decl.node);
    if (!d) continue;
    ++counter;
    Application a;
    a.id = d->label ? *d->label : "A" + std::to_string(counter);
    a.op = d->op;
    a.inputs = d->inputs;
    a.outputs = d->outputs;
    a.args = d->args;
    a.declared = d->strength;
    a.span = decl.span;
    if (d->label && m.contains(*d->label))
      error(codes::kDuplicateId, decl.span, "application label " + *d->label + " is also an element id", {a.id});

    for (const auto& id : a.inputs)
      if (dropped.count(id))
        error(codes::kSigDroppedInput, decl.span,
              std::string(keyword(a.op)) + ": " + id + " was dropped by an earlier resolve", {a.id, id});

    // Constructors build undeclared outputs.
    std::optional<Diagnostic> construct_failure;
    if (is_constructor(a.op)) {
      const Element* in = a.inputs.size() == 1 ? m.find(a.inputs.front()) : nullptr;
      const bool missing = std::any_of(a.outputs.begin(), a.outputs.end(),
                                       [&](const std::string& id) { return !m.contains(id); });
      if (in && missing && !is_qgc_kind(in->kind)) {
        construct_failure = make_error(codes::kSigKind, decl.span,
                                       std::string(keyword(a.op)) + ": " + in->id + " is " + display_name(in->kind) +
                                           ", expected a QG or QC",
                                       {a.id, in->id});
      } else if (in && missing) {
        try {
          const Construction c = construct(m, a);
          for (std::size_t i = 0; i < a.outputs.size() && i < c.outputs.size(); ++i) {
            if (m.contains(a.outputs[i])) continue;
            Element e{a.outputs[i], constructed_kind(a.op, in->kind), c.outputs[i], true, decl.span, a.id};
            m.add(std::move(e));
          }
        } catch (const ConstructError& e) {
          construct_failure = make_error(codes::kSigArgument, decl.span,
                                         std::string(keyword(a.op)) + ": " + to_string(e.kind()) + ": " + e.what(),
                                         {a.id});
        }
      }
    }

    auto diags = construct_failure ? std::vector<Diagnostic>{*construct_failure} : validate_application(m, a);
    const bool valid = !has_errors(diags);
    r.diagnostics.insert(r.diagnostics.end(), diags.begin(), diags.end());
    if (valid) {
      StrengthCheck s = check_strength(m, a, options.max_dnf);
      a.verdict = s.verdict;
      a.note = s.note;
      if (s.strength) a.strength = *s.strength;
      r.diagnostics.insert(r.diagnostics.end(), s.diagnostics.begin(), s.diagnostics.end());
    } else {
      a.verdict = Verdict::Unknown;
      a.note = "signature errors";
      if (a.declared) a.strength = *a.declared;
    }

    if (a.op == OperatorKind::Resolve) {
      for (const auto& id : a.inputs) {
        if (std::find(a.outputs.begin(), a.outputs.end(), id) != a.outputs.end()) continue;
        if (Element* e = m.find(id)) {
          e->active = false;
          dropped.insert(id);
        }
      }
    }
    m.applications.push_back(std::move(a));
  }

  sort_diagnostics(r.diagnostics);
  return r;
}

/// Parses and loads a model file in one step; parse diagnostics come first.
inline LoadResult load_model_text(std::string_view text, const LoadOptions& options = {}) {
  ParseResult p = parse_model_file(text);
  LoadResult r = load_model(p.ast, options);
  r.diagnostics.insert(r.diagnostics.begin(), p.diagnostics.begin(), p.diagnostics.end());
  // The parser already reports duplicate element ids.
  std::vector<Diagnostic> unique;
  std::set<std::tuple<std::size_t, std::string, std::string>> seen;
  for (auto& d : r.diagnostics)
    if (seen.emplace(d.span.offset, d.code, d.message).second || d.code != codes::kDuplicateId)
      unique.push_back(std::move(d));
  r.diagnostics = std::move(unique);
  sort_diagnostics(r.diagnostics);
  return r;
}

}  // namespace desiree
