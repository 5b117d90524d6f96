#pragma once

#include "desiree/description.hpp"
#include "desiree/diagnostics.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace desiree {

// ---------------------------------------------------------------------------
// Element kinds

enum class ElementKind { Goal, FG, QG, CTG, F, FC, QC, SC, DA };

inline constexpr std::array<ElementKind, 9> kAllKinds = {
    ElementKind::Goal, ElementKind::FG, ElementKind::QG, ElementKind::CTG, ElementKind::F,
    ElementKind::FC,   ElementKind::QC, ElementKind::SC, ElementKind::DA};

inline const char* keyword(ElementKind k) {
  switch (k) {
    case ElementKind::Goal: return "goal";
    case ElementKind::FG: return "fg";
    case ElementKind::QG: return "qg";
    case ElementKind::CTG: return "ctg";
    case ElementKind::F: return "f";
    case ElementKind::FC: return "fc";
    case ElementKind::QC: return "qc";
    case ElementKind::SC: return "sc";
    case ElementKind::DA: return "da";
  }
  return "?";
}

inline const char* display_name(ElementKind k) {
  switch (k) {
    case ElementKind::Goal: return "Goal";
    case ElementKind::FG: return "FG";
    case ElementKind::QG: return "QG";
    case ElementKind::CTG: return "CTG";
    case ElementKind::F: return "F";
    case ElementKind::FC: return "FC";
    case ElementKind::QC: return "QC";
    case ElementKind::SC: return "SC";
    case ElementKind::DA: return "DA";
  }
  return "?";
}

inline std::optional<ElementKind> kind_from_keyword(std::string_view s) {
  for (ElementKind k : kAllKinds)
    if (s == keyword(k)) return k;
  return std::nullopt;
}

inline bool is_goal_kind(ElementKind k) {
  return k == ElementKind::Goal || k == ElementKind::FG || k == ElementKind::QG ||
         k == ElementKind::CTG;
}
inline bool is_spec_kind(ElementKind k) {
  return k == ElementKind::F || k == ElementKind::FC || k == ElementKind::QC ||
         k == ElementKind::SC;
}
inline bool is_qgc_kind(ElementKind k) { return k == ElementKind::QG || k == ElementKind::QC; }

// ---------------------------------------------------------------------------
// Element bodies

struct NLText {
  std::string text;
  friend bool operator==(const NLText&, const NLText&) = default;
};

/// A bare description, e.g. a structured goal.
struct ConceptBody {
  DescRef desc;
  friend bool operator==(const ConceptBody& a, const ConceptBody& b) { return same(a.desc, b.desc); }
};

/// `lhs :< rhs`: every instance of lhs is in rhs.
struct SubsumptionForm {
  DescRef lhs;
  DescRef rhs;
  friend bool operator==(const SubsumptionForm& a, const SubsumptionForm& b) {
    return same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
  }
};

struct FunctionDesc {
  std::string name;
  std::vector<DescRef> slots;  // each a Slot description

  friend bool operator==(const FunctionDesc& a, const FunctionDesc& b) {
    if (a.name != b.name || a.slots.size() != b.slots.size()) return false;
    for (std::size_t i = 0; i < a.slots.size(); ++i)
      if (!same(a.slots[i], b.slots[i])) return false;
    return true;
  }

  /// The function as a description: name intersected with its slots.
  DescRef as_description() const {
    DescRef d = atom(name);
    for (const auto& s : slots) d = conj(d, s);
    return d;
  }
};

/// One de-Universalize step: `var` binds the subset reached via `path`.
struct PctEntry {
  std::string var;
  std::vector<std::string> path;  // first element is inheres_in or observed_by
  Rational pct;                   // fraction in (0, 1]

  bool vacuous() const { return pct == Rational(1); }
  friend bool operator==(const PctEntry&, const PctEntry&) = default;
};

/// `Q (subject) :: region [<observed_by: observer>]` plus de-Universalize steps.
struct QualityForm {
  std::string quality;
  DescRef subject;
  RegionExpr region;
  DescRef observer;  // null when unobserved
  std::vector<PctEntry> pct_chain;

  friend bool operator==(const QualityForm& a, const QualityForm& b) {
    return a.quality == b.quality && same(a.subject, b.subject) && a.region == b.region &&
           same(a.observer, b.observer) && a.pct_chain == b.pct_chain;
  }
};

using ElementBody = std::variant<NLText, ConceptBody, SubsumptionForm, FunctionDesc, QualityForm>;

// ---------------------------------------------------------------------------
// Operators

enum class OperatorKind {
  Reduce,
  Interpret,
  Focus,
  ScaleUp,
  ScaleDown,
  DeUniversalize,
  Resolve,
  Operationalize,
  Observe
};

inline const char* keyword(OperatorKind op) {
  switch (op) {
    case OperatorKind::Reduce: return "reduce";
    case OperatorKind::Interpret: return "interpret";
    case OperatorKind::Focus: return "focus";
    case OperatorKind::ScaleUp: return "scale_up";
    case OperatorKind::ScaleDown: return "scale_down";
    case OperatorKind::DeUniversalize: return "deuniversalize";
    case OperatorKind::Resolve: return "resolve";
    case OperatorKind::Operationalize: return "operationalize";
    case OperatorKind::Observe: return "observe";
  }
  return "?";
}

inline std::optional<OperatorKind> operator_from_keyword(std::string_view s) {
  static constexpr std::pair<std::string_view, OperatorKind> table[] = {
      {"reduce", OperatorKind::Reduce},
      {"rd", OperatorKind::Reduce},
      {"interpret", OperatorKind::Interpret},
      {"focus", OperatorKind::Focus},
      {"fk", OperatorKind::Focus},
      {"scale_up", OperatorKind::ScaleUp},
      {"gu", OperatorKind::ScaleUp},
      {"scale_down", OperatorKind::ScaleDown},
      {"gd", OperatorKind::ScaleDown},
      {"deuniversalize", OperatorKind::DeUniversalize},
      {"u", OperatorKind::DeUniversalize},
      {"resolve", OperatorKind::Resolve},
      {"rs", OperatorKind::Resolve},
      {"operationalize", OperatorKind::Operationalize},
      {"op", OperatorKind::Operationalize},
      {"observe", OperatorKind::Observe},
      {"ob", OperatorKind::Observe},
  };
  for (const auto& [name, op] : table)
    if (name == s) return op;
  return std::nullopt;
}

inline bool is_constructor(OperatorKind op) {
  return op == OperatorKind::Focus || op == OperatorKind::ScaleUp ||
         op == OperatorKind::ScaleDown || op == OperatorKind::DeUniversalize ||
         op == OperatorKind::Observe;
}

enum class Strength { Strengthen, Weaken, Equate };

inline char tag(Strength s) {
  switch (s) {
    case Strength::Strengthen: return 's';
    case Strength::Weaken: return 'w';
    case Strength::Equate: return 'e';
  }
  return '?';
}

inline const char* to_string(Strength s) {
  switch (s) {
    case Strength::Strengthen: return "strengthen";
    case Strength::Weaken: return "weaken";
    case Strength::Equate: return "equate";
  }
  return "?";
}

struct FocusArgs {
  std::vector<DescRef> targets;
};

struct ScaleArgs {
  // Qualitative factor name, or quantitative (low-bound factor, high-bound factor).
  std::variant<std::string, std::pair<Rational, Rational>> factor;
};

struct DeUniversalizeArgs {
  std::string var;
  std::vector<std::string> slot_path;
  Rational pct;
};

struct ObserveArgs {
  DescRef observer;
};

using OperatorArgs =
    std::variant<std::monostate, FocusArgs, ScaleArgs, DeUniversalizeArgs, ObserveArgs>;

// ---------------------------------------------------------------------------
// Model-file declarations

struct ElementDecl {
  ElementKind kind;
  std::string id;
  ElementBody body;
};

struct AxiomDecl {
  DescRef lhs;
  DescRef rhs;
};

struct DisjointDecl {
  DescRef first;
  DescRef second;
};

enum class HierarchyKind { DimensionOf, PartOf };

struct HierarchyDecl {
  HierarchyKind kind;
  std::string child;
  std::string parent;
};

/// `factor Nearly weakens.` extends the qualitative scale vocabulary.
struct FactorDecl {
  std::string name;
  bool weakens;
};

struct ApplicationDecl {
  std::optional<std::string> label;
  OperatorKind op;
  std::vector<std::string> inputs;
  OperatorArgs args;
  std::optional<Strength> strength;
  std::vector<std::string> outputs;
};

struct ConflictDecl {
  std::vector<std::string> ids;
};

struct Declaration {
  std::variant<ElementDecl, AxiomDecl, DisjointDecl, HierarchyDecl, FactorDecl, ApplicationDecl,
               ConflictDecl>
      node;
  Span span;
};

struct ModelFileAst {
  std::vector<Declaration> declarations;
};

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_slot_path(const std::vector<std::string>& path, const std::string& var) {
  std::string out = var;
  for (auto it = path.rbegin(); it != path.rend(); ++it) out = "<" + *it + ": " + out + ">";
  return out;
}

inline std::string render_body(const ElementBody& body) {
  return std::visit(
      [](const auto& b) -> std::string {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, NLText>) {
          std::string out = "\"";
          for (char c : b.text) {
            if (c == '"' || c == '\\') out += '\\';
            if (c == '\n') {
              out += "\\n";
              continue;
            }
            out += c;
          }
          return out + "\"";
        } else if constexpr (std::is_same_v<T, ConceptBody>) {
          return render_description(*b.desc);
        } else if constexpr (std::is_same_v<T, SubsumptionForm>) {
          return render_description(*b.lhs) + " :< " + render_description(*b.rhs);
        } else if constexpr (std::is_same_v<T, FunctionDesc>) {
          std::string out = b.name;
          for (const auto& s : b.slots) out += " " + render_description(*s);
          return out;
        } else {
          std::string out = b.quality + "(" + render_description(*b.subject) +
                            ") :: " + render_region(b.region);
          if (b.observer) out += " <observed_by: " + render_description(*b.observer) + ">";
          for (const auto& e : b.pct_chain)
            out += " pct(" + e.var + ", " + render_slot_path(e.path, e.var) + ", " +
                   render_percent(e.pct) + ")";
          return out;
        }
      },
      body);
}

inline std::string render_operator_args(const ApplicationDecl& a) {
  std::string out;
  auto ids = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  std::visit(
      [&](const auto& args) {
        using T = std::decay_t<decltype(args)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          out = ids(a.inputs);
        } else if constexpr (std::is_same_v<T, FocusArgs>) {
          out = ids(a.inputs) + ", {";
          for (std::size_t i = 0; i < args.targets.size(); ++i)
            out += (i ? ", " : "") + render_description(*args.targets[i]);
          out += "}";
        } else if constexpr (std::is_same_v<T, ScaleArgs>) {
          out = ids(a.inputs) + ", ";
          if (const auto* name = std::get_if<std::string>(&args.factor)) {
            out += *name;
          } else {
            const auto& [lo, hi] = std::get<std::pair<Rational, Rational>>(args.factor);
            out += "(" + format_rational(lo) + ", " + format_rational(hi) + ")";
          }
        } else if constexpr (std::is_same_v<T, DeUniversalizeArgs>) {
          out = args.var + ", " + ids(a.inputs) + ", " + render_slot_path(args.slot_path, args.var) +
                ", " + render_percent(args.pct);
        } else {
          out = ids(a.inputs) + ", " + render_description(*args.observer);
        }
      },
      a.args);
  return out;
}

inline std::string render_declaration(const Declaration& decl) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ElementDecl>) {
          return std::string(keyword(d.kind)) + " " + d.id + " = " + render_body(d.body) + ".";
        } else if constexpr (std::is_same_v<T, AxiomDecl>) {
          return "axiom " + render_description(*d.lhs) + " :< " + render_description(*d.rhs) + ".";
        } else if constexpr (std::is_same_v<T, DisjointDecl>) {
          return "disjoint " + render_description(*d.first) + ", " +
                 render_description(*d.second) + ".";
        } else if constexpr (std::is_same_v<T, HierarchyDecl>) {
          return std::string(d.kind == HierarchyKind::DimensionOf ? "dimension " : "part ") +
                 d.child + " of " + d.parent + ".";
        } else if constexpr (std::is_same_v<T, FactorDecl>) {
          return "factor " + d.name + (d.weakens ? " weakens." : " strengthens.");
        } else if constexpr (std::is_same_v<T, ApplicationDecl>) {
          std::string out = d.label ? *d.label + ": " : "";
          out += std::string(keyword(d.op)) + "(" + render_operator_args(d) + ")";
          if (d.strength) out += std::string(" [") + tag(*d.strength) + "]";
          out += " = {";
          for (std::size_t i = 0; i < d.outputs.size(); ++i)
            out += (i ? ", " : "") + d.outputs[i];
          return out + "}.";
        } else {
          std::string out = "conflict {";
          for (std::size_t i = 0; i < d.ids.size(); ++i) out += (i ? ", " : "") + d.ids[i];
          return out + "}.";
        }
      },
      decl.node);
}

/// Canonical text of a whole model file, one declaration per line.
inline std::string render_model_file(const ModelFileAst& ast) {
  std::string out;
  for (const auto& d : ast.declarations) out += render_declaration(d) + "\n";
  return out;
}

}  // namespace desiree
