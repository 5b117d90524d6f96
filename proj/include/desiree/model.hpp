#pragma once

#include "desiree/declarations.hpp"
#include "desiree/description.hpp"
#include "desiree/diagnostics.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace desiree {

struct Element {
  std::string id;
  ElementKind kind = ElementKind::Goal;
  ElementBody body;
  bool active = true;
  Span span;
  // Set when a constructor application built this element.
  std::optional<std::string> constructed_by;
};

enum class Verdict { Verified, Asserted, Violated, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Asserted: return "asserted";
    case Verdict::Violated: return "violated";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

struct Application {
  std::string id;
  OperatorKind op = OperatorKind::Reduce;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  OperatorArgs args;
  std::optional<Strength> declared;  // tag written in the file
  Strength strength = Strength::Weaken;  // declared tag, else the computed one
  Verdict verdict = Verdict::Unknown;
  std::string note;  // why the verdict came out as it did
  Span span;
};

struct ModelStore {
  std::vector<Element> elements;  // declaration order
  std::vector<Application> applications;
  std::vector<SubsumptionForm> axioms;
  std::vector<std::pair<DescRef, DescRef>> disjointness;
  std::vector<std::pair<std::string, std::string>> dimension_of;  // (child, parent)
  std::vector<std::pair<std::string, std::string>> part_of;       // (child, parent)
  std::map<std::string, bool> factors{{"Very", false}, {"Nearly", true}, {"Almost", true}};
  std::vector<std::vector<std::string>> conflicts;

  const Element* find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &elements[it->second];
  }
  Element* find(const std::string& id) {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &elements[it->second];
  }
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  /// Adds an element; returns false when the id is taken.
  bool add(Element e) {
    if (contains(e.id)) return false;
    index_.emplace(e.id, elements.size());
    elements.push_back(std::move(e));
    return true;
  }

  const Application* find_application(const std::string& id) const {
    for (const auto& a : applications)
      if (a.id == id) return &a;
    return nullptr;
  }

  bool empty() const {
    return elements.empty() && applications.empty() && axioms.empty() && disjointness.empty() &&
           dimension_of.empty() && part_of.empty() && conflicts.empty();
  }

 private:
  std::map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// stats

struct KindCount {
  std::size_t total = 0;
  std::size_t active = 0;
  std::size_t dropped = 0;
};

struct ModelStats {
  std::map<ElementKind, KindCount> per_kind;
  KindCount elements;
  std::size_t applications = 0;
  std::size_t axioms = 0;
  std::size_t conflicts = 0;
};

inline ModelStats stats(const ModelStore& m) {
  ModelStats s;
  for (ElementKind k : kAllKinds) s.per_kind[k];
  for (const auto& e : m.elements) {
    auto& c = s.per_kind[e.kind];
    ++c.total;
    ++s.elements.total;
    if (e.active) {
      ++c.active;
      ++s.elements.active;
    } else {
      ++c.dropped;
      ++s.elements.dropped;
    }
  }
  s.applications = m.applications.size();
  s.axioms = m.axioms.size() + m.disjointness.size();
  s.conflicts = m.conflicts.size();
  return s;
}

// ---------------------------------------------------------------------------
// ReferTo

struct ReferTo {
  std::string from;
  std::string to;
  std::string via;  // innermost slot around the mention; empty at top level

  friend bool operator<(const ReferTo& a, const ReferTo& b) {
    return std::tie(a.from, a.to, a.via) < std::tie(b.from, b.to, b.via);
  }
  friend bool operator==(const ReferTo&, const ReferTo&) = default;
};

namespace detail {

template <typename F>
void mentions(const Description& d, const std::string& via, F&& f) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Atom>) {
          f(x.name, via);
        } else if constexpr (std::is_same_v<T, Slot>) {
          mentions(*x.filler, x.slot, f);
        } else if constexpr (std::is_same_v<T, Enumeration>) {
          for (const auto& m : x.members) f(m, via);
        } else if constexpr (std::is_same_v<T, Projection>) {
          mentions(*x.base, x.slot, f);
        } else if constexpr (std::is_same_v<T, Binary>) {
          mentions(*x.lhs, via, f);
          mentions(*x.rhs, via, f);
        }
      },
      d.node);
}

template <typename F>
void body_mentions(const ElementBody& body, F&& f) {
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ConceptBody>) {
          mentions(*b.desc, "", f);
        } else if constexpr (std::is_same_v<T, SubsumptionForm>) {
          mentions(*b.lhs, "", f);
          mentions(*b.rhs, "", f);
        } else if constexpr (std::is_same_v<T, FunctionDesc>) {
          f(b.name, "");
          for (const auto& s : b.slots) mentions(*s, "", f);
        } else if constexpr (std::is_same_v<T, QualityForm>) {
          mentions(*b.subject, std::string(kInheresIn), f);
          if (b.observer) mentions(*b.observer, std::string(kObservedBy), f);
        }
      },
      body);
}

}  // namespace detail

/// Edges from an element to every other element its body mentions.
inline std::vector<ReferTo> referto_edges(const ModelStore& m) {
  std::set<ReferTo> edges;
  for (const auto& e : m.elements) {
    detail::body_mentions(e.body, [&](const std::string& name, const std::string& via) {
      if (name != e.id && m.contains(name)) edges.insert(ReferTo{e.id, name, via});
    });
  }
  return {edges.begin(), edges.end()};
}

/// The description an element stands for, when it has one.
inline DescRef element_description(const Element& e) {
  if (const auto* c = std::get_if<ConceptBody>(&e.body)) return c->desc;
  if (const auto* f = std::get_if<FunctionDesc>(&e.body)) return f->as_description();
  return nullptr;
}

}  // namespace desiree
