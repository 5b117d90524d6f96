#pragma once

#include "desiree/diagnostics.hpp"
#include "desiree/model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace desiree {

/// One implied subsumption between atoms and where it came from.
struct ImpliedEdge {
  std::string sub;
  std::string super;
  std::string reason;  // human-readable justification
  std::string source;  // contributing element id; empty for plain axioms
  Span span;
};

/// An atom that falls below both members of a disjoint pair.
struct Clash {
  std::string atom;
  std::string first;
  std::string second;
  std::vector<ImpliedEdge> first_chain;  // atom ... first
  std::vector<ImpliedEdge> second_chain;

  std::vector<std::string> related() const {
    std::set<std::string> ids;
    for (const auto* chain : {&first_chain, &second_chain})
      for (const auto& e : *chain)
        if (!e.source.empty()) ids.insert(e.source);
    std::vector<std::string> out{atom};
    out.insert(out.end(), ids.begin(), ids.end());
    return out;
  }
};

namespace detail {

inline void top_conjuncts(const DescRef& d, std::vector<DescRef>& out) {
  if (const auto* b = d->as<Binary>(); b && b->op == BinaryOp::And) {
    top_conjuncts(b->lhs, out);
    top_conjuncts(b->rhs, out);
    return;
  }
  out.push_back(d);
}

inline std::optional<std::string> atom_name(const DescRef& d) {
  if (const auto* a = d->as<Atom>()) return a->name;
  return std::nullopt;
}

// `K :< <s: ONLY C>`: fillers of s in functions below K are below C.
struct OnlyConstraint {
  std::string owner;
  std::string slot;
  std::string filler;
  std::string source;
  std::string text;
};

class ImplicationGraph {
 public:
  bool add(ImpliedEdge e) {
    if (e.sub == e.super) return false;
    for (const auto& x : edges_[e.sub])
      if (x.super == e.super) return false;
    edges_[e.sub].push_back(std::move(e));
    return true;
  }

  /// Shortest derivation from `from` to every reachable atom.
  std::map<std::string, std::vector<ImpliedEdge>> chains(const std::string& from) const {
    std::map<std::string, std::vector<ImpliedEdge>> out{{from, {}}};
    std::vector<std::string> frontier{from};
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const auto& n : frontier) {
        auto it = edges_.find(n);
        if (it == edges_.end()) continue;
        for (const auto& e : it->second) {
          if (out.count(e.super)) continue;
          auto chain = out[n];
          chain.push_back(e);
          out.emplace(e.super, std::move(chain));
          next.push_back(e.super);
        }
      }
      frontier = std::move(next);
    }
    return out;
  }

  bool reaches(const std::string& from, const std::string& to) const { return chains(from).count(to) != 0; }

  std::set<std::string> nodes() const {
    std::set<std::string> out;
    for (const auto& [sub, es] : edges_) {
      out.insert(sub);
      for (const auto& e : es) out.insert(e.super);
    }
    return out;
  }

 private:
  std::map<std::string, std::vector<ImpliedEdge>> edges_;
};

inline std::string render_form(const DescRef& lhs, const DescRef& rhs) {
  return render_description(*lhs) + " :< " + render_description(*rhs);
}

}  // namespace detail

/// Atoms implied to lie below two disjoint concepts, with derivations.
/// Implications come from axioms and DAs with an atomic left-hand side and
/// from ONLY constraints applied to the slot fillers of functions.
inline std::vector<Clash> check_consistency(const ModelStore& m) {
  detail::ImplicationGraph g;
  std::vector<detail::OnlyConstraint> only;

  auto absorb = [&](const SubsumptionForm& f, const std::string& source, Span span) {
    const auto lhs = detail::atom_name(f.lhs);
    if (!lhs) return;
    std::vector<DescRef> parts;
    detail::top_conjuncts(f.rhs, parts);
    const std::string text = detail::render_form(f.lhs, f.rhs);
    for (const auto& p : parts) {
      if (auto a = detail::atom_name(p)) {
        g.add({*lhs, *a, text, source, span});
      } else if (const auto* s = p->as<Slot>(); s && s->modifier.kind == CardModifier::Kind::Only) {
        if (auto c = detail::atom_name(s->filler)) only.push_back({*lhs, s->slot, *c, source, text});
      }
    }
  };
  for (const auto& ax : m.axioms) absorb(ax, "", Span{});
  for (const auto& e : m.elements) {
    if (!e.active) continue;
    if (e.kind == ElementKind::DA || e.kind == ElementKind::FC) {
      if (const auto* f = std::get_if<SubsumptionForm>(&e.body)) absorb(*f, e.id, e.span);
    }
  }

  // Fillers of constrained slots, to a fixpoint since new edges can put more
  // functions under a constrained owner.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : m.elements) {
      const auto* f = std::get_if<FunctionDesc>(&e.body);
      if (!e.active || !f) continue;
      for (const auto& c : only) {
        const bool applies = c.owner == e.id || c.owner == f->name || g.reaches(f->name, c.owner) ||
                             g.reaches(e.id, c.owner);
        if (!applies) continue;
        for (const auto& slot_desc : f->slots) {
          const auto* s = slot_desc->as<Slot>();
          if (!s || s->slot != c.slot) continue;
          std::vector<DescRef> fillers;
          detail::top_conjuncts(s->filler, fillers);
          for (const auto& fd : fillers) {
            auto a = detail::atom_name(fd);
            if (!a) continue;
            const std::string why = *a + " fills " + c.slot + " of " + e.id + " (" + f->name + "), and " + c.text;
            changed |= g.add({*a, c.filler, why, e.id, e.span});
          }
        }
      }
    }
  }

  std::vector<std::pair<std::string, std::string>> disjoint;
  auto add_pair = [&](const DescRef& x, const DescRef& y) {
    auto a = detail::atom_name(x), b = detail::atom_name(y);
    if (a && b && *a != *b) disjoint.emplace_back(*a, *b);
  };
  for (const auto& [x, y] : m.disjointness) add_pair(x, y);
  for (const auto& e : m.elements) {
    const auto* f = std::get_if<SubsumptionForm>(&e.body);
    if (!e.active || e.kind != ElementKind::DA || !f) continue;
    const auto* bottom = f->rhs->as<Atom>();
    const auto* b = f->lhs->as<Binary>();
    if (bottom && bottom->name == kNothing && b && b->op == BinaryOp::And) add_pair(b->lhs, b->rhs);
  }

  std::vector<Clash> out;
  for (const auto& atom : g.nodes()) {
    const auto chains = g.chains(atom);
    std::set<std::pair<std::string, std::string>> seen;
    for (auto [p, q] : disjoint) {
      if (q < p) std::swap(p, q);
      if (!chains.count(p) || !chains.count(q) || !seen.emplace(p, q).second) continue;
      out.push_back(Clash{atom, p, q, chains.at(p), chains.at(q)});
    }
  }
  return out;
}

inline std::string describe(const Clash& c) {
  std::string s = c.atom + " is below both " + c.first + " and " + c.second + " which are disjoint";
  for (const auto* chain : {&c.first_chain, &c.second_chain}) {
    std::string path;
    for (const auto& e : *chain)
      path += (path.empty() ? "" : "; ") + e.reason + (e.source.empty() ? "" : " [" + e.source + "]");
    s += "\n  " + path;
  }
  return s;
}

inline std::vector<Diagnostic> consistency_diagnostics(const std::vector<Clash>& clashes) {
  std::vector<Diagnostic> out;
  for (const auto& c : clashes) {
    Span span;
    for (const auto* chain : {&c.second_chain, &c.first_chain})
      for (const auto& e : *chain)
        if (!e.source.empty() && (span.offset == 0 || e.span.offset > span.offset)) span = e.span;
    out.push_back(make_error(codes::kClash, span, describe(c), c.related()));
  }
  return out;
}

}  // namespace desiree
