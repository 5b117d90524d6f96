#pragma once

#include "desiree/description.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace desiree {

inline constexpr std::size_t kDefaultMaxDnf = 16;

struct NormalForm;
using NFRef = std::shared_ptr<const NormalForm>;

/// Between `min` and `max` successors fall in `filler`.
struct QualifiedRestriction {
  unsigned min = 0;
  std::optional<unsigned> max;
  NFRef filler;
};

struct SlotRestriction {
  unsigned total_min = 0;            // over all successors
  std::optional<unsigned> total_max;
  NFRef only;                        // every successor falls in it
  std::vector<QualifiedRestriction> qualified;
};

struct Conjunct {
  bool bottom = false;
  bool object = false;  // known to denote objects (e.g. from Anything)
  std::set<std::string> atoms;
  std::optional<std::set<std::string>> enums;
  std::map<std::string, SlotRestriction> slots;
  std::vector<RegionExpr> regions;
  std::vector<std::pair<std::string, NFRef>> projections;  // (slot, base)
  std::vector<NFRef> negated;

  bool is_object() const { return object || !atoms.empty() || enums || !slots.empty(); }
  bool is_value() const { return !regions.empty(); }
};

/// A union of conjuncts. Never empty: Nothing is a single bottom conjunct.
struct NormalForm {
  std::vector<Conjunct> disjuncts;
  bool overflow = false;  // the disjunct cap was hit; the form is not usable
};

inline NormalForm nf_bottom() {
  NormalForm n;
  Conjunct c;
  c.bottom = true;
  n.disjuncts.push_back(std::move(c));
  return n;
}

inline NormalForm nf_of(Conjunct c) {
  NormalForm n;
  n.disjuncts.push_back(std::move(c));
  return n;
}

inline NormalForm nf_and(const NormalForm& a, const NormalForm& b, std::size_t cap);

inline Conjunct merge(const Conjunct& a, const Conjunct& b, std::size_t cap, bool& overflow) {
  Conjunct c = a;
  c.bottom = a.bottom || b.bottom;
  c.object = a.object || b.object;
  c.atoms.insert(b.atoms.begin(), b.atoms.end());
  if (b.enums) {
    if (c.enums) {
      std::set<std::string> both;
      std::set_intersection(c.enums->begin(), c.enums->end(), b.enums->begin(), b.enums->end(),
                            std::inserter(both, both.end()));
      c.enums = std::move(both);
    } else {
      c.enums = b.enums;
    }
  }
  for (const auto& [name, rb] : b.slots) {
    auto it = c.slots.find(name);
    if (it == c.slots.end()) {
      c.slots.emplace(name, rb);
      continue;
    }
    SlotRestriction& ra = it->second;
    ra.total_min = std::max(ra.total_min, rb.total_min);
    if (rb.total_max) ra.total_max = ra.total_max ? std::min(*ra.total_max, *rb.total_max) : *rb.total_max;
    if (rb.only) {
      if (ra.only) {
        auto joined = std::make_shared<NormalForm>(nf_and(*ra.only, *rb.only, cap));
        overflow = overflow || joined->overflow;
        ra.only = std::move(joined);
      } else {
        ra.only = rb.only;
      }
    }
    ra.qualified.insert(ra.qualified.end(), rb.qualified.begin(), rb.qualified.end());
  }
  c.regions.insert(c.regions.end(), b.regions.begin(), b.regions.end());
  c.projections.insert(c.projections.end(), b.projections.begin(), b.projections.end());
  c.negated.insert(c.negated.end(), b.negated.begin(), b.negated.end());
  return c;
}

inline NormalForm nf_and(const NormalForm& a, const NormalForm& b, std::size_t cap) {
  NormalForm out;
  out.overflow = a.overflow || b.overflow;
  if (a.disjuncts.size() * b.disjuncts.size() > cap) {
    out.overflow = true;
    out.disjuncts.push_back(Conjunct{});
    return out;
  }
  for (const auto& ca : a.disjuncts)
    for (const auto& cb : b.disjuncts) out.disjuncts.push_back(merge(ca, cb, cap, out.overflow));
  return out;
}

inline NormalForm nf_or(const NormalForm& a, const NormalForm& b, std::size_t cap) {
  NormalForm out;
  out.overflow = a.overflow || b.overflow;
  for (const auto* side : {&a, &b})
    for (const auto& c : side->disjuncts)
      if (!c.bottom) out.disjuncts.push_back(c);
  if (out.disjuncts.empty()) return nf_bottom();
  if (out.disjuncts.size() > cap) out.overflow = true;
  return out;
}

/// Translates a description into disjunctive normal form.
inline NormalForm translate(const Description& d, std::size_t cap = kDefaultMaxDnf) {
  return std::visit(
      [cap](const auto& x) -> NormalForm {
        using T = std::decay_t<decltype(x)>;
        Conjunct c;
        if constexpr (std::is_same_v<T, Atom>) {
          if (x.name == kNothing) return nf_bottom();
          if (x.name == kAnything) {
            c.object = true;
          } else {
            c.atoms.insert(x.name);
          }
          return nf_of(std::move(c));
        } else if constexpr (std::is_same_v<T, Slot>) {
          auto filler = std::make_shared<NormalForm>(translate(*x.filler, cap));
          const bool overflow = filler->overflow;
          SlotRestriction r;
          const unsigned n = x.modifier.n;
          switch (x.modifier.kind) {
            case CardModifier::Kind::ExactlyOne:
              r.total_min = 1;
              r.total_max = 1;
              r.only = filler;
              break;
            case CardModifier::Kind::AtMost: r.qualified.push_back({0, n, filler}); break;
            case CardModifier::Kind::AtLeast: r.qualified.push_back({n, std::nullopt, filler}); break;
            case CardModifier::Kind::Exactly: r.qualified.push_back({n, n, filler}); break;
            case CardModifier::Kind::Some: r.qualified.push_back({1, std::nullopt, filler}); break;
            case CardModifier::Kind::Only: r.only = filler; break;
          }
          c.slots.emplace(x.slot, std::move(r));
          NormalForm out = nf_of(std::move(c));
          out.overflow = overflow;
          return out;
        } else if constexpr (std::is_same_v<T, Enumeration>) {
          c.enums = std::set<std::string>(x.members.begin(), x.members.end());
          return nf_of(std::move(c));
        } else if constexpr (std::is_same_v<T, Projection>) {
          auto base = std::make_shared<NormalForm>(translate(*x.base, cap));
          const bool overflow = base->overflow;
          c.projections.emplace_back(x.slot, std::move(base));
          NormalForm out = nf_of(std::move(c));
          out.overflow = overflow;
          return out;
        } else if constexpr (std::is_same_v<T, Binary>) {
          NormalForm l = translate(*x.lhs, cap);
          NormalForm r = translate(*x.rhs, cap);
          switch (x.op) {
            case BinaryOp::And: return nf_and(l, r, cap);
            case BinaryOp::Or: return nf_or(l, r, cap);
            case BinaryOp::Diff: {
              auto neg = std::make_shared<NormalForm>(std::move(r));
              l.overflow = l.overflow || neg->overflow;
              for (auto& conj : l.disjuncts) conj.negated.push_back(neg);
              return l;
            }
          }
          return l;
        } else {
          c.regions.push_back(x.expr);
          return nf_of(std::move(c));
        }
      },
      d.node);
}

}  // namespace desiree
