#pragma once

#include "desiree/declarations.hpp"
#include "desiree/description.hpp"
#include "desiree/interpretation.hpp"
#include "desiree/model.hpp"
#include "desiree/normal_form.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace desiree {

/// Three-valued outcome. Disproved always carries a witness interpretation.
struct Verdict3 {
  enum class Kind { Proved, Disproved, Unknown };
  Kind kind = Kind::Unknown;
  std::string reason;
  std::optional<Interpretation> witness;
  int witness_root = -1;

  static Verdict3 proved(std::string why = {}) { return {Kind::Proved, std::move(why), {}, -1}; }
  static Verdict3 unknown(std::string why) { return {Kind::Unknown, std::move(why), {}, -1}; }
  static Verdict3 disproved(Interpretation I, int root, std::string why = {}) {
    return {Kind::Disproved, std::move(why), std::move(I), root};
  }

  bool is_proved() const { return kind == Kind::Proved; }
  bool is_disproved() const { return kind == Kind::Disproved; }
  bool is_unknown() const { return kind == Kind::Unknown; }
};

inline const char* to_string(Verdict3::Kind k) {
  switch (k) {
    case Verdict3::Kind::Proved: return "proved";
    case Verdict3::Kind::Disproved: return "disproved";
    case Verdict3::Kind::Unknown: return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Terminology

/// Axioms in the forms the structural reasoner can use, plus the raw
/// axioms for checking candidate models.
struct TBox {
  struct Rule {
    std::set<std::string> atoms;                 // fires when all are present
    std::optional<std::set<std::string>> enums;  // or when the individual set is inside these
    Conjunct rhs;
  };

  std::vector<Rule> rules;
  std::vector<std::pair<NFRef, NFRef>> general_disjoint;
  std::vector<std::pair<DescRef, DescRef>> axioms;
  std::vector<std::pair<DescRef, DescRef>> disjoint;
  std::size_t max_dnf = kDefaultMaxDnf;

  explicit TBox(std::size_t cap = kDefaultMaxDnf) : max_dnf(cap) {}

  void add_axiom(const DescRef& lhs, const DescRef& rhs) {
    axioms.emplace_back(lhs, rhs);
    const NormalForm L = translate(*lhs, max_dnf);
    const NormalForm R = translate(*rhs, max_dnf);
    if (L.overflow || R.overflow) return;
    Conjunct consequence;
    if (R.disjuncts.size() == 1) {
      consequence = R.disjuncts.front();
    } else {
      // Only the atoms every disjunct shares follow for sure.
      consequence.atoms = R.disjuncts.front().atoms;
      for (const auto& c : R.disjuncts) {
        std::set<std::string> keep;
        std::set_intersection(consequence.atoms.begin(), consequence.atoms.end(), c.atoms.begin(),
                              c.atoms.end(), std::inserter(keep, keep.end()));
        consequence.atoms = std::move(keep);
      }
      if (consequence.atoms.empty()) return;
    }
    for (const auto& l : L.disjuncts) {
      if (l.bottom || !l.slots.empty() || !l.regions.empty() || !l.projections.empty() ||
          !l.negated.empty())
        continue;
      if (l.enums && l.atoms.empty()) {
        rules.push_back(Rule{{}, l.enums, consequence});
      } else if (!l.enums && !l.atoms.empty()) {
        rules.push_back(Rule{l.atoms, std::nullopt, consequence});
      }
    }
  }

  void add_disjoint(const DescRef& a, const DescRef& b) {
    disjoint.emplace_back(a, b);
    auto A = std::make_shared<NormalForm>(translate(*a, max_dnf));
    auto B = std::make_shared<NormalForm>(translate(*b, max_dnf));
    if (A->overflow || B->overflow) return;
    auto atom_only = [](const NormalForm& n) {
      if (n.disjuncts.size() != 1) return false;
      const Conjunct& c = n.disjuncts.front();
      return !c.bottom && !c.atoms.empty() && !c.enums && c.slots.empty() && c.regions.empty() &&
             c.projections.empty() && c.negated.empty();
    };
    if (atom_only(*A) && atom_only(*B)) {
      Rule r;
      r.atoms = A->disjuncts.front().atoms;
      r.atoms.insert(B->disjuncts.front().atoms.begin(), B->disjuncts.front().atoms.end());
      r.rhs.bottom = true;
      rules.push_back(std::move(r));
      return;
    }
    general_disjoint.emplace_back(std::move(A), std::move(B));
  }

  /// Every axiom and disjointness declaration is true in I.
  bool holds_in(const Interpretation& I) const {
    for (const auto& [l, r] : axioms)
      if (!I.satisfies(*l, *r)) return false;
    for (const auto& [a, b] : disjoint)
      if ((I.eval(*a) & I.eval(*b)) != 0) return false;
    return true;
  }
};

/// Axioms of a model: declared axioms, disjointness, and active domain assumptions.
inline TBox make_tbox(const ModelStore& m, std::size_t cap = kDefaultMaxDnf) {
  TBox t(cap);
  for (const auto& ax : m.axioms) t.add_axiom(ax.lhs, ax.rhs);
  for (const auto& [a, b] : m.disjointness) t.add_disjoint(a, b);
  for (const auto& e : m.elements) {
    if (e.kind != ElementKind::DA || !e.active) continue;
    if (const auto* f = std::get_if<SubsumptionForm>(&e.body)) t.add_axiom(f->lhs, f->rhs);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Regions

namespace detail {

inline DomainElement literal_value(const Literal& lit) {
  DomainElement v;
  v.is_value = true;
  if (const auto* n = std::get_if<Rational>(&lit)) {
    v.number = *n;
  } else {
    v.symbol = std::get<std::string>(lit);
  }
  return v;
}

inline DomainElement number_value(Rational n, std::string unit) {
  DomainElement v;
  v.is_value = true;
  v.number = n;
  v.unit = std::move(unit);
  return v;
}

// Numeric range of an interval or percentage region.
struct Range {
  std::string unit;
  Rational lo;
  std::optional<Rational> hi;
};

inline std::optional<Range> as_range(const RegionExpr& r) {
  if (const auto* i = std::get_if<Interval>(&r)) return Range{i->unit, i->lo, i->hi};
  if (const auto* p = std::get_if<PercentRange>(&r))
    return Range{std::string(kPercentUnit), p->lo, p->hi};
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Structural subsumption

class Reasoner {
 public:
  explicit Reasoner(const TBox& tbox) : tbox_(tbox) {}

  /// Structural proof that T(a) is inside T(b).
  bool proves(const NormalForm& a, const NormalForm& b) {
    if (a.overflow || b.overflow) return false;
    for (const auto& c : a.disjuncts)
      if (!covered(c, b)) return false;
    return true;
  }

  bool proves(const Description& a, const Description& b) {
    return proves(translate(a, tbox_.max_dnf), translate(b, tbox_.max_dnf));
  }

  bool covered(const Conjunct& raw, const NormalForm& b) {
    Guard g(depth_);
    if (g.too_deep()) return false;
    const Conjunct c = saturate(raw);
    if (unsatisfiable(c)) return true;
    for (const auto& c2 : b.disjuncts)
      if (conj_sub(c, c2)) return true;
    if (c.enums && c.enums->size() > 1) {
      for (const auto& m : *c.enums) {
        Conjunct one = c;
        one.enums = std::set<std::string>{m};
        if (!covered(one, b)) return false;
      }
      return true;
    }
    return false;
  }

  /// Applies axiom rules to a fixpoint.
  Conjunct saturate(const Conjunct& c) const {
    Conjunct s = c;
    std::vector<bool> applied(tbox_.rules.size(), false);
    bool overflow = false;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < tbox_.rules.size(); ++i) {
        if (applied[i] || !fires(tbox_.rules[i], s)) continue;
        s = merge(s, tbox_.rules[i].rhs, tbox_.max_dnf, overflow);
        applied[i] = true;
        changed = true;
      }
    }
    return s;
  }

  bool unsatisfiable(const NormalForm& n) {
    if (n.overflow) return false;
    for (const auto& c : n.disjuncts)
      if (!unsatisfiable(saturate(c))) return false;
    return true;
  }

  /// Sound emptiness test for a saturated conjunct.
  bool unsatisfiable(const Conjunct& c) {
    Guard g(depth_);
    if (g.too_deep()) return false;
    if (c.bottom) return true;
    if (c.enums && c.enums->empty()) return true;
    if (c.is_value() && c.is_object()) return true;
    if (c.is_value() && regions_empty(c.regions)) return true;
    for (const auto& [name, r] : c.slots)
      if (slot_unsat(r)) return true;
    for (const auto& [a, b] : tbox_.general_disjoint)
      if (matches_some(c, *a) && matches_some(c, *b)) return true;
    for (const auto& n : c.negated)
      if (matches_some(c, *n)) return true;
    return false;
  }

  /// Some interval comparison involved differing units.
  bool saw_unit_mismatch() const { return unit_mismatch_; }

  /// Region name reachable from `name` through axioms.
  std::set<std::string> name_closure(const std::string& name) const {
    Conjunct c;
    c.atoms.insert(name);
    return saturate(c).atoms;
  }

  bool region_sub(const std::vector<RegionExpr>& r1, const RegionExpr& r2) {
    for (const auto& a : r1)
      if (region_pair_sub(a, r2)) return true;
    if (std::holds_alternative<NamedRegion>(r2)) return false;

    // Finite candidate set from a value set, filtered by the other regions.
    for (const auto& a : r1) {
      const auto* vs = std::get_if<ValueSet>(&a);
      if (!vs) continue;
      bool all = true;
      for (const auto& lit : vs->values) {
        const DomainElement v = detail::literal_value(lit);
        bool possible = true;
        for (const auto& other : r1)
          if (!std::holds_alternative<NamedRegion>(other) && !region_contains(other, v)) possible = false;
        if (possible && !region_contains(r2, v)) all = false;
      }
      if (all) return true;
    }

    // Intersection of numeric ranges.
    std::optional<detail::Range> meet;
    for (const auto& a : r1) {
      auto r = detail::as_range(a);
      if (!r) continue;
      if (!meet) {
        meet = r;
        continue;
      }
      if (meet->unit != r->unit) return true;  // empty intersection
      meet->lo = std::max(meet->lo, r->lo);
      if (r->hi) meet->hi = meet->hi ? std::min(*meet->hi, *r->hi) : *r->hi;
    }
    if (!meet) return false;
    if (meet->hi && meet->lo > *meet->hi) return true;
    auto target = detail::as_range(r2);
    if (!target) return false;
    if (target->unit != meet->unit) {
      unit_mismatch_ = true;
      return false;
    }
    return meet->lo >= target->lo && (!target->hi || (meet->hi && *meet->hi <= *target->hi));
  }

 private:
  const TBox& tbox_;
  int depth_ = 0;
  bool unit_mismatch_ = false;

  struct Guard {
    int& depth;
    explicit Guard(int& d) : depth(d) { ++depth; }
    ~Guard() { --depth; }
    bool too_deep() const { return depth > 48; }
  };

  static bool fires(const TBox::Rule& r, const Conjunct& c) {
    if (r.enums) {
      if (!c.enums || c.enums->empty()) return false;
      return std::includes(r.enums->begin(), r.enums->end(), c.enums->begin(), c.enums->end());
    }
    return !r.atoms.empty() && std::includes(c.atoms.begin(), c.atoms.end(), r.atoms.begin(), r.atoms.end());
  }

  bool matches_some(const Conjunct& c, const NormalForm& n) {
    if (n.overflow) return false;
    for (const auto& c2 : n.disjuncts)
      if (conj_sub(c, c2)) return true;
    return false;
  }

  NormalForm meet(const NFRef& a, const NFRef& b) const {
    if (!b) return *a;
    return nf_and(*a, *b, tbox_.max_dnf);
  }

  bool slot_unsat(const SlotRestriction& r) {
    if (r.total_max && r.total_min > *r.total_max) return true;
    if (r.only && r.total_min > 0 && unsatisfiable(*r.only)) return true;
    for (const auto& q : r.qualified) {
      if (q.max && q.min > *q.max) return true;
      if (r.total_max && q.min > *r.total_max) return true;
      if (q.min > 0 && unsatisfiable(meet(q.filler, r.only))) return true;
      if (q.max && r.only && r.total_min > *q.max && proves(*r.only, *q.filler)) return true;
      for (const auto& q2 : r.qualified)
        if (q2.max && q.min > *q2.max && proves(*q.filler, *q2.filler)) return true;
    }
    return false;
  }

  bool regions_empty(const std::vector<RegionExpr>& rs) {
    std::optional<detail::Range> acc;
    for (const auto& r : rs) {
      auto range = detail::as_range(r);
      if (!range) continue;
      if (range->hi && range->lo > *range->hi) return true;
      if (!acc) {
        acc = range;
        continue;
      }
      if (acc->unit != range->unit) return true;
      acc->lo = std::max(acc->lo, range->lo);
      if (range->hi) acc->hi = acc->hi ? std::min(*acc->hi, *range->hi) : *range->hi;
      if (acc->hi && acc->lo > *acc->hi) return true;
    }
    for (const auto& r : rs) {
      const auto* vs = std::get_if<ValueSet>(&r);
      if (!vs) continue;
      bool any = false;
      for (const auto& lit : vs->values) {
        const DomainElement v = detail::literal_value(lit);
        bool ok = true;
        for (const auto& other : rs)
          if (!std::holds_alternative<NamedRegion>(other) && !region_contains(other, v)) ok = false;
        any = any || ok;
      }
      if (!any) return true;
    }
    return false;
  }

  bool region_pair_sub(const RegionExpr& a, const RegionExpr& b) {
    if (const auto* nb = std::get_if<NamedRegion>(&b)) {
      const auto* na = std::get_if<NamedRegion>(&a);
      return na && name_closure(na->name).count(nb->name);
    }
    if (std::holds_alternative<NamedRegion>(a)) return false;
    if (const auto* va = std::get_if<ValueSet>(&a)) {
      for (const auto& lit : va->values)
        if (!region_contains(b, detail::literal_value(lit))) return false;
      return true;
    }
    const auto ra = detail::as_range(a);
    if (const auto* vb = std::get_if<ValueSet>(&b)) {
      // Only a single point can sit inside a value set.
      return ra && ra->hi && ra->lo == *ra->hi && region_contains(b, detail::number_value(ra->lo, ra->unit));
    }
    const auto rb = detail::as_range(b);
    if (ra->unit != rb->unit) {
      if (std::holds_alternative<Interval>(a) && std::holds_alternative<Interval>(b)) unit_mismatch_ = true;
      return false;
    }
    return ra->lo >= rb->lo && (!rb->hi || (ra->hi && *ra->hi <= *rb->hi));
  }

  static bool demands_object(const Conjunct& c) { return c.is_object(); }

  /// c1 (saturated) inside c2.
  bool conj_sub(const Conjunct& c1, const Conjunct& c2) {
    Guard g(depth_);
    if (g.too_deep()) return false;
    if (c2.bottom) return false;
    if (demands_object(c2) && !c1.is_object()) return false;

    if (!c2.regions.empty()) {
      if (!c1.is_value()) return false;
      for (const auto& r2 : c2.regions)
        if (!region_sub(c1.regions, r2)) return false;
    }

    for (const auto& a : c2.atoms)
      if (!c1.atoms.count(a)) return false;

    if (c2.enums) {
      if (!c1.enums) return false;
      if (!std::includes(c2.enums->begin(), c2.enums->end(), c1.enums->begin(), c1.enums->end()))
        return false;
    }

    for (const auto& [s2, b2] : c2.projections) {
      bool found = false;
      for (const auto& [s1, b1] : c1.projections)
        if (s1 == s2 && proves(*b1, *b2)) {
          found = true;
          break;
        }
      if (!found) return false;
    }

    for (const auto& n2 : c2.negated) {
      bool excluded = false;
      for (const auto& n1 : c1.negated)
        if (proves(*n2, *n1)) {
          excluded = true;
          break;
        }
      if (!excluded && !n2->overflow) {
        excluded = true;
        for (const auto& part : n2->disjuncts) {
          bool of = false;
          if (!unsatisfiable(saturate(merge(c1, part, tbox_.max_dnf, of)))) {
            excluded = false;
            break;
          }
        }
      }
      if (!excluded) return false;
    }

    static const SlotRestriction kFree{};
    for (const auto& [name, r2] : c2.slots) {
      auto it = c1.slots.find(name);
      const SlotRestriction& r1 = it == c1.slots.end() ? kFree : it->second;
      if (!slot_sub(r1, r2)) return false;
    }
    return true;
  }

  bool slot_sub(const SlotRestriction& r1, const SlotRestriction& r2) {
    if (r2.total_min > 0) {
      bool ok = r1.total_min >= r2.total_min;
      for (const auto& q1 : r1.qualified) ok = ok || q1.min >= r2.total_min;
      if (!ok) return false;
    }
    if (r2.total_max && !(r1.total_max && *r1.total_max <= *r2.total_max)) return false;
    if (r2.only) {
      const bool none = r1.total_max && *r1.total_max == 0;
      if (!none && !(r1.only && proves(*r1.only, *r2.only))) return false;
    }
    for (const auto& q2 : r2.qualified) {
      if (q2.min > 0) {
        bool ok = r1.total_min >= q2.min && r1.only && proves(*r1.only, *q2.filler);
        for (const auto& q1 : r1.qualified) {
          if (ok) break;
          if (q1.min < q2.min) continue;
          ok = proves(*q1.filler, *q2.filler) || (r1.only && proves(meet(q1.filler, r1.only), *q2.filler));
        }
        if (!ok) return false;
      }
      if (q2.max) {
        bool ok = r1.total_max && *r1.total_max <= *q2.max;
        if (!ok && r1.only) ok = unsatisfiable(meet(q2.filler, r1.only));
        for (const auto& q1 : r1.qualified) {
          if (ok) break;
          if (!q1.max || *q1.max > *q2.max) continue;
          ok = proves(*q2.filler, *q1.filler) || (r1.only && proves(meet(q2.filler, r1.only), *q1.filler));
        }
        if (!ok) return false;
      }
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Counter-models

namespace detail {

/// Names, slots, regions and fillers a search for counter-models draws on.
struct Vocabulary {
  std::vector<std::string> atoms;
  std::vector<std::string> individuals;
  std::vector<std::string> slots;
  std::vector<std::string> region_names;
  std::vector<DomainElement> values;
  std::vector<DescRef> fillers;

  void collect(const Description& d) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Atom>) {
            if (x.name != kNothing && x.name != kAnything) add(atoms, x.name);
          } else if constexpr (std::is_same_v<T, Slot>) {
            add(slots, x.slot);
            fillers.push_back(x.filler);
            collect(*x.filler);
          } else if constexpr (std::is_same_v<T, Enumeration>) {
            for (const auto& m : x.members) add(individuals, m);
          } else if constexpr (std::is_same_v<T, Projection>) {
            add(slots, x.slot);
            collect(*x.base);
          } else if constexpr (std::is_same_v<T, Binary>) {
            collect(*x.lhs);
            collect(*x.rhs);
          } else {
            collect_region(x.expr);
          }
        },
        d.node);
  }

 private:
  static void add(std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  }

  void collect_region(const RegionExpr& r) {
    if (const auto* n = std::get_if<NamedRegion>(&r)) {
      add(region_names, n->name);
    } else if (const auto* vs = std::get_if<ValueSet>(&r)) {
      for (const auto& lit : vs->values) values.push_back(literal_value(lit));
    } else if (auto range = as_range(r)) {
      std::vector<Rational> points{range->lo, range->lo - 1};
      if (range->hi) {
        points.push_back(*range->hi);
        points.push_back(*range->hi + 1);
        points.push_back((range->lo + *range->hi) / 2);
      } else {
        points.push_back(range->lo + 1);
      }
      for (const auto& p : points) values.push_back(number_value(p, range->unit));
    }
  }
};

/// Builds a small model around one conjunct of the subsumee. Seed 0 gives
/// the canonical model; other seeds vary the free choices.
class CounterModelBuilder {
 public:
  CounterModelBuilder(const TBox& tbox, Reasoner& r, const Vocabulary& vocab, std::uint64_t seed,
                      bool extra)
      : tbox_(tbox), r_(r), vocab_(vocab), rng_(seed), random_(seed > 1), extra_(extra) {}

  Interpretation I;

  int build(const Conjunct& raw, int depth = 0) {
    Conjunct c = r_.saturate(raw);
    if (c.is_value()) return build_value(c);
    if (random_) c = decorate(c);

    int x = -1;
    if (c.enums && !c.enums->empty()) {
      x = individual(pick_from(*c.enums));
    } else if (random_ && !vocab_.individuals.empty() && chance(6)) {
      x = individual(pick_from(vocab_.individuals));
    } else {
      x = I.add_object("o" + std::to_string(I.domain.size()));
    }
    for (const auto& a : c.atoms) I.concepts[a] |= bit(static_cast<std::size_t>(x));
    if (depth > 3) return x;

    for (const auto& [slot, r] : c.slots) {
      unsigned made = 0;
      for (const auto& q : r.qualified) {
        if (q.min == 0) continue;
        const NormalForm target = r.only ? nf_and(*q.filler, *r.only, tbox_.max_dnf) : *q.filler;
        const auto pick = satisfiable_disjunct(target);
        if (!pick) continue;
        for (unsigned k = 0; k < std::min(q.min, 4u); ++k, ++made) I.relate(slot, x, build(*pick, depth + 1));
      }
      while (made < r.total_min) {
        I.relate(slot, x, successor(r, depth));
        ++made;
      }
      unsigned extra = extra_ ? 1 : 0;
      if (random_) extra = static_cast<unsigned>(uniform(3));
      for (unsigned k = 0; k < extra && (!r.total_max || made < *r.total_max); ++k, ++made)
        I.relate(slot, x, successor(r, depth));
    }
    if (random_) {
      for (const auto& slot : vocab_.slots) {
        if (c.slots.count(slot) || !chance(3)) continue;
        for (std::size_t k = 0, n = 1 + uniform(3); k < n; ++k) I.relate(slot, x, successor(SlotRestriction{}, depth));
      }
    }
    for (const auto& [slot, base] : c.projections) {
      const auto pick = satisfiable_disjunct(*base);
      if (!pick) continue;
      I.relate(slot, build(*pick, depth + 1), x);
    }
    return x;
  }

 private:
  const TBox& tbox_;
  Reasoner& r_;
  const Vocabulary& vocab_;
  std::mt19937_64 rng_;
  bool random_;
  bool extra_;

  std::size_t uniform(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(std::size_t one_in) { return uniform(one_in) == 0; }

  template <typename C>
  const std::string& pick_from(const C& items) {
    if (!random_) return *items.begin();
    auto it = items.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(uniform(items.size())));
    return *it;
  }

  int individual(const std::string& name) {
    auto it = I.individuals.find(name);
    if (it != I.individuals.end()) return it->second;
    const int x = I.add_object(name);
    I.individuals[name] = x;
    return x;
  }

  // Adds some vocabulary atoms, keeping the conjunct satisfiable.
  Conjunct decorate(const Conjunct& c) {
    Conjunct out = c;
    bool changed = false;
    for (const auto& a : vocab_.atoms)
      if (chance(3)) changed = out.atoms.insert(a).second || changed;
    if (!changed) return c;
    out = r_.saturate(out);
    return r_.unsatisfiable(out) ? c : out;
  }

  std::optional<Conjunct> satisfiable_disjunct(const NormalForm& n) {
    if (n.overflow) return std::nullopt;
    std::vector<Conjunct> ok;
    for (const auto& c : n.disjuncts) {
      Conjunct s = r_.saturate(c);
      if (!r_.unsatisfiable(s)) ok.push_back(std::move(s));
    }
    if (ok.empty()) return std::nullopt;
    return random_ ? ok[uniform(ok.size())] : ok.front();
  }

  int successor(const SlotRestriction& r, int depth) {
    std::optional<Conjunct> base;
    if (r.only) base = satisfiable_disjunct(*r.only);
    if (random_ && !vocab_.fillers.empty() && !chance(3)) {
      const NormalForm f = translate(*vocab_.fillers[uniform(vocab_.fillers.size())], tbox_.max_dnf);
      const NormalForm both = base ? nf_and(f, nf_of(*base), tbox_.max_dnf) : f;
      if (auto pick = satisfiable_disjunct(both)) base = pick;
    }
    if (base) return build(*base, depth + 1);
    return I.add_object("o" + std::to_string(I.domain.size()));
  }

  int build_value(const Conjunct& c) {
    std::vector<DomainElement> candidates;
    for (const auto& r : c.regions) {
      if (const auto* vs = std::get_if<ValueSet>(&r))
        for (const auto& lit : vs->values) candidates.push_back(literal_value(lit));
      if (auto range = as_range(r)) {
        Rational lo = range->lo;
        for (const auto& other : c.regions)
          if (auto o = as_range(other); o && o->unit == range->unit) lo = std::max(lo, o->lo);
        candidates.push_back(number_value(lo, range->unit));
      }
    }
    if (random_) candidates.insert(candidates.begin(), vocab_.values.begin(), vocab_.values.end());

    std::vector<DomainElement> fitting;
    for (const auto& v : candidates) {
      bool ok = true;
      for (const auto& r : c.regions)
        if (!std::holds_alternative<NamedRegion>(r) && !region_contains(r, v)) ok = false;
      if (ok) fitting.push_back(v);
    }
    DomainElement chosen;
    chosen.is_value = true;
    chosen.symbol = "v" + std::to_string(I.domain.size());
    if (!fitting.empty()) chosen = random_ ? fitting[uniform(fitting.size())] : fitting.front();

    const int x = chosen.number ? I.add_number(*chosen.number, chosen.unit) : I.add_symbol(chosen.symbol);
    const Mask m = bit(static_cast<std::size_t>(x));
    for (const auto& r : c.regions)
      if (const auto* n = std::get_if<NamedRegion>(&r))
        for (const auto& name : r_.name_closure(n->name)) I.named_regions[name] |= m;
    if (random_)
      for (const auto& name : vocab_.region_names)
        if (chance(3))
          for (const auto& up : r_.name_closure(name)) I.named_regions[up] |= m;
    return x;
  }
};

inline void collect_units(const Description& d, std::set<std::string>& units) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Slot>) {
          collect_units(*x.filler, units);
        } else if constexpr (std::is_same_v<T, Projection>) {
          collect_units(*x.base, units);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_units(*x.lhs, units);
          collect_units(*x.rhs, units);
        } else if constexpr (std::is_same_v<T, Region>) {
          if (const auto* i = std::get_if<Interval>(&x.expr)) units.insert(i->unit);
        }
      },
      d.node);
}

}  // namespace detail

inline constexpr int kCounterModelAttempts = 256;

/// Searches for a small model with an element in T(d1) but not T(d2).
inline std::optional<std::pair<Interpretation, int>> find_counter_model(const TBox& tbox,
                                                                        const Description& d1,
                                                                        const Description& d2) {
  Reasoner r(tbox);
  const NormalForm n1 = translate(d1, tbox.max_dnf);
  if (n1.overflow) return std::nullopt;
  detail::Vocabulary vocab;
  vocab.collect(d1);
  vocab.collect(d2);
  for (const auto& [l, rhs] : tbox.axioms) {
    vocab.collect(*l);
    vocab.collect(*rhs);
  }

  std::vector<Conjunct> roots;
  for (const auto& c : n1.disjuncts) {
    Conjunct s = r.saturate(c);
    if (!r.unsatisfiable(s)) roots.push_back(std::move(s));
  }
  if (roots.empty()) return std::nullopt;

  for (int attempt = 0; attempt < kCounterModelAttempts; ++attempt) {
    const auto seed = static_cast<std::uint64_t>(attempt);
    const Conjunct& root_conj = roots[static_cast<std::size_t>(attempt) % roots.size()];
    try {
      detail::CounterModelBuilder b(tbox, r, vocab, seed, attempt % 2 == 1);
      const int root = b.build(root_conj);
      if (!tbox.holds_in(b.I)) continue;
      if (b.I.member(d1, root) && !b.I.member(d2, root)) return std::make_pair(std::move(b.I), root);
    } catch (const std::length_error&) {
      continue;
    }
  }
  return std::nullopt;
}

/// Does T(d1) lie inside T(d2) in every interpretation satisfying the axioms?
inline Verdict3 subsumes(const TBox& tbox, const Description& d1, const Description& d2) {
  const NormalForm n1 = translate(d1, tbox.max_dnf);
  const NormalForm n2 = translate(d2, tbox.max_dnf);
  if (n1.overflow || n2.overflow)
    return Verdict3::unknown("normal form exceeds " + std::to_string(tbox.max_dnf) + " disjuncts");
  Reasoner r(tbox);
  if (r.proves(n1, n2)) return Verdict3::proved("structural");
  std::set<std::string> units;
  detail::collect_units(d1, units);
  detail::collect_units(d2, units);
  if (r.saw_unit_mismatch() || units.size() > 1)
    return Verdict3::unknown("interval units differ and no conversion is known");
  if (auto cm = find_counter_model(tbox, d1, d2))
    return Verdict3::disproved(std::move(cm->first), cm->second, "counter-model");
  return Verdict3::unknown("no structural proof and no counter-model found");
}

inline Verdict3 subsumes(const ModelStore& m, const Description& d1, const Description& d2,
                         std::size_t cap = kDefaultMaxDnf) {
  return subsumes(make_tbox(m, cap), d1, d2);
}

// ---------------------------------------------------------------------------
// Entailment between elements

/// Same QGC up to the pct chain: holds when every step keeps at least as
/// large a share (a missing step counts as 100%).
inline Verdict3 pct_entails(const QualityForm& q1, const QualityForm& q2) {
  QualityForm a = q1;
  QualityForm b = q2;
  a.pct_chain.clear();
  b.pct_chain.clear();
  if (!(a == b)) return Verdict3::unknown("the quality forms differ beyond their pct chains");
  const std::size_t n = std::max(q1.pct_chain.size(), q2.pct_chain.size());
  for (std::size_t i = 0; i < n; ++i) {
    const PctEntry* e1 = i < q1.pct_chain.size() ? &q1.pct_chain[i] : nullptr;
    const PctEntry* e2 = i < q2.pct_chain.size() ? &q2.pct_chain[i] : nullptr;
    if (e1 && e2 && e1->path != e2->path) return Verdict3::unknown("pct steps quantify different paths");
    const Rational p1 = e1 ? e1->pct : Rational(1);
    const Rational p2 = e2 ? e2->pct : Rational(1);
    if (p1 < p2)
      return Verdict3::unknown("step " + std::to_string(i + 1) + " keeps " + render_percent(p1) +
                               " but " + render_percent(p2) + " is required");
  }
  return Verdict3::proved("pct monotonicity");
}

namespace detail {

inline bool reaches(const std::vector<std::pair<std::string, std::string>>& edges,
                    const std::string& from, const std::string& to) {
  std::set<std::string> seen{from};
  std::vector<std::string> todo{from};
  while (!todo.empty()) {
    const std::string cur = todo.back();
    todo.pop_back();
    if (cur == to) return true;
    for (const auto& [child, parent] : edges)
      if (child == cur && seen.insert(parent).second) todo.push_back(parent);
  }
  return false;
}

// Name of a subject written as an atom or a one-member enumeration.
inline std::optional<std::string> subject_name(const Description& d) {
  if (const auto* a = d.as<Atom>()) return a->name;
  if (const auto* e = d.as<Enumeration>(); e && e->members.size() == 1) return e->members.front();
  return std::nullopt;
}

}  // namespace detail

/// Every solution satisfying q1 also satisfies q2.
inline Verdict3 quality_entails(const ModelStore& m, const TBox& tbox, const QualityForm& q1,
                                const QualityForm& q2) {
  if (auto v = pct_entails(q1, q2); v.is_proved()) return v;
  Reasoner r(tbox);
  const bool quality_ok = q1.quality == q2.quality || r.name_closure(q2.quality).count(q1.quality) ||
                          detail::reaches(m.dimension_of, q2.quality, q1.quality);
  if (!quality_ok) return Verdict3::unknown(q2.quality + " is not known to specialize " + q1.quality);

  bool subject_ok = subsumes(tbox, *q2.subject, *q1.subject).is_proved();
  if (!subject_ok) {
    auto s1 = detail::subject_name(*q1.subject);
    auto s2 = detail::subject_name(*q2.subject);
    subject_ok = s1 && s2 && detail::reaches(m.part_of, *s2, *s1);
  }
  if (!subject_ok) return Verdict3::unknown("subjects are not known to be related");

  if (!r.region_sub({q1.region}, q2.region)) return Verdict3::unknown("region is not contained");
  if (!same(q1.observer, q2.observer)) return Verdict3::unknown("observers differ");

  const std::size_t n = std::max(q1.pct_chain.size(), q2.pct_chain.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Rational p1 = i < q1.pct_chain.size() ? q1.pct_chain[i].pct : Rational(1);
    const Rational p2 = i < q2.pct_chain.size() ? q2.pct_chain[i].pct : Rational(1);
    if (i < q1.pct_chain.size() && i < q2.pct_chain.size() &&
        q1.pct_chain[i].path != q2.pct_chain[i].path)
      return Verdict3::unknown("pct steps quantify different paths");
    if (p1 < p2) return Verdict3::unknown("pct chain is weaker");
  }
  return Verdict3::proved("quality entailment");
}

/// Body of e1 entails body of e2 under the model's axioms (plus `extra`).
inline Verdict3 entails(const ModelStore& m, const Element& e1, const Element& e2,
                        std::size_t cap = kDefaultMaxDnf,
                        const std::vector<SubsumptionForm>& extra = {}) {
  TBox tbox = make_tbox(m, cap);
  for (const auto& ax : extra) tbox.add_axiom(ax.lhs, ax.rhs);

  if (std::holds_alternative<NLText>(e1.body) || std::holds_alternative<NLText>(e2.body))
    return Verdict3::unknown("natural-language bodies are opaque");

  const auto* q1 = std::get_if<QualityForm>(&e1.body);
  const auto* q2 = std::get_if<QualityForm>(&e2.body);
  if (q1 && q2) return quality_entails(m, tbox, *q1, *q2);
  if (q1 || q2) return Verdict3::unknown("a quality form is compared with another form");

  const auto* f1 = std::get_if<SubsumptionForm>(&e1.body);
  const auto* f2 = std::get_if<SubsumptionForm>(&e2.body);
  if (f1 && f2) {
    Reasoner r(tbox);
    if (r.proves(*f2->lhs, *f1->lhs) && r.proves(*f1->rhs, *f2->rhs))
      return Verdict3::proved("narrower subject, stronger property");
    TBox with(tbox);
    with.add_axiom(f1->lhs, f1->rhs);
    Reasoner r2(with);
    if (r2.proves(*f2->lhs, *f2->rhs)) return Verdict3::proved("follows with the premise as an axiom");
    if (auto cm = find_counter_model(with, *f2->lhs, *f2->rhs))
      return Verdict3::disproved(std::move(cm->first), cm->second, "premise holds, conclusion fails");
    return Verdict3::unknown("no structural proof");
  }
  if (f1 || f2) return Verdict3::unknown("a subsumption form is compared with a description");

  const DescRef d1 = element_description(e1);
  const DescRef d2 = element_description(e2);
  if (!d1 || !d2) return Verdict3::unknown("bodies are not comparable");
  return subsumes(tbox, *d1, *d2);
}

}  // namespace desiree
