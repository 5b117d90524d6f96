#pragma once

#include "desiree/description.hpp"
#include "desiree/interpretation.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace desiree {

/// Brute-force check of T(d1) ⊆ T(d2) over every interpretation with up to
/// `max_domain` objects plus a fixed grid of values.
struct OracleOptions {
  int max_domain = 3;
  std::vector<DomainElement> grid;  // values; empty means derive from the regions
  unsigned bit_budget = 18;         // largest enumeration is 2^bit_budget interpretations
};

struct OracleResult {
  enum class Kind { HoldsInAll, Counterexample, BoundsExceeded };
  Kind kind = Kind::BoundsExceeded;
  int domain_size = 0;  // largest object count enumerated
  std::uint64_t interpretations = 0;
  std::optional<Interpretation> witness;
  int root = -1;

  bool holds() const { return kind == Kind::HoldsInAll; }
};

namespace oracle_detail {

enum class Op { Atom, Top, Bottom, Enum, Slot, Proj, And, Or, Diff, FixedRegion, NamedRegion };

struct Node {
  Op op = Op::Bottom;
  int a = -1;  // child
  int b = -1;  // second child
  int index = -1;  // atom, slot or named region index
  CardModifier modifier;
  Mask fixed = 0;  // Enum / FixedRegion extension
};

struct Vocab {
  std::vector<std::string> atoms, slots, individuals, named;
  std::vector<RegionExpr> regions;

  static int find_or_add(std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it != v.end()) return static_cast<int>(it - v.begin());
    v.push_back(s);
    return static_cast<int>(v.size() - 1);
  }

  void scan(const Description& d) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Atom>) {
            if (x.name != kNothing && x.name != kAnything) find_or_add(atoms, x.name);
          } else if constexpr (std::is_same_v<T, Slot>) {
            find_or_add(slots, x.slot);
            scan(*x.filler);
          } else if constexpr (std::is_same_v<T, Enumeration>) {
            for (const auto& m : x.members) find_or_add(individuals, m);
          } else if constexpr (std::is_same_v<T, Projection>) {
            find_or_add(slots, x.slot);
            scan(*x.base);
          } else if constexpr (std::is_same_v<T, Binary>) {
            scan(*x.lhs);
            scan(*x.rhs);
          } else {
            if (const auto* n = std::get_if<NamedRegion>(&x.expr)) {
              find_or_add(named, n->name);
            } else {
              regions.push_back(x.expr);
            }
          }
        },
        d.node);
  }
};

// Grid points: every bound, the points just outside each bound, midpoints
// and value-set members.
inline std::vector<DomainElement> derive_grid(const std::vector<RegionExpr>& regions) {
  std::vector<DomainElement> out;
  auto add = [&](DomainElement v) {
    for (const auto& e : out)
      if (e.number == v.number && e.unit == v.unit && e.symbol == v.symbol) return;
    out.push_back(std::move(v));
  };
  auto number = [](Rational n, const std::string& unit) {
    DomainElement v;
    v.is_value = true;
    v.number = n;
    v.unit = unit;
    return v;
  };
  for (const auto& r : regions) {
    if (const auto* vs = std::get_if<ValueSet>(&r)) {
      for (const auto& lit : vs->values) {
        DomainElement v;
        v.is_value = true;
        if (const auto* n = std::get_if<Rational>(&lit)) {
          v.number = *n;
        } else {
          v.symbol = std::get<std::string>(lit);
        }
        add(v);
      }
      continue;
    }
    std::string unit;
    Rational lo;
    std::optional<Rational> hi;
    if (const auto* i = std::get_if<Interval>(&r)) {
      unit = i->unit;
      lo = i->lo;
      hi = i->hi;
    } else if (const auto* p = std::get_if<PercentRange>(&r)) {
      unit = std::string(kPercentUnit);
      lo = p->lo;
      hi = p->hi;
    } else {
      continue;
    }
    add(number(lo, unit));
    add(number(lo - 1, unit));
    if (hi) {
      add(number(*hi, unit));
      add(number(*hi + 1, unit));
    } else {
      add(number(lo + 1, unit));
    }
  }
  return out;
}

class Compiled {
 public:
  std::vector<Node> nodes;

  Compiled(const Vocab& v, int objects, const std::vector<DomainElement>& grid)
      : v_(v), objects_(objects), grid_(grid) {}

  int compile(const Description& d) {
    Node n;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Atom>) {
            if (x.name == kNothing) {
              n.op = Op::Bottom;
            } else if (x.name == kAnything) {
              n.op = Op::Top;
            } else {
              n.op = Op::Atom;
              n.index = index_of(v_.atoms, x.name);
            }
          } else if constexpr (std::is_same_v<T, Slot>) {
            n.op = Op::Slot;
            n.a = compile(*x.filler);
            n.index = index_of(v_.slots, x.slot);
            n.modifier = x.modifier;
          } else if constexpr (std::is_same_v<T, Enumeration>) {
            n.op = Op::Enum;
            for (const auto& m : x.members) n.fixed |= bit(static_cast<std::size_t>(index_of(v_.individuals, m)));
          } else if constexpr (std::is_same_v<T, Projection>) {
            n.op = Op::Proj;
            n.a = compile(*x.base);
            n.index = index_of(v_.slots, x.slot);
          } else if constexpr (std::is_same_v<T, Binary>) {
            n.a = compile(*x.lhs);
            n.b = compile(*x.rhs);
            n.op = x.op == BinaryOp::And ? Op::And : x.op == BinaryOp::Or ? Op::Or : Op::Diff;
          } else {
            if (const auto* nr = std::get_if<NamedRegion>(&x.expr)) {
              n.op = Op::NamedRegion;
              n.index = index_of(v_.named, nr->name);
            } else {
              n.op = Op::FixedRegion;
              for (std::size_t i = 0; i < grid_.size(); ++i)
                if (region_contains(x.expr, grid_[i])) n.fixed |= bit(static_cast<std::size_t>(objects_) + i);
            }
          }
        },
        d.node);
    nodes.push_back(n);
    return static_cast<int>(nodes.size() - 1);
  }

 private:
  const Vocab& v_;
  int objects_;
  const std::vector<DomainElement>& grid_;

  static int index_of(const std::vector<std::string>& v, const std::string& s) {
    return static_cast<int>(std::find(v.begin(), v.end(), s) - v.begin());
  }
};

// One interpretation decoded from an enumeration counter.
struct State {
  int objects = 0;
  Mask object_mask = 0;
  std::vector<Mask> atoms;                // per atom
  std::vector<std::vector<Mask>> succ;    // per slot, per object
  std::vector<Mask> named;                // per named region
};

inline void eval_all(const std::vector<Node>& nodes, const State& s, std::vector<Mask>& out) {
  out.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    Mask m = 0;
    switch (n.op) {
      case Op::Atom: m = s.atoms[static_cast<std::size_t>(n.index)]; break;
      case Op::Top: m = s.object_mask; break;
      case Op::Bottom: m = 0; break;
      case Op::Enum:
      case Op::FixedRegion: m = n.fixed; break;
      case Op::NamedRegion: m = s.named[static_cast<std::size_t>(n.index)]; break;
      case Op::And: m = out[static_cast<std::size_t>(n.a)] & out[static_cast<std::size_t>(n.b)]; break;
      case Op::Or: m = out[static_cast<std::size_t>(n.a)] | out[static_cast<std::size_t>(n.b)]; break;
      case Op::Diff: m = out[static_cast<std::size_t>(n.a)] & ~out[static_cast<std::size_t>(n.b)]; break;
      case Op::Proj: {
        const Mask base = out[static_cast<std::size_t>(n.a)];
        const auto& succ = s.succ[static_cast<std::size_t>(n.index)];
        for (int x = 0; x < s.objects; ++x)
          if (base & bit(static_cast<std::size_t>(x))) m |= succ[static_cast<std::size_t>(x)];
        break;
      }
      case Op::Slot: {
        const Mask filler = out[static_cast<std::size_t>(n.a)];
        const auto& succ = s.succ[static_cast<std::size_t>(n.index)];
        const int k = static_cast<int>(n.modifier.n);
        for (int x = 0; x < s.objects; ++x) {
          const Mask all = succ[static_cast<std::size_t>(x)];
          const int inside = std::popcount(all & filler);
          bool ok = false;
          switch (n.modifier.kind) {
            case CardModifier::Kind::ExactlyOne: ok = std::popcount(all) == 1 && inside == 1; break;
            case CardModifier::Kind::AtMost: ok = inside <= k; break;
            case CardModifier::Kind::AtLeast: ok = inside >= k; break;
            case CardModifier::Kind::Exactly: ok = inside == k; break;
            case CardModifier::Kind::Some: ok = inside >= 1; break;
            case CardModifier::Kind::Only: ok = all == (all & filler); break;
          }
          if (ok) m |= bit(static_cast<std::size_t>(x));
        }
        break;
      }
    }
    out[i] = m;
  }
}

inline Interpretation to_interpretation(const Vocab& v, const State& s, const std::vector<DomainElement>& grid) {
  Interpretation I;
  for (int x = 0; x < s.objects; ++x) {
    const std::size_t ux = static_cast<std::size_t>(x);
    I.add_object(ux < v.individuals.size() ? v.individuals[ux] : "o" + std::to_string(x));
  }
  for (const auto& g : grid) {
    if (g.number) {
      I.add_number(*g.number, g.unit);
    } else {
      I.add_symbol(g.symbol);
    }
  }
  for (std::size_t i = 0; i < v.individuals.size(); ++i) I.individuals[v.individuals[i]] = static_cast<int>(i);
  for (std::size_t a = 0; a < v.atoms.size(); ++a) I.concepts[v.atoms[a]] = s.atoms[a];
  for (std::size_t r = 0; r < v.slots.size(); ++r)
    for (int x = 0; x < s.objects; ++x)
      for (std::size_t y = 0; y < I.domain.size(); ++y)
        if (s.succ[r][static_cast<std::size_t>(x)] & bit(y)) I.relate(v.slots[r], x, static_cast<int>(y));
  for (std::size_t r = 0; r < v.named.size(); ++r) I.named_regions[v.named[r]] = s.named[r];
  return I;
}

}  // namespace oracle_detail

/// Exhaustive enumeration. Individuals take the first objects (each a distinct
/// element); slots relate objects to any element.
inline OracleResult oracle_subsumes(const Description& d1, const Description& d2,
                                    const std::vector<std::pair<DescRef, DescRef>>& axioms = {},
                                    const std::vector<std::pair<DescRef, DescRef>>& disjoint = {},
                                    const OracleOptions& options = {}) {
  using namespace oracle_detail;
  Vocab v;
  v.scan(d1);
  v.scan(d2);
  for (const auto& [l, r] : axioms) {
    v.scan(*l);
    v.scan(*r);
  }
  for (const auto& [l, r] : disjoint) {
    v.scan(*l);
    v.scan(*r);
  }
  const std::vector<DomainElement> grid = options.grid.empty() ? derive_grid(v.regions) : options.grid;
  const int values = static_cast<int>(grid.size());
  const int min_objects = std::max<int>(1, static_cast<int>(v.individuals.size()));

  auto bits_for = [&](int k) {
    return static_cast<std::uint64_t>(v.atoms.size()) * static_cast<std::uint64_t>(k) +
           static_cast<std::uint64_t>(v.slots.size()) * static_cast<std::uint64_t>(k) *
               static_cast<std::uint64_t>(k + values) +
           static_cast<std::uint64_t>(v.named.size()) * static_cast<std::uint64_t>(values);
  };

  OracleResult result;
  int largest = 0;
  for (int k = min_objects; k <= std::max(min_objects, options.max_domain); ++k)
    if (bits_for(k) <= options.bit_budget && k + values <= static_cast<int>(kMaxDomain)) largest = k;
  if (largest == 0) return result;

  for (int k = min_objects; k <= largest; ++k) {
    Compiled c(v, k, grid);
    const int n1 = c.compile(d1);
    const int n2 = c.compile(d2);
    std::vector<std::pair<int, int>> subs, disj;
    for (const auto& [l, r] : axioms) subs.emplace_back(c.compile(*l), c.compile(*r));
    for (const auto& [l, r] : disjoint) disj.emplace_back(c.compile(*l), c.compile(*r));

    State s;
    s.objects = k;
    s.object_mask = bit(static_cast<std::size_t>(k)) - 1;
    s.atoms.assign(v.atoms.size(), 0);
    s.succ.assign(v.slots.size(), std::vector<Mask>(static_cast<std::size_t>(k), 0));
    s.named.assign(v.named.size(), 0);

    const unsigned obj_bits = static_cast<unsigned>(k);
    const unsigned row_bits = static_cast<unsigned>(k + values);
    const unsigned bits = static_cast<unsigned>(bits_for(k));
    std::vector<Mask> out;
    for (std::uint64_t counter = 0; counter < (std::uint64_t{1} << bits); ++counter) {
      std::uint64_t rest = counter;
      auto take = [&rest](unsigned n) {
        const Mask m = rest & ((Mask{1} << n) - 1);
        rest >>= n;
        return m;
      };
      for (auto& a : s.atoms) a = take(obj_bits);
      for (auto& rows : s.succ)
        for (auto& row : rows) row = take(row_bits);
      for (auto& nr : s.named) nr = take(static_cast<unsigned>(values)) << obj_bits;

      eval_all(c.nodes, s, out);
      ++result.interpretations;
      bool model = true;
      for (const auto& [l, r] : subs)
        if (out[static_cast<std::size_t>(l)] & ~out[static_cast<std::size_t>(r)]) model = false;
      for (const auto& [l, r] : disj)
        if (out[static_cast<std::size_t>(l)] & out[static_cast<std::size_t>(r)]) model = false;
      if (!model) continue;
      const Mask bad = out[static_cast<std::size_t>(n1)] & ~out[static_cast<std::size_t>(n2)];
      if (bad) {
        result.kind = OracleResult::Kind::Counterexample;
        result.domain_size = k;
        result.witness = to_interpretation(v, s, grid);
        result.root = std::countr_zero(bad);
        return result;
      }
    }
  }
  result.kind = OracleResult::Kind::HoldsInAll;
  result.domain_size = largest;
  return result;
}

}  // namespace desiree
