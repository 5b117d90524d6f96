#pragma once

#include "desiree/description.hpp"

#include "json.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace desiree {

using Mask = std::uint64_t;
inline constexpr std::size_t kMaxDomain = 64;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

struct DomainElement {
  bool is_value = false;
  std::optional<Rational> number;  // numeric values
  std::string unit;                // numeric values; "%" for percentages
  std::string symbol;              // symbolic values
  std::string label;
};

// Named regions have no fixed extension; they are looked up per interpretation.
inline bool region_contains(const RegionExpr& r, const DomainElement& v) {
  if (!v.is_value) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NamedRegion>) {
          return false;
        } else if constexpr (std::is_same_v<T, Interval>) {
          return v.number && v.unit == x.unit && *v.number >= x.lo && (!x.hi || *v.number <= *x.hi);
        } else if constexpr (std::is_same_v<T, ValueSet>) {
          for (const auto& lit : x.values) {
            if (const auto* n = std::get_if<Rational>(&lit)) {
              if (v.number && v.unit.empty() && *v.number == *n) return true;
            } else if (!v.number && v.symbol == std::get<std::string>(lit)) {
              return true;
            }
          }
          return false;
        } else {
          return v.number && v.unit == kPercentUnit && *v.number >= x.lo && *v.number <= x.hi;
        }
      },
      r);
}

/// A finite interpretation: objects and values, concept and region
/// extensions, individuals, and slot relations.
struct Interpretation {
  std::vector<DomainElement> domain;
  std::map<std::string, Mask> concepts;
  std::map<std::string, int> individuals;
  std::map<std::string, std::vector<Mask>> roles;  // successors per element
  std::map<std::string, Mask> named_regions;

  int add_object(std::string label) {
    DomainElement e;
    e.label = std::move(label);
    return push(std::move(e));
  }
  int add_number(Rational n, std::string unit) {
    DomainElement e;
    e.is_value = true;
    e.number = n;
    e.unit = std::move(unit);
    e.label = format_rational(n) + (e.unit.empty() ? "" : " " + e.unit);
    return push(std::move(e));
  }
  int add_symbol(std::string s) {
    DomainElement e;
    e.is_value = true;
    e.symbol = s;
    e.label = std::move(s);
    return push(std::move(e));
  }

  void relate(const std::string& slot, int from, int to) {
    auto& succ = roles[slot];
    succ.resize(domain.size(), 0);
    succ[static_cast<std::size_t>(from)] |= bit(static_cast<std::size_t>(to));
  }

  Mask all() const { return domain.size() == kMaxDomain ? ~Mask{0} : bit(domain.size()) - 1; }
  Mask objects() const {
    Mask m = 0;
    for (std::size_t i = 0; i < domain.size(); ++i)
      if (!domain[i].is_value) m |= bit(i);
    return m;
  }
  Mask values() const { return all() & ~objects(); }

  Mask successors(const std::string& slot, std::size_t x) const {
    auto it = roles.find(slot);
    if (it == roles.end() || x >= it->second.size()) return 0;
    return it->second[x];
  }

  Mask concept_mask(const std::string& name) const {
    if (name == kNothing) return 0;
    if (name == kAnything) return objects();
    auto it = concepts.find(name);
    return it == concepts.end() ? 0 : it->second & objects();
  }

  Mask region_mask(const RegionExpr& r) const {
    if (const auto* n = std::get_if<NamedRegion>(&r)) {
      auto it = named_regions.find(n->name);
      return it == named_regions.end() ? 0 : it->second & values();
    }
    Mask m = 0;
    for (std::size_t i = 0; i < domain.size(); ++i)
      if (region_contains(r, domain[i])) m |= bit(i);
    return m;
  }

  /// T(d) per the set-theoretic semantics of descriptions.
  Mask eval(const Description& d) const {
    return std::visit(
        [this](const auto& x) -> Mask {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Atom>) {
            return concept_mask(x.name);
          } else if constexpr (std::is_same_v<T, Slot>) {
            const Mask filler = eval(*x.filler);
            const Mask objs = objects();
            Mask out = 0;
            for (std::size_t i = 0; i < domain.size(); ++i) {
              if (!(objs & bit(i))) continue;
              const Mask succ = successors(x.slot, i);
              const int in = std::popcount(succ & filler);
              const unsigned n = x.modifier.n;
              bool ok = false;
              switch (x.modifier.kind) {
                case CardModifier::Kind::ExactlyOne:
                  ok = std::popcount(succ) == 1 && (succ & ~filler) == 0;
                  break;
                case CardModifier::Kind::AtMost: ok = static_cast<unsigned>(in) <= n; break;
                case CardModifier::Kind::AtLeast: ok = static_cast<unsigned>(in) >= n; break;
                case CardModifier::Kind::Exactly: ok = static_cast<unsigned>(in) == n; break;
                case CardModifier::Kind::Some: ok = in >= 1; break;
                case CardModifier::Kind::Only: ok = (succ & ~filler) == 0; break;
              }
              if (ok) out |= bit(i);
            }
            return out;
          } else if constexpr (std::is_same_v<T, Enumeration>) {
            Mask m = 0;
            for (const auto& name : x.members) {
              auto it = individuals.find(name);
              if (it != individuals.end()) m |= bit(static_cast<std::size_t>(it->second));
            }
            return m;
          } else if constexpr (std::is_same_v<T, Projection>) {
            const Mask base = eval(*x.base);
            Mask m = 0;
            for (std::size_t i = 0; i < domain.size(); ++i)
              if (base & bit(i)) m |= successors(x.slot, i);
            return m;
          } else if constexpr (std::is_same_v<T, Binary>) {
            const Mask l = eval(*x.lhs);
            const Mask r = eval(*x.rhs);
            switch (x.op) {
              case BinaryOp::And: return l & r;
              case BinaryOp::Or: return l | r;
              case BinaryOp::Diff: return l & ~r;
            }
            return 0;
          } else {
            return region_mask(x.expr);
          }
        },
        d.node);
  }

  bool member(const Description& d, int x) const {
    return (eval(d) & bit(static_cast<std::size_t>(x))) != 0;
  }

  /// T(lhs) is a subset of T(rhs).
  bool satisfies(const Description& lhs, const Description& rhs) const {
    return (eval(lhs) & ~eval(rhs)) == 0;
  }

  nlohmann::json to_json() const {
    using nlohmann::json;
    json out;
    json dom = json::array();
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const auto& e = domain[i];
      json je{{"id", i}, {"label", e.label}, {"kind", e.is_value ? "value" : "object"}};
      if (e.number) {
        je["number"] = format_rational(*e.number);
        if (!e.unit.empty()) je["unit"] = e.unit;
      } else if (e.is_value) {
        je["symbol"] = e.symbol;
      }
      dom.push_back(je);
    }
    out["domain"] = dom;
    auto members = [](Mask m) {
      json a = json::array();
      for (std::size_t i = 0; i < 64; ++i)
        if (m & bit(i)) a.push_back(i);
      return a;
    };
    out["concepts"] = json::object();
    for (const auto& [name, m] : concepts) out["concepts"][name] = members(m);
    out["individuals"] = json::object();
    for (const auto& [name, i] : individuals) out["individuals"][name] = i;
    out["roles"] = json::object();
    for (const auto& [slot, succ] : roles) {
      json pairs = json::array();
      for (std::size_t i = 0; i < succ.size(); ++i)
        for (std::size_t j = 0; j < 64; ++j)
          if (succ[i] & bit(j)) pairs.push_back(json::array({i, j}));
      out["roles"][slot] = pairs;
    }
    out["regions"] = json::object();
    for (const auto& [name, m] : named_regions) out["regions"][name] = members(m);
    return out;
  }

  static Interpretation from_json(const nlohmann::json& j) {
    Interpretation I;
    for (const auto& je : j.at("domain")) {
      DomainElement e;
      e.label = je.value("label", "");
      e.is_value = je.at("kind") == "value";
      if (je.contains("number")) {
        e.number = *parse_rational_text(je.at("number").get<std::string>());
        e.unit = je.value("unit", "");
      }
      if (je.contains("symbol")) e.symbol = je.at("symbol").get<std::string>();
      I.push(std::move(e));
    }
    for (const auto& [name, ids] : j.at("concepts").items())
      for (const auto& i : ids) I.concepts[name] |= bit(i.get<std::size_t>());
    for (const auto& [name, i] : j.at("individuals").items()) I.individuals[name] = i.get<int>();
    for (const auto& [slot, pairs] : j.at("roles").items())
      for (const auto& p : pairs) I.relate(slot, p.at(0).get<int>(), p.at(1).get<int>());
    for (const auto& [name, ids] : j.at("regions").items())
      for (const auto& i : ids) I.named_regions[name] |= bit(i.get<std::size_t>());
    return I;
  }

 private:
  int push(DomainElement e) {
    if (domain.size() >= kMaxDomain) throw std::length_error("interpretation domain is full");
    domain.push_back(std::move(e));
    for (auto& [slot, succ] : roles) succ.resize(domain.size(), 0);
    return static_cast<int>(domain.size() - 1);
  }

  static std::optional<Rational> parse_rational_text(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    auto num = parse_decimal(s.substr(0, slash));
    auto den = parse_decimal(s.substr(slash + 1));
    if (!num || !den || *den == Rational(0)) return std::nullopt;
    return *num / *den;
  }
};

}  // namespace desiree
