#pragma once

#include "desiree/rational.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace desiree {

// Reserved vocabulary.
inline constexpr std::string_view kNothing = "Nothing";
inline constexpr std::string_view kAnything = "Anything";
inline constexpr std::string_view kInheresIn = "inheres_in";
inline constexpr std::string_view kObservedBy = "observed_by";
inline constexpr std::string_view kHasValueIn = "has_value_in";
inline constexpr std::string_view kEffect = "effect";
inline constexpr std::string_view kPercentUnit = "%";

/// Cardinality modifier of a slot-description pair.
///
/// ExactlyOne is the unqualified `<s: D>` form. Following the "one instance
/// that is of and only of type D" reading it constrains the slot to exactly
/// one successor, and that successor to D. The numeric forms count only the
/// successors that fall in D.
struct CardModifier {
  enum class Kind { ExactlyOne, AtMost, AtLeast, Exactly, Some, Only };
  Kind kind = Kind::ExactlyOne;
  unsigned n = 1;

  static CardModifier exactly_one() { return {Kind::ExactlyOne, 1}; }
  static CardModifier at_most(unsigned n) { return {Kind::AtMost, n}; }
  static CardModifier at_least(unsigned n) { return {Kind::AtLeast, n}; }
  static CardModifier exactly(unsigned n) { return {Kind::Exactly, n}; }
  static CardModifier some() { return {Kind::Some, 1}; }
  static CardModifier only() { return {Kind::Only, 0}; }

  friend bool operator==(const CardModifier& a, const CardModifier& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::AtMost:
      case Kind::AtLeast:
      case Kind::Exactly: return a.n == b.n;
      default: return true;
    }
  }
};

// ---------------------------------------------------------------------------
// Region expressions

struct NamedRegion {
  std::string name;
  friend bool operator==(const NamedRegion&, const NamedRegion&) = default;
};

/// Closed interval [lo, hi]; hi == nullopt means unbounded above.
struct Interval {
  Rational lo;
  std::optional<Rational> hi;
  std::string unit;  // normalized: no trailing period, may be empty
  friend bool operator==(const Interval&, const Interval&) = default;
};

using Literal = std::variant<Rational, std::string>;

struct ValueSet {
  std::vector<Literal> values;
  friend bool operator==(const ValueSet&, const ValueSet&) = default;
};

/// Percentage range, stored as fractions in [0, 1].
struct PercentRange {
  Rational lo;
  Rational hi;
  friend bool operator==(const PercentRange&, const PercentRange&) = default;
};

using RegionExpr = std::variant<NamedRegion, Interval, ValueSet, PercentRange>;

inline std::string normalize_unit(std::string_view unit) {
  std::string u(unit);
  while (!u.empty() && (u.back() == '.' || u.back() == ' ')) u.pop_back();
  while (!u.empty() && u.front() == ' ') u.erase(u.begin());
  return u;
}

// ---------------------------------------------------------------------------
// Descriptions

struct Description;
using DescRef = std::shared_ptr<const Description>;

struct Atom {
  std::string name;
};

struct Slot {
  std::string slot;
  CardModifier modifier;
  DescRef filler;
};

struct Enumeration {
  std::vector<std::string> members;
};

/// `base.slot`: the individuals reached from `base` through `slot`.
struct Projection {
  DescRef base;
  std::string slot;
};

enum class BinaryOp { And, Or, Diff };

struct Binary {
  BinaryOp op;
  DescRef lhs;
  DescRef rhs;
};

struct Region {
  RegionExpr expr;
};

struct Description {
  std::variant<Atom, Slot, Enumeration, Projection, Binary, Region> node;

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const noexcept {
    return std::holds_alternative<T>(node);
  }
};

bool operator==(const Description& a, const Description& b);

inline bool same(const DescRef& a, const DescRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline bool operator==(const Description& a, const Description& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Atom>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Slot>) {
          return x.slot == y.slot && x.modifier == y.modifier && same(x.filler, y.filler);
        } else if constexpr (std::is_same_v<T, Enumeration>) {
          return x.members == y.members;
        } else if constexpr (std::is_same_v<T, Projection>) {
          return x.slot == y.slot && same(x.base, y.base);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
        } else {
          return x.expr == y.expr;
        }
      },
      a.node);
}

// Builders.
inline DescRef atom(std::string name) {
  return std::make_shared<const Description>(Description{Atom{std::move(name)}});
}
inline DescRef slot(std::string s, CardModifier mod, DescRef filler) {
  return std::make_shared<const Description>(
      Description{Slot{std::move(s), mod, std::move(filler)}});
}
inline DescRef slot(std::string s, DescRef filler) {
  return slot(std::move(s), CardModifier::exactly_one(), std::move(filler));
}
inline DescRef enumeration(std::vector<std::string> members) {
  return std::make_shared<const Description>(Description{Enumeration{std::move(members)}});
}
inline DescRef projection(DescRef base, std::string s) {
  return std::make_shared<const Description>(Description{Projection{std::move(base), std::move(s)}});
}
inline DescRef binary(BinaryOp op, DescRef lhs, DescRef rhs) {
  return std::make_shared<const Description>(Description{Binary{op, std::move(lhs), std::move(rhs)}});
}
inline DescRef conj(DescRef lhs, DescRef rhs) { return binary(BinaryOp::And, std::move(lhs), std::move(rhs)); }
inline DescRef disj(DescRef lhs, DescRef rhs) { return binary(BinaryOp::Or, std::move(lhs), std::move(rhs)); }
inline DescRef diff(DescRef lhs, DescRef rhs) { return binary(BinaryOp::Diff, std::move(lhs), std::move(rhs)); }
inline DescRef region(RegionExpr expr) {
  return std::make_shared<const Description>(Description{Region{std::move(expr)}});
}

/// True when the description denotes values (a region) rather than individuals.
inline bool is_region_description(const Description& d) {
  if (d.is<Region>()) return true;
  if (const auto* b = d.as<Binary>()) return is_region_description(*b->lhs);
  return false;
}

// Collects every concept/individual/element name mentioned by a description.
template <typename F>
void for_each_name(const Description& d, F&& f) {
  std::visit(
      [&f](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Atom>) {
          f(x.name);
        } else if constexpr (std::is_same_v<T, Slot>) {
          for_each_name(*x.filler, f);
        } else if constexpr (std::is_same_v<T, Enumeration>) {
          for (const auto& m : x.members) f(m);
        } else if constexpr (std::is_same_v<T, Projection>) {
          for_each_name(*x.base, f);
        } else if constexpr (std::is_same_v<T, Binary>) {
          for_each_name(*x.lhs, f);
          for_each_name(*x.rhs, f);
        }
      },
      d.node);
}

// ---------------------------------------------------------------------------
// Rendering

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto start = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!start(s[0])) return false;
  for (char c : s)
    if (!start(c) && !(c >= '0' && c <= '9') && c != '\'' && c != '@') return false;
  return true;
}

inline std::string render_literal(const Literal& lit) {
  if (const auto* r = std::get_if<Rational>(&lit)) return format_rational(*r);
  const auto& s = std::get<std::string>(lit);
  if (is_identifier(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

inline std::string render_percent(const Rational& fraction) {
  return format_rational(fraction * Rational(100)) + "%";
}

inline std::string render_unit_suffix(const std::string& unit) {
  return unit.empty() ? std::string() : " (" + unit + ".)";
}

inline std::string render_region(const RegionExpr& r) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NamedRegion>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Interval>) {
          if (!x.hi) return ">=" + format_rational(x.lo) + render_unit_suffix(x.unit);
          return "[" + format_rational(x.lo) + ", " + format_rational(*x.hi) +
                 render_unit_suffix(x.unit) + "]";
        } else if constexpr (std::is_same_v<T, ValueSet>) {
          std::string out = "{";
          for (std::size_t i = 0; i < x.values.size(); ++i) {
            if (i) out += ", ";
            out += render_literal(x.values[i]);
          }
          return out + "}";
        } else {
          return "[" + render_percent(x.lo) + ", " + render_percent(x.hi) + "]";
        }
      },
      r);
}

namespace detail {

// Binding strength used to decide where parentheses are needed.
inline int precedence(const Description& d) {
  if (const auto* b = d.as<Binary>()) {
    switch (b->op) {
      case BinaryOp::Diff: return 1;
      case BinaryOp::Or: return 2;
      case BinaryOp::And: return 3;
    }
  }
  if (d.is<Projection>()) return 4;
  return 5;
}

inline std::string render_modifier(const CardModifier& m) {
  using K = CardModifier::Kind;
  switch (m.kind) {
    case K::ExactlyOne: return "";
    case K::AtMost: return "<=" + std::to_string(m.n) + " ";
    case K::AtLeast: return ">=" + std::to_string(m.n) + " ";
    case K::Exactly: return std::to_string(m.n) + " ";
    case K::Some: return "SOME ";
    case K::Only: return "ONLY ";
  }
  return "";
}

}  // namespace detail

inline std::string render_description(const Description& d);

inline std::string render_operand(const Description& d, int min_prec) {
  std::string s = render_description(d);
  if (detail::precedence(d) < min_prec) return "(" + s + ")";
  return s;
}

inline std::string render_description(const Description& d) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Atom>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Slot>) {
          std::string filler;
          const auto* reg = x.filler->template as<Region>();
          if (x.slot == kHasValueIn && reg) {
            filler = render_region(reg->expr);
          } else {
            filler = render_description(*x.filler);
          }
          return "<" + x.slot + ": " + detail::render_modifier(x.modifier) + filler + ">";
        } else if constexpr (std::is_same_v<T, Enumeration>) {
          std::string out = "{";
          for (std::size_t i = 0; i < x.members.size(); ++i) {
            if (i) out += ", ";
            out += x.members[i];
          }
          return out + "}";
        } else if constexpr (std::is_same_v<T, Projection>) {
          return render_operand(*x.base, 4) + "." + x.slot;
        } else if constexpr (std::is_same_v<T, Binary>) {
          // Left-associative: the right operand needs parentheses at equal precedence.
          const int p = detail::precedence(Description{x});
          const char* sep = x.op == BinaryOp::And ? " " : (x.op == BinaryOp::Or ? " | " : " - ");
          return render_operand(*x.lhs, p) + sep + render_operand(*x.rhs, p + 1);
        } else {
          return render_region(x.expr);
        }
      },
      d.node);
}

inline std::string render_description(const DescRef& d) { return render_description(*d); }

}  // namespace desiree
