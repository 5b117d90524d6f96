#pragma once

#include "desiree/model.hpp"
#include "desiree/reasoner.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace desiree {

class UnknownRelation : public std::runtime_error {
 public:
  explicit UnknownRelation(std::string slot)
      : std::runtime_error("unknown relation '" + slot + "'"), slot_(std::move(slot)) {}
  const std::string& slot() const noexcept { return slot_; }

 private:
  std::string slot_;
};

/// A node of the fact graph. Elements are keyed by id, terms by their
/// rendering, quality instances as `Quality@subject`, regions by rendering.
struct FactNode {
  enum class Kind { Element, Term, Quality, Region };
  Kind kind = Kind::Term;
  std::string key;
  DescRef desc;  // what the node is known to be; null for regions
  std::optional<RegionExpr> region;
};

struct Fact {
  std::string subject;
  std::string relation;
  std::string object;
  std::string provenance;  // contributing element id
  bool inverse = false;

  friend bool operator<(const Fact& a, const Fact& b) {
    return std::tie(a.subject, a.relation, a.object, a.provenance) <
           std::tie(b.subject, b.relation, b.object, b.provenance);
  }
};

struct FactGraph {
  std::map<std::string, FactNode> nodes;
  std::set<Fact> facts;

  bool empty() const { return facts.empty(); }

  std::vector<std::string> objects(const std::string& subject, const std::string& relation) const {
    std::vector<std::string> out;
    for (auto it = facts.lower_bound(Fact{subject, relation, "", ""});
         it != facts.end() && it->subject == subject && it->relation == relation; ++it)
      if (out.empty() || out.back() != it->object) out.push_back(it->object);
    return out;
  }

  bool has(const std::string& s, const std::string& r, const std::string& o) const {
    auto it = facts.lower_bound(Fact{s, r, o, ""});
    return it != facts.end() && it->subject == s && it->relation == r && it->object == o;
  }

  std::set<std::string> relations() const {
    std::set<std::string> out;
    for (const auto& f : facts) out.insert(f.relation);
    return out;
  }
};

/// Name of the inverse of a relation.
inline std::string inverse_relation(const std::string& slot) {
  if (slot == kInheresIn) return "has_quality";
  if (slot == "has_quality") return std::string(kInheresIn);
  if (slot.rfind("is_", 0) == 0 && slot.size() > 6 && slot.compare(slot.size() - 3, 3, "_of") == 0)
    return slot.substr(3, slot.size() - 6);
  return "is_" + slot + "_of";
}

namespace detail {

class FactBuilder {
 public:
  explicit FactBuilder(const ModelStore& m) : m_(m) {}

  FactGraph build() {
    for (const auto& e : m_.elements) {
      if (!e.active) continue;
      if (const auto* f = std::get_if<FunctionDesc>(&e.body)) {
        element_node(e);
        for (const auto& sd : f->slots) {
          const auto* s = sd->as<Slot>();
          if (!s) continue;
          for (const auto& key : term_nodes(s->filler)) add(e.id, s->slot, key, e.id);
        }
      } else if (const auto* q = std::get_if<QualityForm>(&e.body)) {
        element_node(e);
        const auto subjects = term_nodes(q->subject);
        const std::string region = region_node(q->region);
        for (const auto& subj : subjects) {
          const std::string inst = quality_node(q->quality, subj);
          add(inst, std::string(kInheresIn), subj, e.id);
          add(inst, std::string(kHasValueIn), region, e.id);
          add(e.id, std::string(kInheresIn), subj, e.id);
          if (q->observer)
            for (const auto& o : term_nodes(q->observer)) add(inst, std::string(kObservedBy), o, e.id);
        }
        add(e.id, std::string(kHasValueIn), region, e.id);
        if (q->observer)
          for (const auto& o : term_nodes(q->observer)) add(e.id, std::string(kObservedBy), o, e.id);
      }
    }
    return std::move(g_);
  }

 private:
  void add(const std::string& s, const std::string& r, const std::string& o, const std::string& from) {
    g_.facts.insert(Fact{s, r, o, from, false});
    if (r != kHasValueIn) g_.facts.insert(Fact{o, inverse_relation(r), s, from, true});
  }

  void element_node(const Element& e) {
    DescRef d = atom(e.id);
    if (const auto* f = std::get_if<FunctionDesc>(&e.body)) d = conj(d, f->as_description());
    if (const auto* q = std::get_if<QualityForm>(&e.body)) d = conj(d, atom(q->quality));
    g_.nodes[e.id] = FactNode{FactNode::Kind::Element, e.id, d, std::nullopt};
  }

  // Nodes a filler or subject stands for: one per enumeration member, the
  // element when it names one, else the term itself.
  std::vector<std::string> term_nodes(const DescRef& d) {
    if (const auto* en = d->as<Enumeration>()) {
      std::vector<std::string> out;
      for (const auto& member : en->members) {
        if (const Element* e = m_.find(member)) {
          if (!g_.nodes.count(member)) element_node(*e);
        } else if (!g_.nodes.count(member)) {
          g_.nodes[member] = FactNode{FactNode::Kind::Term, member, enumeration({member}), std::nullopt};
        }
        out.push_back(member);
      }
      return out;
    }
    if (const auto* a = d->as<Atom>()) {
      if (const Element* e = m_.find(a->name)) {
        if (!g_.nodes.count(a->name)) element_node(*e);
        return {a->name};
      }
    }
    const std::string key = render_description(*d);
    if (!g_.nodes.count(key)) g_.nodes[key] = FactNode{FactNode::Kind::Term, key, d, std::nullopt};
    return {key};
  }

  std::string quality_node(const std::string& quality, const std::string& subject) {
    const std::string key = quality + "@" + subject;
    if (!g_.nodes.count(key)) g_.nodes[key] = FactNode{FactNode::Kind::Quality, key, atom(quality), std::nullopt};
    return key;
  }

  std::string region_node(const RegionExpr& r) {
    const std::string key = render_region(r);
    if (!g_.nodes.count(key)) g_.nodes[key] = FactNode{FactNode::Kind::Region, key, region(r), r};
    return key;
  }

  const ModelStore& m_;
  FactGraph g_;
};

}  // namespace detail

/// Facts contributed by active functions (their slots) and QGCs (quality
/// instances, subjects, regions, observers), with inverses.
inline FactGraph extract_facts(const ModelStore& m) { return detail::FactBuilder(m).build(); }

struct QueryOptions {
  bool lenient = false;  // also accept matches the reasoner cannot decide
  std::size_t max_dnf = kDefaultMaxDnf;
};

struct QueryResult {
  std::set<std::string> ids;
  std::set<std::string> tentative;  // lenient matches resting on Unknown
};

namespace detail {

enum class Match { No, Yes, Maybe };

inline Match operator&&(Match a, Match b) {
  if (a == Match::No || b == Match::No) return Match::No;
  return a == Match::Yes && b == Match::Yes ? Match::Yes : Match::Maybe;
}
inline Match operator||(Match a, Match b) {
  if (a == Match::Yes || b == Match::Yes) return Match::Yes;
  return a == Match::Maybe || b == Match::Maybe ? Match::Maybe : Match::No;
}

class QueryEvaluator {
 public:
  QueryEvaluator(const ModelStore& m, const FactGraph& g, const QueryOptions& o)
      : g_(g), tbox_(make_tbox(m, o.max_dnf)) {
    known_ = g.relations();
    for (const auto& e : m.elements)
      detail::body_mentions(e.body, [&](const std::string&, const std::string& via) {
        if (!via.empty()) {
          known_.insert(via);
          known_.insert(inverse_relation(via));
        }
      });
    for (const char* r : {"inheres_in", "has_quality", "has_value_in", "observed_by", "is_observed_by_of"})
      known_.insert(r);
  }

  void check_relations(const Description& q) const {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Slot>) {
            if (!known_.count(x.slot)) throw UnknownRelation(x.slot);
            check_relations(*x.filler);
          } else if constexpr (std::is_same_v<T, Projection>) {
            if (!known_.count(x.slot)) throw UnknownRelation(x.slot);
            check_relations(*x.base);
          } else if constexpr (std::is_same_v<T, Binary>) {
            check_relations(*x.lhs);
            check_relations(*x.rhs);
          }
        },
        q.node);
  }

  Match match(const std::string& node, const Description& q) {
    const FactNode& n = g_.nodes.at(node);
    return std::visit(
        [&](const auto& x) -> Match {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Slot>) {
            return match_slot(node, x);
          } else if constexpr (std::is_same_v<T, Binary>) {
            const Match l = match(node, *x.lhs);
            switch (x.op) {
              case BinaryOp::And: return l == Match::No ? l : (l && match(node, *x.rhs));
              case BinaryOp::Or: return l == Match::Yes ? l : (l || match(node, *x.rhs));
              case BinaryOp::Diff: {
                const Match r = match(node, *x.rhs);
                return l && (r == Match::Yes ? Match::No : r == Match::No ? Match::Yes : Match::Maybe);
              }
            }
            return Match::No;
          } else if constexpr (std::is_same_v<T, Projection>) {
            Match best = Match::No;
            for (const auto& [key, _] : g_.nodes) {
              if (!g_.has(key, x.slot, node)) continue;
              best = best || match(key, *x.base);
              if (best == Match::Yes) break;
            }
            return best;
          } else {
            return entailed(n, q);
          }
        },
        q.node);
  }

 private:
  Match entailed(const FactNode& n, const Description& q) {
    if (!n.desc) return Match::No;
    const auto key = std::make_pair(n.key, render_description(q));
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    // Regions only compare with regions, concepts with concepts.
    const bool q_region = is_region_description(q);
    Match out = Match::No;
    if (q_region == (n.kind == FactNode::Kind::Region)) {
      const Verdict3 v = subsumes(tbox_, *n.desc, q);
      out = v.is_proved() ? Match::Yes : v.is_unknown() ? Match::Maybe : Match::No;
    }
    cache_.emplace(key, out);
    return out;
  }

  Match match_slot(const std::string& node, const Slot& s) {
    std::size_t yes = 0, maybe = 0;
    const auto succ = g_.objects(node, s.slot);
    for (const auto& y : succ) {
      const Match r = match(y, *s.filler);
      if (r == Match::Yes) ++yes;
      if (r == Match::Maybe) ++maybe;
    }
    using K = CardModifier::Kind;
    auto range = [&](std::size_t lo, std::optional<std::size_t> hi) {
      // Definitely within bounds, possibly within bounds, or not.
      const std::size_t most = yes + maybe;
      if (yes >= lo && (!hi || most <= *hi)) return Match::Yes;
      if (most >= lo && (!hi || yes <= *hi)) return Match::Maybe;
      return Match::No;
    };
    switch (s.modifier.kind) {
      case K::ExactlyOne:
      case K::Some: return range(1, std::nullopt);
      case K::AtLeast: return range(s.modifier.n, std::nullopt);
      case K::AtMost: return range(0, s.modifier.n);
      case K::Exactly: return range(s.modifier.n, s.modifier.n);
      case K::Only: {
        if (yes == succ.size()) return Match::Yes;
        return yes + maybe == succ.size() ? Match::Maybe : Match::No;
      }
    }
    return Match::No;
  }

  const FactGraph& g_;
  TBox tbox_;
  std::set<std::string> known_;
  std::map<std::pair<std::string, std::string>, Match> cache_;
};

}  // namespace detail

/// Ids of elements, terms and individuals whose neighbourhood in the fact
/// graph matches q. An unqualified `<s: D>` asks for some s-successor in D.
/// Quality instances (`Q@subject`) only serve as intermediate nodes.
inline QueryResult eval_query(const ModelStore& m, const FactGraph& g, const Description& q,
                              const QueryOptions& options = {}) {
  detail::QueryEvaluator ev(m, g, options);
  ev.check_relations(q);
  QueryResult out;
  for (const auto& [key, node] : g.nodes) {
    if (node.kind == FactNode::Kind::Quality || node.kind == FactNode::Kind::Region) continue;
    const auto r = ev.match(key, q);
    if (r == detail::Match::Yes) out.ids.insert(key);
    if (r == detail::Match::Maybe && options.lenient) {
      out.ids.insert(key);
      out.tentative.insert(key);
    }
  }
  return out;
}

inline QueryResult eval_query(const ModelStore& m, const Description& q, const QueryOptions& options = {}) {
  return eval_query(m, extract_facts(m), q, options);
}

}  // namespace desiree
