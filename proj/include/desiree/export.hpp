#pragma once

#include "desiree/consistency.hpp"
#include "desiree/model.hpp"

#include <json.hpp>

#include <sstream>
#include <string>

namespace desiree {

inline std::string render_args(const Application& a) {
  ApplicationDecl d;
  d.op = a.op;
  d.inputs = a.inputs;
  d.args = a.args;
  return render_operator_args(d);
}

inline nlohmann::json stats_json(const ModelStats& s) {
  nlohmann::json kinds = nlohmann::json::object();
  for (const auto& [k, c] : s.per_kind)
    kinds[display_name(k)] = {{"total", c.total}, {"active", c.active}, {"dropped", c.dropped}};
  return {{"kinds", kinds},
          {"elements", {{"total", s.elements.total}, {"active", s.elements.active}, {"dropped", s.elements.dropped}}},
          {"applications", s.applications},
          {"axioms", s.axioms},
          {"conflicts", s.conflicts}};
}

inline nlohmann::json clash_json(const Clash& c) {
  auto chain = [](const std::vector<ImpliedEdge>& edges) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : edges)
      out.push_back({{"sub", e.sub}, {"super", e.super}, {"reason", e.reason}, {"source", e.source}});
    return out;
  };
  return {{"atom", c.atom},
          {"disjoint", {c.first, c.second}},
          {"chains", {chain(c.first_chain), chain(c.second_chain)}}};
}

/// The whole store, descriptions rendered in the surface syntax.
inline nlohmann::json export_json(const ModelStore& m) {
  using nlohmann::json;
  json elements = json::array();
  for (const auto& e : m.elements) {
    json j = {{"id", e.id}, {"kind", display_name(e.kind)}, {"body", render_body(e.body)}, {"active", e.active}};
    if (e.constructed_by) j["constructed_by"] = *e.constructed_by;
    elements.push_back(std::move(j));
  }
  json applications = json::array();
  for (const auto& a : m.applications) {
    applications.push_back({{"id", a.id},
                            {"op", keyword(a.op)},
                            {"args", render_args(a)},
                            {"inputs", a.inputs},
                            {"outputs", a.outputs},
                            {"strength", to_string(a.strength)},
                            {"declared", a.declared.has_value()},
                            {"verdict", to_string(a.verdict)},
                            {"note", a.note}});
  }
  json axioms = json::array();
  for (const auto& ax : m.axioms) axioms.push_back(render_description(*ax.lhs) + " :< " + render_description(*ax.rhs));
  json disjoint = json::array();
  for (const auto& [a, b] : m.disjointness) disjoint.push_back({render_description(*a), render_description(*b)});
  auto edges = [](const std::vector<std::pair<std::string, std::string>>& es) {
    json out = json::array();
    for (const auto& [c, p] : es) out.push_back({{"child", c}, {"parent", p}});
    return out;
  };
  return {{"elements", elements},
          {"applications", applications},
          {"axioms", axioms},
          {"disjoint", disjoint},
          {"hierarchies", {{"dimension_of", edges(m.dimension_of)}, {"part_of", edges(m.part_of)}}},
          {"conflicts", m.conflicts}};
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// Elements as `id:kind` nodes, applications as operator nodes joining
/// inputs to outputs, ReferTo edges dashed.
inline std::string export_dot(const ModelStore& m) {
  using detail::dot_escape;
  std::ostringstream os;
  os << "digraph desiree {\n  rankdir=TB;\n  node [shape=box];\n";
  for (const auto& e : m.elements) {
    os << "  \"" << dot_escape(e.id) << "\" [label=\"" << dot_escape(e.id) << ":" << display_name(e.kind) << "\"";
    if (!e.active) os << ", style=dotted";
    os << "];\n";
  }
  for (const auto& a : m.applications) {
    const std::string node = "op:" + a.id;
    os << "  \"" << dot_escape(node) << "\" [shape=circle, label=\"" << keyword(a.op) << " [" << tag(a.strength)
       << "]\"];\n";
    for (const auto& i : a.inputs) os << "  \"" << dot_escape(i) << "\" -> \"" << dot_escape(node) << "\";\n";
    for (const auto& o : a.outputs) os << "  \"" << dot_escape(node) << "\" -> \"" << dot_escape(o) << "\";\n";
  }
  for (const auto& r : referto_edges(m)) {
    os << "  \"" << dot_escape(r.from) << "\" -> \"" << dot_escape(r.to) << "\" [style=dashed";
    if (!r.via.empty()) os << ", label=\"" << dot_escape(r.via) << "\"";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace desiree
