#pragma once

#include "desiree/declarations.hpp"
#include "desiree/description.hpp"
#include "desiree/diagnostics.hpp"
#include "desiree/lexer.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace desiree {

struct ParseResult {
  ModelFileAst ast;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {
    Token end;
    end.kind = TokenKind::End;
    if (!toks_.empty()) {
      const Span& last = toks_.back().span;
      end.span = Span{last.line, last.column + last.length, last.offset + last.length, 0};
    }
    toks_.push_back(end);
  }

  // -------------------------------------------------------------------------
  // Descriptions

  DescRef description(bool region_ctx = false) { return parse_diff(region_ctx); }

  void expect_end() { expect(TokenKind::End); }

  // -------------------------------------------------------------------------
  // Model files

  ParseResult model_file() {
    ParseResult out;
    while (!at(TokenKind::End)) {
      const std::size_t start = pos_;
      try {
        Declaration d = declaration();
        d.span.length = toks_[pos_ - 1].span.offset + toks_[pos_ - 1].span.length - d.span.offset;
        out.ast.declarations.push_back(std::move(d));
      } catch (const ParseError& e) {
        out.diagnostics.push_back(make_error(e.code(), e.span(), e.what()));
        if (pos_ == start) ++pos_;
        recover();
      }
    }
    check_duplicates(out);
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at(TokenKind k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
  bool at_ident(std::string_view text, std::size_t ahead = 0) const {
    return at(TokenKind::Ident, ahead) && peek(ahead).text == text;
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::vector<std::string> expected, std::string code = codes::kParse) const {
    const Token& t = peek();
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found ";
    msg += t.kind == TokenKind::End ? std::string("end of input") : "'" + t.text + "'";
    throw ParseError(t.span, msg, std::move(expected), std::move(code));
  }

  [[noreturn]] void fail_at(const Span& span, const std::string& msg, std::string code) const {
    throw ParseError(span, msg, {}, std::move(code));
  }

  const Token& expect(TokenKind k) {
    if (!at(k)) fail({to_string(k)});
    return take();
  }

  std::string expect_ident() { return expect(TokenKind::Ident).text; }

  void recover() {
    while (!at(TokenKind::End)) {
      if (take().kind == TokenKind::Period) return;
    }
  }

  // -------------------------------------------------------------------------

  DescRef combine(BinaryOp op, DescRef lhs, DescRef rhs, const Span& span) {
    if (is_region_description(*lhs) != is_region_description(*rhs))
      fail_at(span, "cannot combine a region with a concept", codes::kRegionMix);
    return binary(op, std::move(lhs), std::move(rhs));
  }

  DescRef parse_diff(bool rc) {
    DescRef lhs = parse_or(rc);
    while (at(TokenKind::Minus)) {
      const Span s = take().span;
      lhs = combine(BinaryOp::Diff, lhs, parse_or(rc), s);
    }
    return lhs;
  }

  DescRef parse_or(bool rc) {
    DescRef lhs = parse_and(rc);
    while (at(TokenKind::Bar)) {
      const Span s = take().span;
      lhs = combine(BinaryOp::Or, lhs, parse_and(rc), s);
    }
    return lhs;
  }

  bool starts_primary(std::size_t ahead = 0) const {
    switch (peek(ahead).kind) {
      case TokenKind::Ident:
      case TokenKind::Lt:
      case TokenKind::LBrace:
      case TokenKind::LParen:
      case TokenKind::LBracket:
      case TokenKind::GreaterEq:
      case TokenKind::LessEq:
      case TokenKind::Number:
      case TokenKind::Percent: return true;
      default: return false;
    }
  }

  // Whether a concept (not a region) begins at `ahead`, looking through parentheses.
  bool starts_concept(std::size_t ahead) const {
    while (at(TokenKind::LParen, ahead)) ++ahead;
    switch (peek(ahead).kind) {
      case TokenKind::Ident:
      case TokenKind::Lt: return true;
      case TokenKind::LBrace: return at(TokenKind::Ident, ahead + 1);
      default: return false;
    }
  }

  DescRef parse_and(bool rc) {
    DescRef lhs = parse_proj(rc);
    while (true) {
      const Span s = peek().span;
      if (at(TokenKind::Amp)) {
        take();
      } else if (!starts_primary()) {
        break;
      }
      lhs = combine(BinaryOp::And, lhs, parse_proj(rc), s);
    }
    return lhs;
  }

  DescRef parse_proj(bool rc) {
    DescRef base = parse_primary(rc);
    while (at(TokenKind::Dot)) {
      take();
      if (is_region_description(*base))
        fail_at(peek().span, "cannot project a region", codes::kRegionMix);
      base = projection(base, expect_ident());
    }
    return base;
  }

  DescRef parse_primary(bool rc) {
    switch (peek().kind) {
      case TokenKind::Ident: {
        if (at(TokenKind::LParen, 1) && rc)
          fail_at(peek().span, "computed expressions are not supported", codes::kNotSupported);
        std::string name = take().text;
        if (rc) return region(NamedRegion{std::move(name)});
        return atom(std::move(name));
      }
      case TokenKind::Lt: return parse_slot();
      case TokenKind::LBrace: return parse_braces(rc);
      case TokenKind::LParen: {
        take();
        DescRef d = parse_diff(rc);
        expect(TokenKind::RParen);
        return d;
      }
      case TokenKind::LBracket:
      case TokenKind::GreaterEq:
      case TokenKind::LessEq:
      case TokenKind::Number:
      case TokenKind::Percent: return region(parse_region_expr(rc));
      default: fail({"a description"});
    }
  }

  void expect_slot_colon() {
    if (at(TokenKind::SubsumedBy)) {
      // "<s:<t: A>>" lexes ":<" greedily; split it back.
      Token& t = toks_[pos_];
      t.kind = TokenKind::Lt;
      t.text = "<";
      t.span.offset += 1;
      t.span.column += 1;
      t.span.length = 1;
      return;
    }
    expect(TokenKind::Colon);
  }

  static bool is_count(const Token& t) {
    return t.kind == TokenKind::Number && t.value.denominator() == 1 && t.value >= 0;
  }

  CardModifier parse_modifier() {
    if (at(TokenKind::GreaterEq) || at(TokenKind::LessEq)) {
      if (at(TokenKind::Ident, 1) && at(TokenKind::LParen, 2))
        fail_at(peek(1).span, "computed cardinality bounds are not supported", codes::kNotSupported);
      if (is_count(peek(1)) && starts_concept(2)) {
        const bool at_least = take().kind == TokenKind::GreaterEq;
        const Token& n = take();
        const auto count = static_cast<unsigned>(n.value.numerator());
        if (at_least) {
          if (count < 1) fail_at(n.span, "'>=' needs a bound of at least 1", codes::kBadLiteral);
          return CardModifier::at_least(count);
        }
        return CardModifier::at_most(count);
      }
      return CardModifier::exactly_one();
    }
    if (is_count(peek()) && starts_concept(1)) {
      const Token& n = take();
      const auto count = static_cast<unsigned>(n.value.numerator());
      if (count < 1) fail_at(n.span, "exact cardinality must be at least 1", codes::kBadLiteral);
      return CardModifier::exactly(count);
    }
    if ((at_ident("SOME") || at_ident("ONLY")) && starts_primary(1)) {
      return take().text == "SOME" ? CardModifier::some() : CardModifier::only();
    }
    return CardModifier::exactly_one();
  }

  DescRef parse_slot() {
    expect(TokenKind::Lt);
    std::string name = expect_ident();
    expect_slot_colon();
    if (name == kHasValueIn) {
      DescRef filler = parse_diff(true);
      expect(TokenKind::Gt);
      return slot(std::move(name), CardModifier::exactly_one(), std::move(filler));
    }
    const CardModifier mod = parse_modifier();
    DescRef filler = parse_diff(false);
    expect(TokenKind::Gt);
    return slot(std::move(name), mod, std::move(filler));
  }

  DescRef parse_braces(bool rc) {
    const Span open = expect(TokenKind::LBrace).span;
    std::vector<Literal> items;
    bool all_idents = true;
    while (!at(TokenKind::RBrace)) {
      if (!items.empty()) expect(TokenKind::Comma);
      if (at(TokenKind::Ident)) {
        items.emplace_back(take().text);
      } else if (at(TokenKind::String)) {
        items.emplace_back(take().text);
        all_idents = false;
      } else if (at(TokenKind::Number) || at(TokenKind::Minus)) {
        items.emplace_back(signed_number());
        all_idents = false;
      } else {
        fail({"identifier", "number"});
      }
    }
    take();
    if (items.empty()) fail_at(open, "an enumeration needs at least one member", codes::kParse);
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (items[i] == items[j])
          fail_at(open, "duplicate member '" + render_literal(items[i]) + "'", codes::kParse);
    if (all_idents && !rc) {
      std::vector<std::string> members;
      for (auto& it : items) members.push_back(std::get<std::string>(it));
      return enumeration(std::move(members));
    }
    return region(ValueSet{std::move(items)});
  }

  Rational signed_number() {
    bool neg = false;
    if (at(TokenKind::Minus)) {
      take();
      neg = true;
    }
    if (at(TokenKind::Ident) && at(TokenKind::LParen, 1))
      fail_at(peek().span, "computed bounds are not supported", codes::kNotSupported);
    const Rational v = expect(TokenKind::Number).value;
    return neg ? -v : v;
  }

  // A signed number or percentage; `percent` reports which.
  Rational bound(bool& percent) {
    if (at(TokenKind::Percent)) {
      percent = true;
      return take().value;
    }
    percent = false;
    if (!at(TokenKind::Number) && !at(TokenKind::Minus) &&
        !(at(TokenKind::Ident) && at(TokenKind::LParen, 1)))
      fail({"number", "percentage"});
    return signed_number();
  }

  std::string optional_unit(bool rc) {
    if (at(TokenKind::Unit)) return normalize_unit(take().text);
    if (rc && at(TokenKind::Ident) && !at(TokenKind::LParen, 1)) return normalize_unit(take().text);
    return {};
  }

  RegionExpr parse_region_expr(bool rc) {
    const Span start = peek().span;
    bool pct = false;
    if (at(TokenKind::LBracket)) {
      take();
      bool pct_hi = false;
      const Rational lo = bound(pct);
      expect(TokenKind::Comma);
      const Rational hi = bound(pct_hi);
      if (pct != pct_hi) fail_at(start, "interval mixes percentages and numbers", codes::kBadLiteral);
      std::string unit = pct ? std::string() : optional_unit(true);
      expect(TokenKind::RBracket);
      if (lo > hi) fail_at(start, "interval lower bound exceeds upper bound", codes::kBadLiteral);
      if (pct) {
        if (lo < 0 || hi > 1) fail_at(start, "percentage outside [0%, 100%]", codes::kBadLiteral);
        return PercentRange{lo, hi};
      }
      return Interval{lo, hi, std::move(unit)};
    }
    if (at(TokenKind::GreaterEq) || at(TokenKind::LessEq)) {
      const bool at_least = take().kind == TokenKind::GreaterEq;
      const Rational n = bound(pct);
      if (pct) {
        if (n < 0 || n > 1) fail_at(start, "percentage outside [0%, 100%]", codes::kBadLiteral);
        return at_least ? PercentRange{n, Rational(1)} : PercentRange{Rational(0), n};
      }
      std::string unit = optional_unit(rc);
      if (at_least) return Interval{n, std::nullopt, std::move(unit)};
      if (n < 0) fail_at(start, "'<=' bound must be non-negative", codes::kBadLiteral);
      return Interval{Rational(0), n, std::move(unit)};
    }
    if (at(TokenKind::Percent)) {
      const Rational p = take().value;
      if (p > 1) fail_at(start, "percentage outside [0%, 100%]", codes::kBadLiteral);
      return PercentRange{p, p};
    }
    const Rational v = signed_number();
    return ValueSet{{v}};
  }

  // -------------------------------------------------------------------------
  // Declarations

  Declaration declaration() {
    Declaration d;
    d.span = peek().span;
    if (!at(TokenKind::Ident)) fail({"a declaration"});
    const std::string head = peek().text;

    if (auto kind = kind_from_keyword(head); kind && at(TokenKind::Ident, 1) && at(TokenKind::Equals, 2)) {
      take();
      ElementDecl e{*kind, take().text, NLText{}};
      take();  // '='
      e.body = parse_body();
      expect(TokenKind::Period);
      d.node = std::move(e);
      return d;
    }
    if (head == "axiom") {
      take();
      DescRef lhs = description();
      expect(TokenKind::SubsumedBy);
      DescRef rhs = description();
      expect(TokenKind::Period);
      d.node = AxiomDecl{lhs, rhs};
      return d;
    }
    if (head == "disjoint") {
      take();
      DescRef a = description();
      expect(TokenKind::Comma);
      DescRef b = description();
      expect(TokenKind::Period);
      d.node = DisjointDecl{a, b};
      return d;
    }
    if ((head == "dimension" || head == "part") && at(TokenKind::Ident, 1)) {
      take();
      HierarchyDecl h;
      h.kind = head == "dimension" ? HierarchyKind::DimensionOf : HierarchyKind::PartOf;
      h.child = expect_ident();
      if (!at_ident("of")) fail({"'of'"});
      take();
      h.parent = expect_ident();
      expect(TokenKind::Period);
      d.node = std::move(h);
      return d;
    }
    if (head == "factor" && at(TokenKind::Ident, 1)) {
      take();
      FactorDecl f;
      f.name = expect_ident();
      if (at_ident("weakens")) {
        f.weakens = true;
      } else if (at_ident("strengthens")) {
        f.weakens = false;
      } else {
        fail({"'weakens'", "'strengthens'"});
      }
      take();
      expect(TokenKind::Period);
      d.node = std::move(f);
      return d;
    }
    if (head == "conflict" && at(TokenKind::LBrace, 1)) {
      take();
      ConflictDecl c;
      c.ids = id_set();
      expect(TokenKind::Period);
      d.node = std::move(c);
      return d;
    }
    if (at(TokenKind::Colon, 1) && at(TokenKind::Ident, 2) && at(TokenKind::LParen, 3)) {
      std::string label = take().text;
      take();
      ApplicationDecl a = application();
      a.label = std::move(label);
      d.node = std::move(a);
      return d;
    }
    if (operator_from_keyword(head) && at(TokenKind::LParen, 1)) {
      d.node = application();
      return d;
    }
    fail({"a declaration"});
  }

  std::vector<std::string> id_set() {
    expect(TokenKind::LBrace);
    std::vector<std::string> ids;
    while (!at(TokenKind::RBrace)) {
      if (!ids.empty()) expect(TokenKind::Comma);
      ids.push_back(expect_ident());
    }
    take();
    return ids;
  }

  std::vector<std::string> id_list() {
    std::vector<std::string> ids{expect_ident()};
    while (at(TokenKind::Comma)) {
      take();
      ids.push_back(expect_ident());
    }
    return ids;
  }

  ElementBody parse_body() {
    if (at(TokenKind::String)) return NLText{take().text};
    if (at(TokenKind::Ident) && at(TokenKind::LParen, 1) && quality_form_ahead()) return quality_form();
    DescRef lhs = description();
    if (at(TokenKind::SubsumedBy)) {
      take();
      return SubsumptionForm{lhs, description()};
    }
    return ConceptBody{lhs};
  }

  // Ident '(' ... ')' '::'
  bool quality_form_ahead() const {
    std::size_t i = 1;
    int depth = 0;
    while (true) {
      const TokenKind k = peek(i).kind;
      if (k == TokenKind::End) return false;
      if (k == TokenKind::LParen) ++depth;
      if (k == TokenKind::RParen && --depth == 0) return at(TokenKind::DoubleColon, i + 1);
      ++i;
    }
  }

  QualityForm quality_form() {
    QualityForm q;
    q.quality = take().text;
    expect(TokenKind::LParen);
    q.subject = description();
    expect(TokenKind::RParen);
    expect(TokenKind::DoubleColon);
    q.region = quality_region();
    if (at(TokenKind::Lt) && at_ident(std::string(kObservedBy), 1)) {
      take();
      take();
      expect_slot_colon();
      q.observer = description();
      expect(TokenKind::Gt);
    }
    while (at_ident("pct") && at(TokenKind::LParen, 1)) {
      take();
      take();
      PctEntry e;
      e.var = expect(TokenKind::Var).text;
      expect(TokenKind::Comma);
      e.path = slot_path(e.var);
      expect(TokenKind::Comma);
      e.pct = percentage();
      expect(TokenKind::RParen);
      q.pct_chain.push_back(std::move(e));
    }
    return q;
  }

  RegionExpr quality_region() {
    if (at(TokenKind::Ident)) {
      if (at(TokenKind::LParen, 1))
        fail_at(peek().span, "computed regions are not supported", codes::kNotSupported);
      return NamedRegion{take().text};
    }
    if (at(TokenKind::LBrace)) {
      DescRef d = parse_braces(true);
      return d->as<Region>()->expr;
    }
    return parse_region_expr(true);
  }

  Rational percentage() {
    const Token& t = peek();
    if (!at(TokenKind::Percent)) fail({"percentage"});
    take();
    if (t.value <= 0 || t.value > 1)
      fail_at(t.span, "percentage must lie in (0%, 100%]", codes::kBadLiteral);
    return t.value;
  }

  // "<inheres_in: <run_of: ?F>>" -> {inheres_in, run_of}; the innermost filler must be `var`.
  std::vector<std::string> slot_path(const std::string& var) {
    std::vector<std::string> path;
    std::size_t depth = 0;
    while (at(TokenKind::Lt)) {
      take();
      path.push_back(expect_ident());
      expect_slot_colon();
      ++depth;
    }
    if (path.empty()) fail({"'<'"});
    const Token& v = expect(TokenKind::Var);
    if (v.text != var)
      fail_at(v.span, "slot path must end at " + var + ", found " + v.text, codes::kParse);
    for (std::size_t i = 0; i < depth; ++i) expect(TokenKind::Gt);
    return path;
  }

  ApplicationDecl application() {
    ApplicationDecl a;
    const Token& name = take();
    a.op = *operator_from_keyword(name.text);
    expect(TokenKind::LParen);
    switch (a.op) {
      case OperatorKind::Reduce:
      case OperatorKind::Interpret:
      case OperatorKind::Resolve:
      case OperatorKind::Operationalize:
        a.inputs = at(TokenKind::LBrace) ? id_set() : id_list();
        break;
      case OperatorKind::Focus: {
        a.inputs = {expect_ident()};
        expect(TokenKind::Comma);
        expect(TokenKind::LBrace);
        FocusArgs f;
        while (!at(TokenKind::RBrace)) {
          if (!f.targets.empty()) expect(TokenKind::Comma);
          f.targets.push_back(description());
        }
        take();
        a.args = std::move(f);
        break;
      }
      case OperatorKind::ScaleUp:
      case OperatorKind::ScaleDown: {
        a.inputs = {expect_ident()};
        expect(TokenKind::Comma);
        ScaleArgs s;
        if (at(TokenKind::Ident)) {
          s.factor = take().text;
        } else {
          expect(TokenKind::LParen);
          const Rational lo = signed_number();
          expect(TokenKind::Comma);
          const Rational hi = signed_number();
          expect(TokenKind::RParen);
          s.factor = std::make_pair(lo, hi);
        }
        a.args = std::move(s);
        break;
      }
      case OperatorKind::DeUniversalize: {
        DeUniversalizeArgs u;
        u.var = expect(TokenKind::Var).text;
        expect(TokenKind::Comma);
        a.inputs = {expect_ident()};
        expect(TokenKind::Comma);
        u.slot_path = slot_path(u.var);
        expect(TokenKind::Comma);
        u.pct = percentage();
        a.args = std::move(u);
        break;
      }
      case OperatorKind::Observe: {
        a.inputs = {expect_ident()};
        expect(TokenKind::Comma);
        a.args = ObserveArgs{description()};
        break;
      }
    }
    expect(TokenKind::RParen);
    if (at(TokenKind::LBracket)) {
      take();
      const Token& t = expect(TokenKind::Ident);
      if (t.text == "s") {
        a.strength = Strength::Strengthen;
      } else if (t.text == "w") {
        a.strength = Strength::Weaken;
      } else if (t.text == "e") {
        a.strength = Strength::Equate;
      } else {
        fail_at(t.span, "strength tag must be s, w or e", codes::kParse);
      }
      expect(TokenKind::RBracket);
    }
    expect(TokenKind::Equals);
    a.outputs = id_set();
    expect(TokenKind::Period);
    return a;
  }

  static void check_duplicates(ParseResult& out) {
    std::set<std::string> seen;
    for (const auto& decl : out.ast.declarations) {
      const std::string* id = nullptr;
      if (const auto* e = std::get_if<ElementDecl>(&decl.node)) id = &e->id;
      if (const auto* a = std::get_if<ApplicationDecl>(&decl.node); a && a->label) id = &*a->label;
      if (id && !seen.insert(*id).second)
        out.diagnostics.push_back(
            make_error(codes::kDuplicateId, decl.span, "duplicate identifier '" + *id + "'", {*id}));
    }
  }
};

}  // namespace detail

/// Parses a single description; throws LexError or ParseError.
inline DescRef parse_description(std::vector<Token> tokens) {
  detail::Parser p(std::move(tokens));
  DescRef d = p.description();
  p.expect_end();
  return d;
}

inline DescRef parse_description(std::string_view text) { return parse_description(tokenize(text)); }

/// Parses a whole model file. Errors are collected rather than thrown; the AST
/// keeps every declaration that parsed.
inline ParseResult parse_model_file(std::string_view text) {
  std::vector<Token> tokens;
  try {
    tokens = tokenize(text);
  } catch (const LexError& e) {
    ParseResult r;
    r.diagnostics.push_back(make_error(codes::kLex, e.span(), e.what()));
    return r;
  }
  ParseResult r = detail::Parser(std::move(tokens)).model_file();
  sort_diagnostics(r.diagnostics);
  return r;
}

/// Canonical text of a model file that keeps full-line `//` comments and
/// collapses runs of blank lines between declarations to one. Returns
/// nothing when the file does not parse.
inline std::optional<std::string> format_model_file(std::string_view text) {
  const ParseResult p = parse_model_file(text);
  if (!p.ok()) return std::nullopt;

  enum class Line { Blank, Comment, Code };
  std::vector<std::pair<Line, std::string>> lines;
  bool in_string = false;
  for (std::size_t start = 0; start <= text.size();) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    Line kind = Line::Code;
    if (!in_string && first == std::string_view::npos) kind = Line::Blank;
    else if (!in_string && line.substr(first, 2) == "//") kind = Line::Comment;
    if (kind == Line::Code) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (in_string && line[i] == '\\') ++i;
        else if (line[i] == '"') in_string = !in_string;
        else if (!in_string && line.compare(i, 2, "//") == 0) break;
      }
    }
    lines.emplace_back(kind, std::string(kind == Line::Comment ? line.substr(first) : line));
    if (end == text.size()) break;
    start = end + 1;
  }

  std::string out;
  std::size_t next = 0;  // first source line not yet considered
  auto flush = [&](std::size_t upto) {
    bool blank = false;
    for (; next < upto && next < lines.size(); ++next) {
      const auto& [kind, content] = lines[next];
      if (kind == Line::Blank) blank = !out.empty();
      if (kind != Line::Comment) continue;
      if (blank) out += "\n";
      blank = false;
      out += content + "\n";
    }
    if (blank) out += "\n";
  };
  for (const auto& d : p.ast.declarations) {
    flush(d.span.line - 1);
    out += render_declaration(d) + "\n";
    next = std::max(next, d.span.line);
  }
  flush(lines.size());
  while (out.size() >= 2 && out[out.size() - 1] == '\n' && out[out.size() - 2] == '\n') out.pop_back();
  return out;
}

}  // namespace desiree
