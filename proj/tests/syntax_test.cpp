#include "desiree/parser.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

using namespace desiree;

namespace {

std::vector<TokenKind> kinds(const std::vector<Token>& toks) {
  std::vector<TokenKind> out;
  for (const auto& t : toks) out.push_back(t.kind);
  return out;
}

ElementDecl only_element(const ParseResult& r) {
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.ast.declarations.size(), 1u);
  return std::get<ElementDecl>(r.ast.declarations.at(0).node);
}

}  // namespace

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, SlotDescription) {
  using K = TokenKind;
  EXPECT_EQ(kinds(tokenize("Search <actor: User>")),
            (std::vector<K>{K::Ident, K::Lt, K::Ident, K::Colon, K::Ident, K::Gt}));
}

TEST(Tokenize, IntervalWithUnit) {
  using K = TokenKind;
  const auto toks = tokenize("[0, 30 (Sec.)]");
  ASSERT_EQ(kinds(toks), (std::vector<K>{K::LBracket, K::Number, K::Comma, K::Number, K::Unit,
                                          K::RBracket}));
  EXPECT_EQ(toks[1].value, Rational(0));
  EXPECT_EQ(toks[3].value, Rational(30));
  EXPECT_EQ(toks[4].text, "Sec.");
}

TEST(Tokenize, NumbersAndPercent) {
  const auto toks = tokenize("1.2 2/3 80%");
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[0].value, Rational(6, 5));
  EXPECT_EQ(toks[1].value, Rational(2, 3));
  EXPECT_EQ(toks[2].kind, TokenKind::Percent);
  EXPECT_EQ(toks[2].value, Rational(4, 5));
}

TEST(Tokenize, ProjectionDotVersusTerminator) {
  using K = TokenKind;
  EXPECT_EQ(kinds(tokenize("F1.object")), (std::vector<K>{K::Ident, K::Dot, K::Ident}));
  EXPECT_EQ(kinds(tokenize("A :< B.")), (std::vector<K>{K::Ident, K::SubsumedBy, K::Ident, K::Period}));
}

TEST(Tokenize, Synonyms) {
  using K = TokenKind;
  EXPECT_EQ(kinds(tokenize("A (and) B (or) C")),
            (std::vector<K>{K::Ident, K::Amp, K::Ident, K::Bar, K::Ident}));
  EXPECT_EQ(kinds(tokenize("A \xE2\x88\xA9 B")), (std::vector<K>{K::Ident, K::Amp, K::Ident}));
}

TEST(Tokenize, CommentsSkipped) {
  EXPECT_EQ(tokenize("A // comment\nB").size(), 2u);
}

TEST(Tokenize, SpansAreOneBased) {
  const auto toks = tokenize("A\n  <b: C>");
  EXPECT_EQ(toks[1].span.line, 2u);
  EXPECT_EQ(toks[1].span.column, 3u);
  EXPECT_EQ(toks[1].span.offset, 4u);
}

TEST(Tokenize, UnterminatedString) {
  try {
    tokenize("goal G = \"abc");
    FAIL() << "expected LexError";
  } catch (const LexError& e) {
    EXPECT_EQ(e.span().offset, 9u);
  }
}

TEST(Tokenize, UnterminatedBracket) {
  try {
    tokenize("x [0, 3");
    FAIL() << "expected LexError";
  } catch (const LexError& e) {
    EXPECT_EQ(e.span().offset, 2u);
  }
}

TEST(ParseDescription, JuxtapositionNestsLeft) {
  const auto d = parse_description("Backup <object: Data> <when: Weekday>");
  const auto expected =
      conj(conj(atom("Backup"), slot("object", atom("Data"))), slot("when", atom("Weekday")));
  EXPECT_TRUE(same(d, expected));
}

TEST(ParseDescription, Enumeration) {
  EXPECT_TRUE(same(parse_description("{Mon, Wed, Fri}"), enumeration({"Mon", "Wed", "Fri"})));
}

TEST(ParseDescription, Projection) {
  EXPECT_TRUE(same(parse_description("F1.object"), projection(atom("F1"), "object")));
}

TEST(ParseDescription, Precedence) {
  // Diff < Or < And < Proj
  const auto d = parse_description("A B | C - D.s");
  const auto expected =
      diff(disj(conj(atom("A"), atom("B")), atom("C")), projection(atom("D"), "s"));
  EXPECT_TRUE(same(d, expected));
  EXPECT_TRUE(same(parse_description("A & (B | C)"), conj(atom("A"), disj(atom("B"), atom("C")))));
}

TEST(ParseDescription, Modifiers) {
  EXPECT_TRUE(same(parse_description("<register_for: >=3 Class>"),
                   slot("register_for", CardModifier::at_least(3), atom("Class"))));
  EXPECT_TRUE(same(parse_description("<s: <=2 A>"), slot("s", CardModifier::at_most(2), atom("A"))));
  EXPECT_TRUE(same(parse_description("<s: 2 A>"), slot("s", CardModifier::exactly(2), atom("A"))));
  EXPECT_TRUE(same(parse_description("<s: SOME A>"), slot("s", CardModifier::some(), atom("A"))));
  EXPECT_TRUE(same(parse_description("<s: ONLY A>"), slot("s", CardModifier::only(), atom("A"))));
}

TEST(ParseDescription, RegionFillers) {
  const auto d = parse_description("Student <gender: Male> <age: >=20>");
  const auto expected = conj(conj(atom("Student"), slot("gender", atom("Male"))),
                             slot("age", region(Interval{Rational(20), std::nullopt, ""})));
  EXPECT_TRUE(same(d, expected));

  const auto q = parse_description("<has_value_in: <=5 Sec>");
  EXPECT_TRUE(same(q, slot("has_value_in", region(Interval{Rational(0), Rational(5), "Sec"}))));

  const auto n = parse_description("<has_value_in: Fast>");
  EXPECT_TRUE(same(n, slot("has_value_in", region(NamedRegion{"Fast"}))));
}

TEST(ParseDescription, UnitsNormalize) {
  EXPECT_TRUE(same(parse_description("[0, 30 (Sec.)]"), parse_description("[0, 30 Sec]")));
}

TEST(ParseDescription, PercentRange) {
  EXPECT_TRUE(same(parse_description("[80%, 100%]"),
                   region(PercentRange{Rational(4, 5), Rational(1)})));
}

TEST(ParseDescription, RegionConceptMixIsError) {
  try {
    parse_description("A - [0, 3]");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), codes::kRegionMix);
  }
}

TEST(ParseDescription, ComputedBoundNotSupported) {
  try {
    parse_description("<s: >=count(Class) Class>");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), codes::kNotSupported);
  }
}

TEST(ParseDescription, ErrorCarriesExpectedSet) {
  try {
    parse_description("<s A>");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.expected(), std::vector<std::string>{"':'"});
    EXPECT_EQ(e.span().offset, 3u);
  }
}

TEST(ParseDescription, EnumerationRules) {
  EXPECT_THROW(parse_description("{}"), ParseError);
  EXPECT_THROW(parse_description("{Mon, Mon}"), ParseError);
}

TEST(RenderDescription, Examples) {
  EXPECT_EQ(render_description(atom("User")), "User");
  EXPECT_EQ(render_description(slot("when", disj(atom("Weekday"), enumeration({"Sat"})))),
            "<when: Weekday | {Sat}>");
  EXPECT_EQ(render_description(parse_description("[0, 30 (Sec.)]")), "[0, 30 (Sec.)]");
  EXPECT_EQ(render_description(parse_description("A - (B - C)")), "A - (B - C)");
  EXPECT_EQ(render_description(parse_description("(A | B).s")), "(A | B).s");
}

TEST(RenderDescription, RoundTripProperty) {
  gen::AstGenerator gen(20240601);
  for (int i = 0; i < 1000; ++i) {
    const DescRef d = gen.description(4);
    const std::string text = render_description(*d);
    DescRef back;
    ASSERT_NO_THROW(back = parse_description(text)) << text;
    ASSERT_TRUE(same(d, back)) << text << "\n  reparsed: " << render_description(*back);
  }
}

TEST(RenderDescription, Deterministic) {
  const std::string text = "Book <object: Airline_ticket | {t1}> - <at: ONLY Room>";
  EXPECT_TRUE(same(parse_description(text), parse_description(text)));
}

TEST(ParseModelFile, FunctionalGoal) {
  const auto r = parse_model_file("fg FG1 = Student_record :< Managed.");
  const auto e = only_element(r);
  EXPECT_EQ(e.kind, ElementKind::FG);
  EXPECT_EQ(e.id, "FG1");
  const auto& form = std::get<SubsumptionForm>(e.body);
  EXPECT_TRUE(same(form.lhs, atom("Student_record")));
  EXPECT_TRUE(same(form.rhs, atom("Managed")));
}

TEST(ParseModelFile, DuplicateId) {
  const auto r = parse_model_file("goal G1 = \"a\".\ngoal G1 = \"b\".");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, codes::kDuplicateId);
  EXPECT_EQ(r.diagnostics[0].span.line, 2u);
}

TEST(ParseModelFile, EmptyFile) {
  const auto r = parse_model_file("");
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.ast.declarations.empty());
}

TEST(ParseModelFile, QualityForms) {
  const auto r = parse_model_file(
      "qc QC1 = Processing_time(F1) :: [0, 30 (Sec.)].\n"
      "qc QC2 = Style({the_interface}) :: Simple <observed_by: Surveyed_user> "
      "pct(?S, <observed_by: ?S>, 80%).\n"
      "qg QG3 = Processing_time(<run_of: File_search>) :: Fast "
      "pct(?X, <inheres_in: ?X>, 80%) pct(?F, <inheres_in: <run_of: ?F>>, 90%).");
  ASSERT_TRUE(r.ok()) << r.diagnostics[0].message;
  ASSERT_EQ(r.ast.declarations.size(), 3u);
  const auto& q1 = std::get<QualityForm>(std::get<ElementDecl>(r.ast.declarations[0].node).body);
  EXPECT_EQ(q1.quality, "Processing_time");
  EXPECT_EQ(q1.region, RegionExpr(Interval{Rational(0), Rational(30), "Sec"}));
  const auto& q2 = std::get<QualityForm>(std::get<ElementDecl>(r.ast.declarations[1].node).body);
  EXPECT_TRUE(same(q2.observer, atom("Surveyed_user")));
  ASSERT_EQ(q2.pct_chain.size(), 1u);
  EXPECT_EQ(q2.pct_chain[0].path, std::vector<std::string>{"observed_by"});
  const auto& q3 = std::get<QualityForm>(std::get<ElementDecl>(r.ast.declarations[2].node).body);
  ASSERT_EQ(q3.pct_chain.size(), 2u);
  EXPECT_EQ(q3.pct_chain[1].path, (std::vector<std::string>{"inheres_in", "run_of"}));
  EXPECT_EQ(q3.pct_chain[1].pct, Rational(9, 10));
}

TEST(ParseModelFile, Applications) {
  const auto r = parse_model_file(
      "reduce(G1) [s] = {G2, DA3}.\n"
      "A7: scale_down(QC1, (1, 1.2)) [w] = {QC2}.\n"
      "focus(QG1, {data_storage}) [w] = {QG2}.\n"
      "u(?X, QG3, <inheres_in: ?X>, 80%) [w] = {QG4}.\n"
      "observe(QG5, Surveyed_user) [s] = {QC5}.\n"
      "resolve({G1, G2}) [w] = {G2}.\n"
      "resolve(G3, G4) = {}.");
  ASSERT_TRUE(r.ok()) << r.diagnostics[0].message;
  ASSERT_EQ(r.ast.declarations.size(), 7u);
  const auto& reduce = std::get<ApplicationDecl>(r.ast.declarations[0].node);
  EXPECT_EQ(reduce.op, OperatorKind::Reduce);
  EXPECT_EQ(reduce.outputs, (std::vector<std::string>{"G2", "DA3"}));
  EXPECT_EQ(reduce.strength, Strength::Strengthen);
  const auto& scale = std::get<ApplicationDecl>(r.ast.declarations[1].node);
  EXPECT_EQ(scale.label, std::optional<std::string>("A7"));
  const auto& factors = std::get<std::pair<Rational, Rational>>(std::get<ScaleArgs>(scale.args).factor);
  EXPECT_EQ(factors.second, Rational(6, 5));
  const auto& u = std::get<ApplicationDecl>(r.ast.declarations[3].node);
  EXPECT_EQ(u.op, OperatorKind::DeUniversalize);
  EXPECT_EQ(std::get<DeUniversalizeArgs>(u.args).pct, Rational(4, 5));
  const auto& res = std::get<ApplicationDecl>(r.ast.declarations[6].node);
  EXPECT_FALSE(res.strength.has_value());
  EXPECT_TRUE(res.outputs.empty());
}

TEST(ParseModelFile, OtherDeclarations) {
  const auto r = parse_model_file(
      "axiom Airline_ticket :< Ticket.\n"
      "axiom Authorized (and) Unauthorized :< Nothing.\n"
      "disjoint Information_entity, Real_world_entity.\n"
      "dimension Integrity of Security.\n"
      "part data_storage of the_system.\n"
      "factor Nearly weakens.\n"
      "conflict {G1, G2}.");
  ASSERT_TRUE(r.ok()) << r.diagnostics[0].message;
  EXPECT_EQ(r.ast.declarations.size(), 7u);
  const auto& ax = std::get<AxiomDecl>(r.ast.declarations[1].node);
  EXPECT_TRUE(same(ax.lhs, conj(atom("Authorized"), atom("Unauthorized"))));
}

TEST(ParseModelFile, RecoversAfterError) {
  const auto r = parse_model_file("goal G1 = .\ngoal G2 = \"ok\".\nfg X = A :< .\nf F = A <s: B>.");
  EXPECT_EQ(r.diagnostics.size(), 2u);
  EXPECT_EQ(r.ast.declarations.size(), 2u);
  for (const auto& d : r.diagnostics) EXPECT_LE(d.span.offset, 60u);
}

TEST(ParseModelFile, RenderIsIdempotent) {
  const std::string text =
      "fg FG1 = Student_record :< Managed.\n"
      "f F1 = Search <actor: User> <object: Product>.\n"
      "qc QC1 = Processing_time(F1) :: [0, 30 (Sec.)] pct(?X, <inheres_in: ?X>, 80%).\n"
      "scale_up(QC1, (1, 1/6)) [s] = {QC2}.\n"
      "goal G1 = \"say \\\"hi\\\"\".\n";
  const auto first = parse_model_file(text);
  ASSERT_TRUE(first.ok());
  const std::string once = render_model_file(first.ast);
  const auto second = parse_model_file(once);
  ASSERT_TRUE(second.ok()) << once;
  EXPECT_EQ(render_model_file(second.ast), once);
}
