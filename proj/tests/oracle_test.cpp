#include "desiree/oracle.hpp"
#include "desiree/parser.hpp"
#include "desiree/reasoner.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <chrono>

using namespace desiree;

namespace {

DescRef d(std::string_view text) { return parse_description(text); }

TBox tbox_of(const gen::PairGenerator::Pair& p) {
  TBox t;
  for (const auto& [l, r] : p.axioms) t.add_axiom(l, r);
  for (const auto& [l, r] : p.disjoint) t.add_disjoint(l, r);
  return t;
}

}  // namespace

TEST(Oracle, Reflexive) {
  const auto r = oracle_subsumes(*d("<s: SOME A> | B"), *d("<s: SOME A> | B"));
  EXPECT_TRUE(r.holds());
  EXPECT_EQ(r.domain_size, 3);
}

TEST(Oracle, SomeIsNotOnly) {
  const auto r = oracle_subsumes(*d("<s: SOME A>"), *d("<s: ONLY A>"));
  ASSERT_EQ(r.kind, OracleResult::Kind::Counterexample);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(r.witness->member(*d("<s: SOME A>"), r.root));
  EXPECT_FALSE(r.witness->member(*d("<s: ONLY A>"), r.root));
  // The witness has an A-filler and a non-A filler.
  const Mask succ = r.witness->successors("s", static_cast<std::size_t>(r.root));
  EXPECT_NE(succ & r.witness->concept_mask("A"), 0u);
  EXPECT_NE(succ & ~r.witness->concept_mask("A"), 0u);
}

TEST(Oracle, IntersectionBelowOperand) {
  EXPECT_TRUE(oracle_subsumes(*d("A & B"), *d("A")).holds());
  EXPECT_EQ(oracle_subsumes(*d("A"), *d("A & B")).kind, OracleResult::Kind::Counterexample);
}

TEST(Oracle, HonoursAxioms) {
  EXPECT_EQ(oracle_subsumes(*d("A"), *d("B")).kind, OracleResult::Kind::Counterexample);
  EXPECT_TRUE(oracle_subsumes(*d("A"), *d("B"), {{d("A"), d("B")}}).holds());
  EXPECT_TRUE(oracle_subsumes(*d("A & B"), *d("Nothing"), {}, {{d("A"), d("B")}}).holds());
}

TEST(Oracle, RegionsOnDerivedGrid) {
  EXPECT_TRUE(oracle_subsumes(*d("<v: [0, 20 (Sec.)]>"), *d("<v: [0, 30 (Sec.)]>")).holds());
  EXPECT_EQ(oracle_subsumes(*d("<v: [0, 30 (Sec.)]>"), *d("<v: [0, 20 (Sec.)]>")).kind,
            OracleResult::Kind::Counterexample);
}

TEST(Oracle, BoundsExceeded) {
  OracleOptions tight;
  tight.bit_budget = 3;
  EXPECT_EQ(oracle_subsumes(*d("<s: A> <t: B> <u: C>"), *d("D"), {}, {}, tight).kind,
            OracleResult::Kind::BoundsExceeded);
}

TEST(Oracle, AgreesWithReasonerOnExamples) {
  for (const auto& [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"<s: A>", "<s: SOME A>"},
           {"<s: A>", "<s: ONLY A>"},
           {"<s: 2 A>", "<s: >=1 A>"},
           {"{a}", "{a, b}"},
           {"A - B", "A"},
           {"(A - B) & B", "Nothing"}}) {
    EXPECT_TRUE(subsumes(TBox{}, *d(a), *d(b)).is_proved()) << a << " " << b;
    EXPECT_TRUE(oracle_subsumes(*d(a), *d(b)).holds()) << a << " " << b;
  }
}

// Structural proofs never contradict enumeration, and every counter-model
// replays through the evaluator.
TEST(Soundness, RandomPairsAgainstOracle) {
  gen::PairGenerator g(20240917);
  int proved = 0, disproved = 0, checked = 0;
  for (int i = 0; i < 300; ++i) {
    const auto p = g.next();
    const TBox t = tbox_of(p);
    const Verdict3 v = subsumes(t, *p.lhs, *p.rhs);
    if (v.is_disproved()) {
      ++disproved;
      ASSERT_TRUE(v.witness);
      EXPECT_TRUE(t.holds_in(*v.witness));
      EXPECT_TRUE(v.witness->member(*p.lhs, v.witness_root));
      EXPECT_FALSE(v.witness->member(*p.rhs, v.witness_root));
    }
    if (!v.is_proved()) continue;
    ++proved;
    const auto o = oracle_subsumes(*p.lhs, *p.rhs, p.axioms, p.disjoint);
    if (o.kind == OracleResult::Kind::BoundsExceeded) continue;
    ++checked;
    EXPECT_TRUE(o.holds()) << render_description(p.lhs) << "  <=  " << render_description(p.rhs)
                           << "\n" << (o.witness ? o.witness->to_json().dump() : "");
  }
  EXPECT_GT(proved, 30);
  EXPECT_GT(checked, 30);
  EXPECT_GT(disproved, 30);
}
