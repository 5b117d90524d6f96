#include "desiree/loader.hpp"
#include "desiree/operators.hpp"

#include <gtest/gtest.h>

using namespace desiree;

namespace {

LoadResult load(const std::string& text) { return load_model_text(text); }

std::vector<std::string> codes_of(const LoadResult& r) {
  std::vector<std::string> out;
  for (const auto& d : r.diagnostics)
    if (d.severity == Severity::Error) out.push_back(d.code);
  return out;
}

bool has_code(const LoadResult& r, std::string_view code) {
  for (const auto& d : r.diagnostics)
    if (d.code == code) return true;
  return false;
}

QualityForm quality(std::string_view body) {
  auto r = parse_model_file("qc X = " + std::string(body) + ".");
  EXPECT_TRUE(r.ok());
  return std::get<QualityForm>(std::get<ElementDecl>(r.ast.declarations.at(0).node).body);
}

QualityForm qg(std::string_view body) {
  auto r = parse_model_file("qg X = " + std::string(body) + ".");
  EXPECT_TRUE(r.ok());
  return std::get<QualityForm>(std::get<ElementDecl>(r.ast.declarations.at(0).node).body);
}

ScaleArgs factors(Rational lo, Rational hi) { return ScaleArgs{std::make_pair(lo, hi)}; }

const std::string kGoals =
    "goal G1 = \"schedule meetings\".\n"
    "goal G2 = \"schedule meetings quickly\".\n"
    "da DA3 = Meeting :< Event.\n"
    "fg FG1 = Meeting :< Scheduled.\n"
    "fg FG2 = Meeting :< Scheduled & Announced.\n"
    "qg QG1 = Security({the_system}) :: Good.\n"
    "ctg CTG1 = Room :< Booked.\n"
    "f F1 = Schedule <object: Meeting>.\n"
    "f F2 = Schedule <object: Meeting> <actor: Initiator>.\n"
    "fc FC1 = F1 :< <actor: ONLY Initiator>.\n"
    "qc QC1 = Processing_time(F1) :: [0, 30 (Sec.)].\n"
    "sc SC1 = Room_record :< Booked_record.\n";

}  // namespace

// Reduce: 1 -> 1..m, same kind plus optional DAs.

TEST(Reduce, GoalIntoGoalAndAssumption) {
  const auto r = load(kGoals + "reduce(G1) [s] = {G2, DA3}.");
  EXPECT_TRUE(codes_of(r).empty());
}

TEST(Reduce, OnlyAssumptionsIsRejected) {
  const auto r = load(kGoals + "reduce(G1) [s] = {DA3}.");
  EXPECT_TRUE(has_code(r, codes::kSigKind));
}

TEST(Reduce, CrossCategoryIsRejected) {
  const auto r = load(kGoals + "reduce(FG1) [s] = {F1}.");
  EXPECT_TRUE(has_code(r, codes::kSigCategory));
}

TEST(Reduce, NeedsOneInput) {
  const auto r = load(kGoals + "reduce(FG1, FG2) [s] = {FG2}.");
  EXPECT_TRUE(has_code(r, codes::kSigArity));
}

// Interpret: 1 -> 1, same kind or a sub-kind of a goal.

TEST(Interpret, GoalIntoFunctionalGoal) {
  EXPECT_TRUE(codes_of(load(kGoals + "interpret(G1) [s] = {FG1}.")).empty());
}

TEST(Interpret, TwoOutputsIsRejected) {
  EXPECT_TRUE(has_code(load(kGoals + "interpret(G1) [s] = {FG1, FG2}."), codes::kSigArity));
}

TEST(Interpret, SpecificationOutputIsRejected) {
  EXPECT_TRUE(has_code(load(kGoals + "interpret(FG1) [s] = {F1}."), codes::kSigCategory));
}

// Focus: 1 -> 1..m over the quality or subject hierarchy.

TEST(Focus, SubjectPart) {
  ModelStore m;
  m.part_of.emplace_back("data_storage", "the_system");
  m.part_of.emplace_back("user_interface", "the_system");
  const auto c = construct_focus(m, qg("Security({the_system}) :: Good"), {parse_description("data_storage")});
  ASSERT_EQ(c.outputs.size(), 1u);
  EXPECT_EQ(c.outputs[0], qg("Security({data_storage}) :: Good"));
  EXPECT_EQ(c.strength, Strength::Weaken);
}

TEST(Focus, FullDimensionSetEquates) {
  ModelStore m;
  for (const char* d : {"Confidentiality", "Integrity", "Availability"}) m.dimension_of.emplace_back(d, "Security");
  const auto c = construct_focus(m, qg("Security({the_system}) :: Good"),
                                 {atom("Confidentiality"), atom("Integrity"), atom("Availability")});
  ASSERT_EQ(c.outputs.size(), 3u);
  EXPECT_EQ(c.outputs[1], qg("Integrity({the_system}) :: Good"));
  EXPECT_EQ(c.strength, Strength::Equate);
  EXPECT_EQ(construct_focus(m, qg("Security({the_system}) :: Good"), {atom("Integrity")}).strength,
            Strength::Weaken);
}

TEST(Focus, EmptyTargetsAndStrangersAreRejected) {
  ModelStore m;
  EXPECT_THROW(construct_focus(m, qg("Security({the_system}) :: Good"), {}), ConstructError);
  try {
    construct_focus(m, qg("Security({the_system}) :: Good"), {atom("Weather")});
    FAIL();
  } catch (const ConstructError& e) {
    EXPECT_EQ(e.kind(), ConstructError::Kind::NotInHierarchy);
  }
}

TEST(Focus, LoadedSignature) {
  const std::string base = kGoals + "part data_storage of the_system.\n";
  const auto ok = load(base + "focus(QG1, {data_storage}) [w] = {QG2}.");
  EXPECT_TRUE(codes_of(ok).empty());
  const Element* out = ok.store.find("QG2");
  ASSERT_TRUE(out);
  EXPECT_EQ(out->constructed_by, std::optional<std::string>("A1"));
  EXPECT_EQ(out->kind, ElementKind::QG);
  EXPECT_TRUE(has_code(load(base + "focus(F1, {data_storage}) [w] = {QG1}."), codes::kSigKind));
  EXPECT_TRUE(has_code(load(base + "focus(QG1, {data_storage}) [w] = {QG2, QG1}."), codes::kSigArity));
}

// Scale: 1 -> 1.

TEST(Scale, DownAndUpReproduceTheExamples) {
  const auto in = quality("Processing_time(F1) :: [0, 30 (Sec.)]");
  const auto down = construct_scale(ModelStore{}, in, factors(1, Rational(6, 5)), OperatorKind::ScaleDown);
  EXPECT_EQ(down.outputs.at(0).region, RegionExpr(Interval{Rational(0), Rational(36), "Sec"}));
  EXPECT_EQ(down.strength, Strength::Weaken);
  const auto up = construct_scale(ModelStore{}, in, factors(1, Rational(2, 3)), OperatorKind::ScaleUp);
  EXPECT_EQ(up.outputs.at(0).region, RegionExpr(Interval{Rational(0), Rational(20), "Sec"}));
  EXPECT_EQ(up.strength, Strength::Strengthen);
}

TEST(Scale, IdentityEquates) {
  const auto in = quality("Processing_time(F1) :: [0, 30 (Sec.)]");
  const auto c = construct_scale(ModelStore{}, in, factors(1, 1), OperatorKind::ScaleDown);
  EXPECT_EQ(c.outputs.at(0), in);
  EXPECT_EQ(c.strength, Strength::Equate);
}

TEST(Scale, RejectsWrongFactorsAndRegions) {
  const auto in = quality("Processing_time(F1) :: [10, 30 (Sec.)]");
  auto kind_of = [&](const ScaleArgs& a, OperatorKind op, const QualityForm& q) {
    try {
      construct_scale(ModelStore{}, q, a, op);
    } catch (const ConstructError& e) {
      return e.kind();
    }
    return ConstructError::Kind::EmptyTargets;  // no error
  };
  using K = ConstructError::Kind;
  EXPECT_EQ(kind_of(factors(1, Rational(1, 2)), OperatorKind::ScaleDown, in), K::FactorOutOfRange);
  EXPECT_EQ(kind_of(factors(1, 2), OperatorKind::ScaleUp, in), K::FactorOutOfRange);
  EXPECT_EQ(kind_of(factors(4, 1), OperatorKind::ScaleUp, in), K::ShiftRejected);
  EXPECT_EQ(kind_of(ScaleArgs{std::string("Nearly")}, OperatorKind::ScaleDown, in), K::RegionKindMismatch);
  EXPECT_EQ(kind_of(factors(1, 2), OperatorKind::ScaleDown, qg("Speed(F1) :: Fast")), K::RegionKindMismatch);
  EXPECT_EQ(kind_of(ScaleArgs{std::string("Very")}, OperatorKind::ScaleDown, qg("Speed(F1) :: Fast")),
            K::FactorOutOfRange);
}

TEST(Scale, QualitativeFactorPrefixesTheRegion) {
  const auto c = construct_scale(ModelStore{}, qg("Speed(F1) :: Fast"), ScaleArgs{std::string("Nearly")},
                                 OperatorKind::ScaleDown);
  EXPECT_EQ(c.outputs.at(0).region, RegionExpr(NamedRegion{"Nearly_Fast"}));
}

TEST(Scale, LoadedSignature) {
  const auto ok = load(kGoals + "scale_down(QC1, (1, 1.2)) [w] = {QC2}.");
  EXPECT_TRUE(codes_of(ok).empty());
  EXPECT_TRUE(has_code(load(kGoals + "scale_down(FG1, (1, 1.2)) [w] = {QC1}."), codes::kSigKind));
  EXPECT_TRUE(has_code(load(kGoals + "scale_up(QC1, (1, 2/3)) [s] = {}."), codes::kSigArity));
  const auto mismatch = load(kGoals + "qc QC9 = Processing_time(F1) :: [0, 40 (Sec.)].\n"
                                      "scale_down(QC1, (1, 1.2)) [w] = {QC9}.");
  EXPECT_TRUE(has_code(mismatch, codes::kSigOutputMismatch));
}

// de-Universalize: 1 -> 1.

TEST(DeUniversalize, AppendsPctEntries) {
  const auto in = qg("Processing_time(File_search) :: Fast");
  const auto c = construct_deuniversalize(in, {"X", {"inheres_in"}, Rational(4, 5)});
  ASSERT_EQ(c.outputs.at(0).pct_chain.size(), 1u);
  EXPECT_EQ(c.outputs[0].pct_chain[0].pct, Rational(4, 5));
  EXPECT_EQ(c.strength, Strength::Weaken);

  const auto nested_in = qg("Processing_time(<run_of: File_search>) :: Fast");
  const auto first = construct_deuniversalize(nested_in, {"X", {"inheres_in"}, Rational(4, 5)});
  const auto second =
      construct_deuniversalize(first.outputs[0], {"F", {"inheres_in", "run_of"}, Rational(4, 5)});
  EXPECT_EQ(second.outputs[0].pct_chain.size(), 2u);

  const auto full = construct_deuniversalize(in, {"X", {"inheres_in"}, Rational(1)});
  EXPECT_EQ(full.strength, Strength::Equate);
  EXPECT_TRUE(full.outputs[0].pct_chain[0].vacuous());
}

TEST(DeUniversalize, RejectsBadPathsAndPercentages) {
  const auto in = qg("Processing_time(File_search) :: Fast");
  EXPECT_THROW(construct_deuniversalize(in, {"X", {"inheres_in", "run_of"}, Rational(4, 5)}), ConstructError);
  EXPECT_THROW(construct_deuniversalize(in, {"X", {"observed_by"}, Rational(4, 5)}), ConstructError);
  EXPECT_THROW(construct_deuniversalize(in, {"X", {"inheres_in"}, Rational(0)}), ConstructError);
  EXPECT_THROW(construct_deuniversalize(in, {"X", {"inheres_in"}, Rational(3, 2)}), ConstructError);
}

TEST(DeUniversalize, LoadedSignature) {
  EXPECT_TRUE(codes_of(load(kGoals + "u(?X, QC1, <inheres_in: ?X>, 80%) [w] = {QC2}.")).empty());
  EXPECT_TRUE(has_code(load(kGoals + "u(?X, QC1, <inheres_in: ?X>, 80%) [w] = {QC2, QC3}."), codes::kSigArity));
  EXPECT_TRUE(has_code(load(kGoals + "u(?X, QC1, <observed_by: ?X>, 80%) [w] = {QC2}."), codes::kSigArgument));
}

// Observe: 1 -> 1, output is a QC.

TEST(Observe, SetsTheObserverOnce) {
  const auto in = qg("Style({the_interface}) :: Simple");
  const auto c = construct_observe(in, {atom("Surveyed_user")});
  EXPECT_TRUE(same(c.outputs.at(0).observer, atom("Surveyed_user")));
  EXPECT_EQ(c.strength, Strength::Strengthen);
  try {
    construct_observe(c.outputs[0], {atom("Expert")});
    FAIL();
  } catch (const ConstructError& e) {
    EXPECT_EQ(e.kind(), ConstructError::Kind::ObserverAlreadySet);
  }
  const auto u = construct_deuniversalize(c.outputs[0], {"O", {"observed_by"}, Rational(4, 5)});
  EXPECT_EQ(u.outputs.at(0).pct_chain.at(0).path, std::vector<std::string>{"observed_by"});
}

TEST(Observe, LoadedSignature) {
  const std::string base = kGoals + "qg QG5 = Style({the_interface}) :: Simple.\n";
  const auto ok = load(base + "observe(QG5, Surveyed_user) [s] = {QC5}.");
  EXPECT_TRUE(codes_of(ok).empty());
  EXPECT_EQ(ok.store.find("QC5")->kind, ElementKind::QC);
  EXPECT_TRUE(has_code(load(base + "qg QG6 = Style({the_interface}) :: Simple.\n"
                                   "observe(QG5, Surveyed_user) [s] = {QG6}."),
                       codes::kSigKind));
  EXPECT_TRUE(has_code(load(base + "observe(QG5, Surveyed_user) [s] = {QC5}.\n"
                                   "observe(QC5, Expert) [s] = {QC6}."),
                       codes::kSigArgument));
}

// Resolve: 2..n -> 0..m.

TEST(Resolve, DropsInputsNotKept) {
  const auto r = load(kGoals + "resolve(G1, G2) [w] = {G2}.");
  EXPECT_TRUE(codes_of(r).empty());
  EXPECT_FALSE(r.store.find("G1")->active);
  EXPECT_TRUE(r.store.find("G2")->active);
}

TEST(Resolve, NeedsTwoInputs) {
  EXPECT_TRUE(has_code(load(kGoals + "resolve(G1) [w] = {G2}."), codes::kSigArity));
}

TEST(Resolve, DroppedElementsCannotBeReused) {
  const auto r = load(kGoals + "resolve(G1, G2) [w] = {G2}.\nreduce(G1) [s] = {G2}.");
  EXPECT_TRUE(has_code(r, codes::kSigDroppedInput));
}

// Operationalize: the four overloads.

TEST(Operationalize, FunctionalGoal) {
  EXPECT_TRUE(codes_of(load(kGoals + "operationalize(FG1) [s] = {F1, FC1, DA3}.")).empty());
  EXPECT_TRUE(has_code(load(kGoals + "operationalize(FG1) [s] = {QC1}."), codes::kSigKind));
}

TEST(Operationalize, QualityGoal) {
  EXPECT_TRUE(codes_of(load(kGoals + "operationalize(QG1) [s] = {QC1, F1, FC1, DA3}.")).empty());
  EXPECT_TRUE(has_code(load(kGoals + "operationalize(QG1) [s] = {SC1}."), codes::kSigKind));
}

TEST(Operationalize, ContentGoal) {
  EXPECT_TRUE(codes_of(load(kGoals + "operationalize(CTG1) [s] = {SC1, DA3}.")).empty());
  EXPECT_TRUE(has_code(load(kGoals + "operationalize(CTG1) [s] = {F1}."), codes::kSigKind));
}

TEST(Operationalize, PlainGoalOnlyToAssumptions) {
  EXPECT_TRUE(codes_of(load(kGoals + "operationalize(G1) [w] = {DA3}.")).empty());
  EXPECT_TRUE(has_code(load(kGoals + "operationalize(G1) [w] = {F1}."), codes::kSigKind));
}

TEST(Operationalize, SpecificationInputIsRejected) {
  EXPECT_TRUE(has_code(load(kGoals + "operationalize(F1) [s] = {FC1}."), codes::kSigCategory));
}

TEST(Validate, DanglingReferences) {
  EXPECT_TRUE(has_code(load(kGoals + "reduce(G1) [s] = {G9}."), codes::kDanglingReference));
  EXPECT_TRUE(has_code(load(kGoals + "conflict {G1, G9}."), codes::kDanglingReference));
}

TEST(Validate, ConstructedOutputDiffersOnlyInTheConstructedAspect) {
  const auto in = quality("Processing_time(F1) :: [0, 30 (Sec.)]");
  auto out = construct_scale(ModelStore{}, in, factors(1, 2), OperatorKind::ScaleDown).outputs.at(0);
  EXPECT_NE(out.region, in.region);
  out.region = in.region;
  EXPECT_EQ(out, in);
}

TEST(Validate, ConstructorOnNonQualityInputWithUndeclaredOutput) {
  const std::string base = kGoals + "part data_storage of the_system.\n";
  EXPECT_TRUE(has_code(load(base + "focus(F1, {data_storage}) [w] = {QG9}."), codes::kSigKind));
  EXPECT_TRUE(has_code(load(kGoals + "scale_down(FG1, (1, 1.2)) [w] = {QC9}."), codes::kSigKind));
  EXPECT_TRUE(has_code(load(kGoals + "observe(FG1, Surveyed_user) [s] = {QC9}."), codes::kSigKind));
}
