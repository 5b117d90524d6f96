#include "desiree/consistency.hpp"
#include "desiree/loader.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

using namespace desiree;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sample(const std::string& name) { return std::string(DESIREE_SAMPLES) + "/" + name; }

std::vector<std::string> clash_atoms(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& c : check_consistency(load_model_text(text).store)) out.push_back(c.atom);
  return out;
}

const std::string kPattern =
    "axiom System_function :< <object: ONLY Information_entity>.\n"
    "axiom Add :< System_function.\n"
    "f F2 = Add <actor: Manager> <object: User>.\n"
    "da DA1 = User :< Real_world_entity.\n";

}  // namespace

TEST(Consistency, SingleClash) {
  const auto r = load_model_text(kPattern + "disjoint Information_entity, Real_world_entity.\n");
  ASSERT_TRUE(r.ok());
  const auto clashes = check_consistency(r.store);
  ASSERT_EQ(clashes.size(), 1u);
  const Clash& c = clashes[0];
  EXPECT_EQ(c.atom, "User");
  EXPECT_EQ(c.first, "Information_entity");
  EXPECT_EQ(c.second, "Real_world_entity");
  ASSERT_EQ(c.first_chain.size(), 1u);
  EXPECT_EQ(c.first_chain[0].source, "F2");
  ASSERT_EQ(c.second_chain.size(), 1u);
  EXPECT_EQ(c.second_chain[0].source, "DA1");
  EXPECT_EQ(c.related(), (std::vector<std::string>{"User", "DA1", "F2"}));
}

TEST(Consistency, DisjointnessSugarAndDaAgree) {
  const auto sugar = clash_atoms(kPattern + "axiom Information_entity (and) Real_world_entity :< Nothing.\n");
  const auto da = clash_atoms(kPattern + "da DA9 = Information_entity & Real_world_entity :< Nothing.\n");
  EXPECT_EQ(sugar, std::vector<std::string>{"User"});
  EXPECT_EQ(da, sugar);
}

TEST(Consistency, NoDisjointnessNoClash) { EXPECT_TRUE(clash_atoms(kPattern).empty()); }

TEST(Consistency, OnlyReachesThroughAxiomChains) {
  // Add is a System_function only through an intermediate concept.
  const std::string text =
      "axiom System_function :< <object: ONLY Information_entity>.\n"
      "axiom Add :< Admin_function.\naxiom Admin_function :< System_function.\n"
      "f F2 = Add <object: User>.\nda DA1 = User :< Real_world_entity.\n"
      "disjoint Information_entity, Real_world_entity.\n";
  EXPECT_EQ(clash_atoms(text), std::vector<std::string>{"User"});
}

TEST(Consistency, DroppedElementsDoNotContribute) {
  const std::string text = kPattern +
                           "disjoint Information_entity, Real_world_entity.\n"
                           "da DA0 = User :< Information_entity.\n"
                           "resolve(DA1, DA0) [w] = {DA0}.\n";
  EXPECT_TRUE(clash_atoms(text).empty());
}

TEST(Consistency, MeetingSchedulerHasThreeClashes) {
  const auto expected = nlohmann::json::parse(slurp(sample("meeting_scheduler.expected.json")));
  const auto atoms = clash_atoms(slurp(sample("meeting_scheduler.dsr")));
  EXPECT_EQ(atoms, expected.at("clashes").get<std::vector<std::string>>());
  EXPECT_EQ(atoms, (std::vector<std::string>{"Meeting_room", "Room_equipment", "User"}));
}

TEST(Consistency, CleanCorpus) { EXPECT_TRUE(clash_atoms(slurp(sample("meeting_scheduler_clean.dsr"))).empty()); }

TEST(Consistency, DiagnosticsCarryChains) {
  const auto r = load_model_text(kPattern + "disjoint Information_entity, Real_world_entity.\n");
  const auto diags = consistency_diagnostics(check_consistency(r.store));
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, codes::kClash);
  EXPECT_EQ(diags[0].severity, Severity::Error);
  EXPECT_NE(diags[0].message.find("[DA1]"), std::string::npos);
  EXPECT_NE(diags[0].message.find("[F2]"), std::string::npos);
}
