#include "desiree/loader.hpp"
#include "desiree/parser.hpp"
#include "desiree/query.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

using namespace desiree;

namespace {

using Ids = std::set<std::string>;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelStore load_sample(const std::string& name) {
  auto r = load_model_text(slurp(std::string(DESIREE_SAMPLES) + "/" + name));
  EXPECT_TRUE(r.ok()) << name;
  return std::move(r.store);
}

Ids run(const ModelStore& m, std::string_view q, QueryOptions o = {}) {
  return eval_query(m, *parse_description(q), o).ids;
}

const char* kFiveSeconds = "<has_quality: Processing_time <has_value_in: <=5 Sec>>";

}  // namespace

TEST(Facts, FunctionSlots) {
  const auto m = load_model_text("f F1 = Search <actor: User> <object: Product>.\n").store;
  const FactGraph g = extract_facts(m);
  EXPECT_TRUE(g.has("F1", "actor", "User"));
  EXPECT_TRUE(g.has("F1", "object", "Product"));
  EXPECT_TRUE(g.has("User", "is_actor_of", "F1"));
  EXPECT_TRUE(g.has("Product", "is_object_of", "F1"));
  for (const auto& f : g.facts) EXPECT_EQ(f.provenance, "F1");
}

TEST(Facts, QualityInstances) {
  const auto m = load_model_text(
                     "f F1 = Search <actor: User>.\n"
                     "qc QC1 = Processing_time(F1) :: [0, 30 (Sec.)].\n")
                     .store;
  const FactGraph g = extract_facts(m);
  EXPECT_TRUE(g.has("F1", "has_quality", "Processing_time@F1"));
  EXPECT_TRUE(g.has("Processing_time@F1", "inheres_in", "F1"));
  EXPECT_TRUE(g.has("Processing_time@F1", "has_value_in", "[0, 30 (Sec.)]"));
  EXPECT_EQ(g.nodes.at("Processing_time@F1").kind, FactNode::Kind::Quality);
}

TEST(Facts, EmptyModel) { EXPECT_TRUE(extract_facts(ModelStore{}).empty()); }

TEST(Facts, InverseNames) {
  EXPECT_EQ(inverse_relation("actor"), "is_actor_of");
  EXPECT_EQ(inverse_relation("is_actor_of"), "actor");
  EXPECT_EQ(inverse_relation("inheres_in"), "has_quality");
  EXPECT_EQ(inverse_relation("has_quality"), "inheres_in");
}

// The five interrelation queries, answers enumerated by hand from the file.
TEST(Query, InterrelationQueries) {
  const auto m = load_sample("meeting_scheduler_clean.dsr");
  const auto expected = nlohmann::json::parse(slurp(std::string(DESIREE_SAMPLES) + "/meeting_scheduler_clean.expected.json"));
  EXPECT_EQ(run(m, "<has_quality: Processing_time>"), (Ids{"F1", "F3"}));
  EXPECT_EQ(run(m, "<inheres_in: {the_system}>"), (Ids{"QC4", "QG2"}));
  EXPECT_EQ(run(m, "<is_actor_of: Schedule>"), (Ids{"Initiator"}));
  EXPECT_EQ(run(m, "<is_object_of: Add>"), (Ids{"Equipment_record", "Meeting_room_record", "User_profile"}));
  EXPECT_EQ(run(m, "<object: Meeting_room_record>"), (Ids{"F5", "F7"}));
  for (const auto& [q, ids] : expected.at("queries").items())
    EXPECT_EQ(run(m, q), ids.get<Ids>()) << q;
}

TEST(Query, ProductSearch) {
  const auto m = load_sample("product_search.dsr");
  EXPECT_EQ(run(m, "<inheres_in: {the_product}>"), (Ids{"QC3", "QG1"}));
  EXPECT_EQ(run(m, "<is_actor_of: F1>"), (Ids{"User"}));
  EXPECT_EQ(run(m, "<is_object_of: F1>"), (Ids{"Product"}));
}

TEST(Query, FiveSecondsBeforeAndAfterScaleUp) {
  EXPECT_TRUE(run(load_sample("product_search.dsr"), kFiveSeconds).empty());
  EXPECT_EQ(run(load_sample("product_search_scaled.dsr"), kFiveSeconds), (Ids{"F1"}));
}

TEST(Query, Fixtures) {
  for (const std::string name : {"product_search", "product_search_scaled"}) {
    const auto m = load_sample(name + ".dsr");
    const auto expected = nlohmann::json::parse(slurp(std::string(DESIREE_SAMPLES) + "/" + name + ".expected.json"));
    for (const auto& [q, ids] : expected.at("queries").items()) EXPECT_EQ(run(m, q), ids.get<Ids>()) << name << " " << q;
  }
}

TEST(Query, CountedSlots) {
  const auto m = load_model_text(
                     "f F1 = Notify <object: Mail> <target: Admin>.\n"
                     "f F2 = Notify <object: Mail> <target: User>.\n"
                     "f F3 = Book <object: Room>.\n")
                     .store;
  EXPECT_EQ(run(m, "<is_target_of: F1 | F2>"), (Ids{"Admin", "User"}));
  EXPECT_EQ(run(m, "<object: >=2 Mail>"), Ids{});
  EXPECT_EQ(run(m, "<object: Mail> <object: <=1 Mail>"), (Ids{"F1", "F2"}));
  // Nodes without object facts satisfy upper bounds vacuously.
  EXPECT_EQ(run(m, "<object: <=1 Mail>"), (Ids{"Admin", "F1", "F2", "F3", "Mail", "Room", "User"}));
  EXPECT_EQ(run(m, "<object: Room> <object: ONLY Room> <target: <=0 Anything>"), (Ids{"F3"}));
  EXPECT_EQ(run(m, "<object: Mail> - <target: Admin>"), (Ids{"F2"}));
}

TEST(Query, UnknownRelation) {
  const auto m = load_sample("product_search.dsr");
  EXPECT_THROW(run(m, "<colour: Red>"), UnknownRelation);
  EXPECT_NO_THROW(run(m, "<is_actor_of: F1>"));
  EXPECT_NO_THROW(run(ModelStore{}, "<has_quality: Processing_time>"));
}

TEST(Query, LenientMarksTentativeMatches) {
  // Minutes and seconds are not converted, so the bound is undecidable.
  const auto m = load_model_text(
                     "f F1 = Register <actor: User>.\n"
                     "qc QC1 = Processing_time(F1) :: [0, 2 (Min.)].\n")
                     .store;
  EXPECT_TRUE(run(m, kFiveSeconds).empty());
  QueryOptions lenient;
  lenient.lenient = true;
  const auto r = eval_query(m, *parse_description(kFiveSeconds), lenient);
  EXPECT_EQ(r.ids, Ids{"F1"});
  EXPECT_EQ(r.tentative, Ids{"F1"});
}

TEST(Query, EmptyModel) { EXPECT_TRUE(run(ModelStore{}, "<inheres_in: {the_product}>").empty()); }

// Adding a conjunct never adds answers.
TEST(QueryProperty, Monotone) {
  const auto m = load_sample("meeting_scheduler_clean.dsr");
  const std::vector<std::string> pool = {
      "<actor: Manager>",         "<actor: Initiator>",      "<object: Information_entity>",
      "<object: User_profile>",   "<target: {the_system}>",  "<has_quality: Processing_time>",
      "<has_quality: Anything>",  "<is_actor_of: Add>",      "<is_object_of: System_function>",
      "<inheres_in: {the_system}>", "<object: ONLY Meeting_room_record>", "<actor: <=0 Anything>"};
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 60; ++i) {
    const std::string a = pool[pick(rng)], b = pool[pick(rng)], c = pool[pick(rng)];
    const Ids base = run(m, a + " " + b);
    const Ids stronger = run(m, a + " " + b + " " + c);
    EXPECT_TRUE(std::includes(base.begin(), base.end(), stronger.begin(), stronger.end())) << a << b << c;
  }
}

// x answers <s: y> exactly when y answers <s^-1: x>.
TEST(QueryProperty, InverseCoherence) {
  const auto m = load_sample("meeting_scheduler_clean.dsr");
  const FactGraph g = extract_facts(m);
  std::vector<std::string> nodes;
  for (const auto& [k, n] : g.nodes)
    if (n.kind == FactNode::Kind::Element || n.kind == FactNode::Kind::Term) nodes.push_back(k);
  auto ref = [&](const std::string& key) {
    const FactNode& n = g.nodes.at(key);
    return n.kind == FactNode::Kind::Element ? key : render_description(*n.desc);
  };
  int checked = 0;
  for (const std::string rel : {"actor", "object", "inheres_in"}) {
    const std::string inv = inverse_relation(rel);
    for (const auto& y : nodes) {
      const Ids forward = run(m, "<" + rel + ": " + ref(y) + ">");
      for (const auto& x : nodes) {
        if (!g.has(x, rel, y)) continue;
        ++checked;
        EXPECT_TRUE(forward.count(x)) << x << " " << rel << " " << y;
        EXPECT_TRUE(run(m, "<" + inv + ": " + ref(x) + ">").count(y)) << y << " " << inv << " " << x;
      }
      for (const auto& x : forward) {
        // Every answer is backed by a fact into something matching y.
        bool backed = false;
        for (const auto& z : g.objects(x, rel)) backed |= run(m, "<" + inv + ": " + ref(x) + ">").count(z) != 0;
        EXPECT_TRUE(backed) << x;
      }
    }
  }
  EXPECT_GT(checked, 15);
}
