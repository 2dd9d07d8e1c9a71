#include <gtest/gtest.h>

#include <random>

#include "elkbc/reasoner.hpp"
#include "oracles.hpp"

namespace elkbc {
namespace {

Theory appendix_e() { return load_normalized_file(ELKBC_TEST_DATA_DIR "/appendix_e.nf"); }

ConceptId cid(const Theory& t, std::string_view name) { return *t.signature().concepts.find(name); }

std::vector<ConceptId> ids(const Theory& t, std::initializer_list<std::string_view> names) {
  std::vector<ConceptId> out;
  for (auto n : names) out.push_back(cid(t, n));
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Classify, AppendixHierarchy) {
  const Theory t = appendix_e();
  const auto s = classify(t).subsumption;
  EXPECT_EQ(s.superclasses(cid(t, "{P}")), ids(t, {"{P}", "B", "owl:Thing"}));
  EXPECT_EQ(s.superclasses(cid(t, "{Q}")), ids(t, {"{Q}", "A", "owl:Thing"}));
  EXPECT_EQ(s.superclasses(kBottom).size(), 8u);
  EXPECT_EQ(s.superclasses(kTop), std::vector<ConceptId>{kTop});
  EXPECT_TRUE(s.is_subclass(cid(t, "{P}"), cid(t, "B")));
  EXPECT_TRUE(s.is_subclass(cid(t, "A"), cid(t, "A")));
  EXPECT_FALSE(s.is_subclass(cid(t, "A"), cid(t, "{P}")));
  EXPECT_THROW(s.is_subclass(0, 42), std::out_of_range);
}

TEST(Classify, HierarchyDumpMatchesGoldenTable) {
  const Theory t = appendix_e();
  const std::string dump = format_hierarchy(classify(t).subsumption, t.signature());
  std::size_t lines = 0;
  for (char c : dump) lines += c == '\n';
  // 8 (⊥) + 3 + 3 + 2 * 4 + 1
  EXPECT_EQ(lines, 23u);
  EXPECT_NE(dump.find("{P}\tB\n"), std::string::npos);
  EXPECT_EQ(dump.find("A\t{Q}\n"), std::string::npos);
}

TEST(Classify, TopOnlySubsumesItself) {
  const Theory t = parse_normalized("GCI0 A B\nGCI2 B r C\n");
  EXPECT_EQ(classify(t).subsumption.superclasses(kTop), std::vector<ConceptId>{kTop});
}

TEST(Classify, UnsatisfiabilityPropagatesBackwardsOverLinks) {
  const Theory t = parse_normalized("GCI2 A r B\nGCI0_BOT B\nGCI0 C A\n");
  const auto s = classify(t).subsumption;
  EXPECT_TRUE(s.unsatisfiable(cid(t, "A")));
  EXPECT_TRUE(s.unsatisfiable(cid(t, "C")));
  EXPECT_TRUE(s.is_subclass(cid(t, "C"), cid(t, "B")));
  EXPECT_EQ(s.unsatisfiable_concepts().size(), 4u);  // ⊥, A, B, C
}

TEST(Classify, RoleHierarchyAndChains) {
  const Theory t = parse_normalized(
      "GCI2 A r B\nGCI2 B s C\nRI1 r s t\nRI0 t u\nGCI3 u C D\n");
  const auto c = classify(t);
  EXPECT_TRUE(c.subsumption.is_subclass(cid(t, "A"), cid(t, "D")));
  const auto r = *t.signature().roles.find("t");
  const auto u = *t.signature().roles.find("u");
  EXPECT_TRUE(c.roles.is_subrole(r, u));
  EXPECT_TRUE(c.roles.is_subrole(u, u));
  EXPECT_FALSE(c.roles.is_subrole(u, r));
  EXPECT_TRUE(c.links.contains(u, cid(t, "A"), cid(t, "C")));
}

TEST(Classify, IndexInvariants) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    testing::RandomTheorySpec spec;
    spec.named_concepts = 6;
    spec.roles = 2;
    spec.axioms = 12;
    const Theory t = testing::random_theory(rng, spec);
    const auto s = classify(t).subsumption;
    const auto n = static_cast<ConceptId>(t.signature().concept_count());
    for (ConceptId a = 0; a < n; ++a) {
      EXPECT_TRUE(s.is_subclass(a, a));
      EXPECT_TRUE(s.is_subclass(a, kTop));
      EXPECT_TRUE(s.is_subclass(kBottom, a));
      for (auto b : s.superclasses(a)) {
        for (auto e : s.superclasses(b)) EXPECT_TRUE(s.is_subclass(a, e));
        const auto subs = s.subclasses(b);
        EXPECT_TRUE(std::binary_search(subs.begin(), subs.end(), a));
      }
    }
  }
}

TEST(Classify, MatchesNaiveFixpoint) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 250; ++i) {
    testing::RandomTheorySpec spec;
    spec.named_concepts = 6;
    spec.roles = 1 + i % 3;
    spec.axioms = 5 + i % 11;
    const Theory t = testing::random_theory(rng, spec);
    const auto fast = classify(t);
    const auto naive = testing::naive_classify(t);
    for (ConceptId a = 0; a < t.signature().concept_count(); ++a) {
      const auto& stored = fast.subsumption.stored_superclasses(a);
      EXPECT_EQ(std::vector<ConceptId>(naive.supers[a].begin(), naive.supers[a].end()), stored)
          << "theory " << i << " concept " << a << "\n" << serialize_theory(t);
    }
    std::set<std::tuple<RoleId, ConceptId, ConceptId>> links;
    for (const auto& l : fast.links.links()) links.insert({l.role, l.from, l.to});
    EXPECT_EQ(links, naive.links) << serialize_theory(t);
  }
}

TEST(Classify, SoundInEveryFiniteModel) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    testing::RandomTheorySpec spec;
    spec.named_concepts = 2;
    spec.roles = 1;
    spec.axioms = 3 + i % 4;
    const Theory t = testing::random_theory(rng, spec);
    const auto s = classify(t).subsumption;
    const auto n = static_cast<ConceptId>(t.signature().concept_count());
    testing::for_each_model(t, 3, [&](const testing::Interpretation& m) {
      for (ConceptId a = 0; a < n; ++a) {
        for (auto b : s.superclasses(a)) {
          EXPECT_TRUE((m.concepts[a] & ~m.concepts[b]) == 0) << serialize_theory(t);
          ++checked;
        }
      }
    });
  }
  EXPECT_GT(checked, 0);
}

TEST(Classify, Monotone) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    testing::RandomTheorySpec spec;
    spec.named_concepts = 5;
    spec.roles = 2;
    spec.axioms = 10;
    Theory t = testing::random_theory(rng, spec);
    const auto before = classify(t).subsumption;
    Theory bigger = t;
    const Theory extra = testing::random_theory(rng, spec);
    for (const auto& ax : extra.axioms()) bigger.add(ax);
    const auto after = classify(bigger).subsumption;
    for (ConceptId a = 0; a < t.signature().concept_count(); ++a) {
      for (auto b : before.superclasses(a)) EXPECT_TRUE(after.is_subclass(a, b));
    }
  }
}

}  // namespace
}  // namespace elkbc
