#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "elkbc/ranking.hpp"
#include "elkbc/trainer.hpp"
#include "rank_oracle.hpp"

namespace elkbc {
namespace {

using testing::ScoreMatrix;

Theory appendix_e() { return load_normalized_file(ELKBC_TEST_DATA_DIR "/appendix_e.nf"); }

ScoreFn table(const std::vector<std::vector<double>>& scores, const std::vector<NormalizedAxiom>& test) {
  return [&scores, &test](const NormalizedAxiom& ax, ConceptId c) {
    const auto i = std::find(test.begin(), test.end(), ax) - test.begin();
    return scores.at(i).at(c);
  };
}

std::vector<ConceptId> iota_pool(std::size_t n) {
  std::vector<ConceptId> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<ConceptId>(i);
  return p;
}

void expect_same(const Metrics& a, const Metrics& b) {
  EXPECT_EQ(a.hits10, b.hits10);
  EXPECT_EQ(a.hits100, b.hits100);
  EXPECT_EQ(a.macro_mr, b.macro_mr);
  EXPECT_EQ(a.micro_mr, b.micro_mr);
  EXPECT_EQ(a.macro_auc, b.macro_auc);
  EXPECT_EQ(a.micro_auc, b.micro_auc);
}

TEST(MidRank, StrictlyBestIsRankOne) {
  const std::vector<double> s{0.1, 0.5, 0.9};
  EXPECT_EQ(mid_rank(s, 0), 1u);
  EXPECT_EQ(mid_rank(s, 2), 3u);
  EXPECT_DOUBLE_EQ(rank_auc(1, 3), 1.0);
  EXPECT_DOUBLE_EQ(rank_auc(3, 3), 0.0);
  EXPECT_DOUBLE_EQ(rank_auc(1, 1), 1.0);
}

TEST(MidRank, AllTiedGivesTheMiddle) {
  for (std::size_t n : {1u, 2u, 5u, 8u}) {
    const std::vector<double> s(n, 0.25);
    EXPECT_EQ(mid_rank(s, 0), 1 + (n - 1) / 2) << n;
    EXPECT_EQ(mid_rank(s, n - 1), 1 + (n - 1) / 2) << n;
  }
}

TEST(MidRank, KeepMaskDropsCompetitors) {
  const std::vector<double> s{0.1, 0.2, 0.3};
  const std::vector<char> keep{0, 1, 1};
  EXPECT_EQ(mid_rank(s, 2), 3u);
  EXPECT_EQ(mid_rank(s, 2, keep), 2u);
}

TEST(RankAxioms, PerfectRankingOfThreeCandidates) {
  const std::vector<NormalizedAxiom> test{NormalizedAxiom::gci0(0, 2)};
  const std::vector<std::vector<double>> scores{{0.4, 0.9, 0.1}};
  RankingTask task;
  task.test = test;
  task.pool = {0, 1, 2};
  const auto r = rank_axioms(task, table(scores, test));
  EXPECT_EQ(r.ranks[0].raw_rank, 1u);
  EXPECT_DOUBLE_EQ(r.raw.hits10, 1.0);
  EXPECT_DOUBLE_EQ(r.raw.macro_auc, 1.0);
}

TEST(RankAxioms, EntailedCompetitorAboveTruthLowersFilteredRankByOne) {
  // A ⊑ D is the test axiom; A ⊑ B scores better and is entailed.
  const Theory t = parse_normalized("GCI0 A B\nGCI0 C D\n");
  const auto dc = DeductiveClosure::compute(t);
  const ConceptId a = *t.signature().concepts.find("A"), b = *t.signature().concepts.find("B"),
                  d = *t.signature().concepts.find("D");
  const std::vector<NormalizedAxiom> test{NormalizedAxiom::gci0(a, d)};
  std::vector<std::vector<double>> scores{std::vector<double>(t.signature().concept_count(), 1.0)};
  scores[0][b] = 0.1;
  scores[0][d] = 0.2;
  RankingTask task;
  task.test = test;
  task.pool = {b, d, *t.signature().concepts.find("C")};
  task.closures = {&dc};
  const auto r = rank_axioms(task, table(scores, test));
  EXPECT_EQ(r.ranks[0].raw_rank, 2u);
  EXPECT_EQ(r.ranks[0].filtered_rank, r.ranks[0].raw_rank - 1);
  EXPECT_EQ(r.ranks[0].filtered_candidates, 2u);
}

TEST(RankAxioms, TrueAxiomIsNeverFilteredEvenWhenEntailed) {
  const Theory t = parse_normalized("GCI0 A B\n");
  const auto dc = DeductiveClosure::compute(t);
  const ConceptId a = *t.signature().concepts.find("A"), b = *t.signature().concepts.find("B");
  const std::vector<NormalizedAxiom> test{NormalizedAxiom::gci0(a, b)};
  const std::vector<std::vector<double>> scores{{0.5, 0.5, 0.5, 0.5}};
  RankingTask task;
  task.test = test;
  task.pool = {kTop, a, b};
  task.train = test;
  task.closures = {&dc};
  const auto r = rank_axioms(task, table(scores, test));
  // A ⊑ ⊤ and A ⊑ A are entailed competitors; only the truth survives.
  EXPECT_EQ(r.ranks[0].filtered_candidates, 1u);
  EXPECT_EQ(r.ranks[0].filtered_rank, 1u);
  EXPECT_DOUBLE_EQ(r.ranks[0].filtered_auc, 1.0);
}

TEST(RankAxioms, TruthOutsideThePoolIsStillRanked) {
  const std::vector<NormalizedAxiom> test{NormalizedAxiom::gci2(0, 0, 3)};
  const std::vector<std::vector<double>> scores{{0.3, 0.2, 0.1, 0.0}};
  RankingTask task;
  task.test = test;
  task.pool = {0, 1, 2};
  const auto r = rank_axioms(task, table(scores, test));
  EXPECT_EQ(r.ranks[0].raw_candidates, 4u);
  EXPECT_EQ(r.ranks[0].raw_rank, 1u);
}

TEST(RankAxioms, RejectsUnsupportedAxiomsAndEmptyPools) {
  RankingTask task;
  task.test = {NormalizedAxiom::gci1(0, 1, 2)};
  const ScoreFn zero = [](const NormalizedAxiom&, ConceptId) { return 0.0; };
  EXPECT_THROW(rank_axioms(task, zero), std::invalid_argument);
  task.test = {};
  EXPECT_THROW(rank_axioms(task, zero), std::invalid_argument);
}

TEST(RankAxioms, MatchesTheSortAndScanOracleOnRandomMatrices) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 49);  // candidates, N ≤ 50
    const std::size_t tests = 1 + uniform_index(rng, 20);
    ScoreMatrix m;
    for (std::size_t i = 0; i < tests; ++i) {
      const auto subject = static_cast<ConceptId>(uniform_index(rng, std::min<std::size_t>(n, 6)));
      const auto truth = static_cast<ConceptId>(uniform_index(rng, n));
      const auto ax = uniform01(rng) < 0.5 ? NormalizedAxiom::gci0(subject, truth)
                                           : NormalizedAxiom::gci2(subject, static_cast<RoleId>(i), truth);
      if (std::find(m.test.begin(), m.test.end(), ax) != m.test.end()) continue;
      m.test.push_back(ax);
      std::vector<double> row(n);
      // Coarse scores so ties are common.
      for (auto& s : row) s = static_cast<double>(uniform_index(rng, 8)) / 4.0;
      m.scores.push_back(row);
    }
    // Train axioms filter every test axiom they are a competitor of.
    std::vector<NormalizedAxiom> train;
    for (std::size_t i = 0; i < m.test.size(); ++i) {
      for (ConceptId c = 0; c < n; ++c) {
        if (uniform01(rng) < 0.2) train.push_back(with_candidate(m.test[i], c));
      }
    }
    for (std::size_t i = 0; i < m.test.size(); ++i) {
      for (ConceptId c = 0; c < n; ++c) {
        if (std::find(train.begin(), train.end(), with_candidate(m.test[i], c)) != train.end()) {
          m.filtered.insert({i, c});
        }
      }
    }

    for (auto micro : {MicroAverage::kTestSubjects, MicroAverage::kSignature}) {
      RankingTask task;
      task.test = m.test;
      task.pool = iota_pool(n);
      task.train = train;
      task.micro = micro;
      task.signature_concepts = n;
      const auto r = rank_axioms(task, table(m.scores, m.test));
      for (std::size_t i = 0; i < m.test.size(); ++i) {
        const auto o = testing::oracle_rank(m, i);
        ASSERT_EQ(r.ranks[i].raw_rank, o.raw) << "trial " << trial;
        ASSERT_EQ(r.ranks[i].filtered_rank, o.filtered) << "trial " << trial;
        ASSERT_EQ(r.ranks[i].filtered_candidates, o.filtered_candidates);
      }
      expect_same(r.raw, testing::oracle_metrics(m, false, micro, n));
      expect_same(r.filtered, testing::oracle_metrics(m, true, micro, n));

      // Ordering properties.
      for (const auto& a : r.ranks) {
        EXPECT_LE(a.filtered_rank, a.raw_rank);
        EXPECT_GE(a.raw_rank, 1u);
        EXPECT_LE(a.raw_rank, a.raw_candidates);
        EXPECT_GE(a.filtered_auc, 0.0);
        EXPECT_LE(a.raw_auc, 1.0);
      }
      const auto delta = nf_f_delta(r);
      EXPECT_GE(delta.macro_mr, 0.0);
      EXPECT_GE(delta.micro_mr, 0.0);
      EXPECT_LE(r.raw.hits10, r.raw.hits100);
    }
  }
}

TEST(RankAxioms, ThreadCountDoesNotChangeTheReport) {
  Rng rng(5);
  std::vector<NormalizedAxiom> test;
  std::vector<std::vector<double>> scores;
  for (std::size_t i = 0; i < 40; ++i) {
    test.push_back(NormalizedAxiom::gci0(static_cast<ConceptId>(i % 7), static_cast<ConceptId>(i % 30)));
    std::vector<double> row(30);
    for (auto& s : row) s = uniform01(rng);
    scores.push_back(row);
  }
  RankingTask task;
  task.test = test;
  task.pool = iota_pool(30);
  const auto one = rank_axioms(task, table(scores, test));
  task.threads = 4;
  const auto four = rank_axioms(task, table(scores, test));
  for (std::size_t i = 0; i < test.size(); ++i) EXPECT_EQ(one.ranks[i].raw_rank, four.ranks[i].raw_rank);
  expect_same(one.raw, four.raw);
}

TEST(Aggregate, MicroAveragesOverSubjectsFirst) {
  std::vector<AxiomRank> ranks(3);
  ranks[0].axiom = NormalizedAxiom::gci0(2, 3);
  ranks[1].axiom = NormalizedAxiom::gci0(2, 4);
  ranks[2].axiom = NormalizedAxiom::gci0(5, 3);
  const std::size_t r[] = {1, 3, 8};
  for (int i = 0; i < 3; ++i) {
    ranks[i].raw_rank = ranks[i].filtered_rank = r[i];
    ranks[i].raw_candidates = ranks[i].filtered_candidates = 11;
    ranks[i].raw_auc = ranks[i].filtered_auc = rank_auc(r[i], 11);
  }
  const auto m = aggregate(ranks, false, MicroAverage::kTestSubjects);
  EXPECT_DOUBLE_EQ(m.macro_mr, 4.0);
  EXPECT_DOUBLE_EQ(m.micro_mr, (2.0 + 8.0) / 2.0);
  EXPECT_DOUBLE_EQ(m.hits10, 1.0);
  const auto sig = aggregate(ranks, false, MicroAverage::kSignature, 11);
  EXPECT_DOUBLE_EQ(sig.micro_mr, 10.0 / 10.0);
  EXPECT_THROW(aggregate(ranks, false, MicroAverage::kSignature, 0), std::invalid_argument);
}

TEST(NfFDelta, IdenticalReportsGiveZeros) {
  std::vector<AxiomRank> ranks(1);
  ranks[0].axiom = NormalizedAxiom::gci0(2, 3);
  ranks[0].raw_rank = ranks[0].filtered_rank = 4;
  ranks[0].raw_candidates = ranks[0].filtered_candidates = 9;
  RankingReport r{ranks, aggregate(ranks, false, MicroAverage::kTestSubjects),
                  aggregate(ranks, true, MicroAverage::kTestSubjects)};
  const auto d = nf_f_delta(r);
  EXPECT_EQ(d.macro_mr, 0.0);
  EXPECT_EQ(d.micro_auc, 0.0);
  RankingReport other = r;
  other.ranks[0].axiom = NormalizedAxiom::gci0(2, 4);
  EXPECT_THROW(nf_f_delta(r, other), std::invalid_argument);
}

TEST(NfFDelta, OneFilteredCandidatePerAxiomAboveTruthGivesMrDeltaOne) {
  ScoreMatrix m;
  std::vector<NormalizedAxiom> train;
  for (ConceptId i = 0; i < 5; ++i) {
    m.test.push_back(NormalizedAxiom::gci0(i, 10));
    std::vector<double> row(11, 1.0);
    row[10] = 0.5;
    row[i + 5] = 0.1;  // one train axiom scored above the truth
    m.scores.push_back(row);
    train.push_back(NormalizedAxiom::gci0(i, i + 5));
  }
  RankingTask task;
  task.test = m.test;
  task.pool = iota_pool(11);
  task.train = train;
  const auto r = rank_axioms(task, table(m.scores, m.test));
  EXPECT_DOUBLE_EQ(nf_f_delta(r).macro_mr, 1.0);
  EXPECT_DOUBLE_EQ(nf_f_delta(r).micro_mr, 1.0);
}

TEST(FilterTestSet, AppendixEKeepsOnlyTheNovelAxiom) {
  const Theory t = appendix_e();
  const auto dc = DeductiveClosure::compute(t);
  const auto& c = t.signature().concepts;
  const ConceptId p = *c.find("{P}");
  const std::vector<NormalizedAxiom> test{NormalizedAxiom::gci2(p, 0, kTop),
                                          NormalizedAxiom::gci2(p, 0, *c.find("{GO2}"))};
  const auto out = filter_test_set(test, dc);
  EXPECT_EQ(out.removed, 1u);
  ASSERT_EQ(out.kept.size(), 1u);
  EXPECT_EQ(out.kept[0], test[1]);

  const auto all = filter_test_set(t.axioms(), dc);
  EXPECT_TRUE(all.kept.empty());
  EXPECT_EQ(all.removed, t.axioms().size());
}

TEST(ScoreAndRank, UsesThePositiveLossOfTheModel) {
  const Theory t = appendix_e();
  auto cfg = TrainConfig::defaults(ModelKind::kElbe);
  cfg.hyper.dim = 4;
  const auto m = init_model(t.signature(), cfg, 1);
  RankingTask task;
  const auto& c = t.signature().concepts;
  task.test = {NormalizedAxiom::gci2(*c.find("{P}"), 0, *c.find("{GO1}")),
               NormalizedAxiom::gci0(*c.find("{Q}"), *c.find("A"))};
  const auto r = score_and_rank(m, task);
  ASSERT_EQ(r.ranks.size(), 2u);
  EXPECT_EQ(r.ranks[0].raw_candidates, t.signature().concept_count() - 1);
  const auto again = score_and_rank(m, task);
  EXPECT_EQ(report_json(r, "x"), report_json(again, "x"));

  task.test = {NormalizedAxiom::gci0(0, 99)};
  EXPECT_THROW(score_and_rank(m, task), std::invalid_argument);
}

TEST(Report, JsonHasTheDocumentedKeys) {
  std::vector<AxiomRank> ranks(1);
  ranks[0].axiom = NormalizedAxiom::gci0(2, 3);
  ranks[0].raw_rank = 3;
  ranks[0].filtered_rank = 2;
  ranks[0].raw_candidates = 5;
  ranks[0].filtered_candidates = 4;
  RankingReport r{ranks, aggregate(ranks, false, MicroAverage::kTestSubjects),
                  aggregate(ranks, true, MicroAverage::kTestSubjects)};
  const auto j = nlohmann::json::parse(report_json(r, "subsumption"));
  EXPECT_EQ(j["task"], "subsumption");
  EXPECT_EQ(j["n_test"], 1);
  for (const char* k : {"H@10", "H@100", "macro_MR", "micro_MR", "macro_AUC", "micro_AUC", "F_H@10",
                        "F_macro_MR", "F_micro_AUC"}) {
    EXPECT_TRUE(j["metrics"].contains(k)) << k;
  }
  EXPECT_DOUBLE_EQ(j["metrics"]["NF_minus_F"]["macro_MR"].get<double>(), 1.0);
}

TEST(Report, CsvHasOneRowPerAxiom) {
  const Theory t = appendix_e();
  std::vector<AxiomRank> ranks(2);
  ranks[0].axiom = t.axioms()[0];
  ranks[1].axiom = t.axioms()[1];
  const RankingReport r{ranks, {}, {}};
  const auto csv = ranks_csv(r, t.signature());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.rfind("axiom,raw_rank", 0), 0u);
}

}  // namespace
}  // namespace elkbc
