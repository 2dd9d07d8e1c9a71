#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elkbc/closure.hpp"
#include "elkbc/model.hpp"

namespace elkbc {

// Which subject classes the micro averages run over.
enum class MicroAverage : std::uint8_t {
  kTestSubjects,  // classes that occur as a subject in the test set
  kSignature,     // every concept except ⊥; classes with no test axiom count as 0
};

std::string_view micro_average_tag(MicroAverage m);  // "test-subjects", "signature"
std::optional<MicroAverage> parse_micro_average(std::string_view tag);

struct RankingTask {
  std::vector<NormalizedAxiom> test;  // GCI0 or GCI2; the rightmost concept is ranked
  std::vector<ConceptId> pool;        // candidates; empty means every concept except ⊥
  std::vector<NormalizedAxiom> train; // competitors found here are filtered
  std::vector<const DeductiveClosure*> closures;  // and competitors entailed by any of these
  MicroAverage micro = MicroAverage::kTestSubjects;
  std::size_t signature_concepts = 0;  // needed for MicroAverage::kSignature
  unsigned threads = 1;
};

struct AxiomRank {
  NormalizedAxiom axiom;
  std::size_t raw_rank = 0;
  std::size_t filtered_rank = 0;
  std::size_t raw_candidates = 0;       // ranked set size, the true answer included
  std::size_t filtered_candidates = 0;  // same after filtering
  double raw_auc = 0.0;
  double filtered_auc = 0.0;
};

struct Metrics {
  double hits10 = 0.0;
  double hits100 = 0.0;
  double macro_mr = 0.0;
  double micro_mr = 0.0;
  double macro_auc = 0.0;
  double micro_auc = 0.0;
};

struct RankingReport {
  std::vector<AxiomRank> ranks;  // in test-set order
  Metrics raw;
  Metrics filtered;
};

/// Score of `candidate` in the rightmost slot of `test`; lower is better.
using ScoreFn = std::function<double(const NormalizedAxiom& test, ConceptId candidate)>;

/// `test` with its rightmost concept replaced by `c`.
NormalizedAxiom with_candidate(const NormalizedAxiom& test, ConceptId c);

/// Mid-rank of `scores[truth]`: 1 + #strictly better + ⌊#other ties / 2⌋,
/// counting only entries with keep[i] set (all when `keep` is empty).
std::size_t mid_rank(std::span<const double> scores, std::size_t truth, std::span<const char> keep = {});

/// 1 − (rank − 1)/(candidates − 1); a lone candidate scores 1.
double rank_auc(std::size_t rank, std::size_t candidates);

/// Fraction of ranks ≤ n.
double hits_at(std::span<const AxiomRank> ranks, std::size_t n, bool filtered);

Metrics aggregate(std::span<const AxiomRank> ranks, bool filtered, MicroAverage micro,
                  std::size_t signature_concepts = 0);

/// Ranks every test axiom against the candidate pool with `score`. The true
/// answer is always ranked, whether or not it is in the pool, and is never
/// filtered. Throws std::invalid_argument for RI or non-GCI0/GCI2 test
/// axioms and for an empty pool.
RankingReport rank_axioms(const RankingTask& task, const ScoreFn& score);

/// Scores with the model's positive loss for each candidate axiom.
RankingReport score_and_rank(const GeometricModel& m, const RankingTask& task);

struct FilteredTestSet {
  std::vector<NormalizedAxiom> kept;
  std::size_t removed = 0;
};

/// Drops the test axioms `dc` already entails.
FilteredTestSet filter_test_set(std::span<const NormalizedAxiom> test, const DeductiveClosure& dc);

/// Non-filtered minus filtered metrics: `nf.raw − f.filtered`. Throws
/// std::invalid_argument when the reports rank different test sets.
Metrics nf_f_delta(const RankingReport& nf, const RankingReport& f);
inline Metrics nf_f_delta(const RankingReport& r) { return nf_f_delta(r, r); }

/// {"task", "n_test", "metrics": {"H@10", …, "F_H@10", …, "NF_minus_F": {…}}}.
std::string report_json(const RankingReport& r, std::string_view task_name);
/// One row per test axiom: axiom, raw and filtered rank, pool sizes, AUCs.
std::string ranks_csv(const RankingReport& r, const Signature& sig);

}  // namespace elkbc
