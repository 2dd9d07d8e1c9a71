#include "elkbc/ranking.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "elkbc/losses.hpp"

namespace elkbc {

namespace {

void check_test_axiom(const NormalizedAxiom& ax) {
  if (ax.variant != Variant::kGci0 && ax.variant != Variant::kGci2) {
    throw std::invalid_argument("ranking supports GCI0 and GCI2 test axioms only, got " +
                                std::string(variant_tag(ax.variant)));
  }
}

std::vector<ConceptId> candidate_pool(const RankingTask& task, std::size_t concepts) {
  std::vector<ConceptId> pool = task.pool;
  if (pool.empty()) {
    for (ConceptId c = 0; c < concepts; ++c) {
      if (c != kBottom) pool.push_back(c);
    }
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.empty()) throw std::invalid_argument("empty candidate pool");
  return pool;
}

std::size_t largest_id(const RankingTask& task) {
  std::size_t n = 0;
  for (const auto& ax : task.test) {
    n = std::max<std::size_t>(n, std::max(ax.slots[0], ax.slots[rightmost_concept_slot(ax.variant)]) + 1);
  }
  return std::max(n, task.signature_concepts);
}

// Ranks one test axiom. `pool` is sorted and duplicate-free.
AxiomRank rank_one(const NormalizedAxiom& test, const std::vector<ConceptId>& pool, const ScoreFn& score,
                   const std::unordered_set<NormalizedAxiom>& train,
                   const std::vector<const DeductiveClosure*>& closures) {
  const ConceptId truth_id = test.slots[rightmost_concept_slot(test.variant)];
  std::vector<ConceptId> ranked = pool;
  auto at = std::lower_bound(ranked.begin(), ranked.end(), truth_id);
  if (at == ranked.end() || *at != truth_id) at = ranked.insert(at, truth_id);
  const std::size_t truth = static_cast<std::size_t>(at - ranked.begin());

  std::vector<double> scores(ranked.size());
  std::vector<char> keep(ranked.size(), 1);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    scores[i] = score(test, ranked[i]);
    if (i != truth) {
      const auto cand = with_candidate(test, ranked[i]);
      bool drop = train.contains(cand);
      for (const auto* dc : closures) {
        if (drop) break;
        drop = dc->entails(cand);
      }
      keep[i] = drop ? 0 : 1;
    }
    kept += keep[i];
  }

  AxiomRank r;
  r.axiom = test;
  r.raw_candidates = ranked.size();
  r.filtered_candidates = kept;
  r.raw_rank = mid_rank(scores, truth);
  r.filtered_rank = mid_rank(scores, truth, keep);
  r.raw_auc = rank_auc(r.raw_rank, r.raw_candidates);
  r.filtered_auc = rank_auc(r.filtered_rank, r.filtered_candidates);
  return r;
}

nlohmann::json metrics_json(const Metrics& m, std::string_view prefix) {
  const std::string p(prefix);
  return {{p + "H@10", m.hits10},         {p + "H@100", m.hits100},       {p + "macro_MR", m.macro_mr},
          {p + "micro_MR", m.micro_mr},   {p + "macro_AUC", m.macro_auc}, {p + "micro_AUC", m.micro_auc}};
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string_view micro_average_tag(MicroAverage m) {
  return m == MicroAverage::kSignature ? "signature" : "test-subjects";
}

std::optional<MicroAverage> parse_micro_average(std::string_view tag) {
  if (tag == "test-subjects") return MicroAverage::kTestSubjects;
  if (tag == "signature") return MicroAverage::kSignature;
  return std::nullopt;
}

NormalizedAxiom with_candidate(const NormalizedAxiom& test, ConceptId c) {
  check_test_axiom(test);
  NormalizedAxiom out = test;
  out.slots[rightmost_concept_slot(test.variant)] = c;
  return out;
}

std::size_t mid_rank(std::span<const double> scores, std::size_t truth, std::span<const char> keep) {
  if (truth >= scores.size()) throw std::out_of_range("true answer outside the score list");
  const double s = scores[truth];
  std::size_t better = 0, ties = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i == truth || (!keep.empty() && !keep[i])) continue;
    if (scores[i] < s) {
      ++better;
    } else if (scores[i] == s) {
      ++ties;
    }
  }
  return 1 + better + ties / 2;
}

double rank_auc(std::size_t rank, std::size_t candidates) {
  if (candidates <= 1) return 1.0;
  return 1.0 - static_cast<double>(rank - 1) / static_cast<double>(candidates - 1);
}

double hits_at(std::span<const AxiomRank> ranks, std::size_t n, bool filtered) {
  if (ranks.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& r : ranks) hit += (filtered ? r.filtered_rank : r.raw_rank) <= n;
  return static_cast<double>(hit) / static_cast<double>(ranks.size());
}

Metrics aggregate(std::span<const AxiomRank> ranks, bool filtered, MicroAverage micro,
                  std::size_t signature_concepts) {
  Metrics m;
  if (ranks.empty()) return m;
  m.hits10 = hits_at(ranks, 10, filtered);
  m.hits100 = hits_at(ranks, 100, filtered);

  // Per subject class: (rank sum, AUC sum, count).
  struct Acc {
    double rank = 0.0;
    double auc = 0.0;
    std::size_t n = 0;
  };
  std::map<ConceptId, Acc> by_subject;
  for (const auto& r : ranks) {
    const double rank = static_cast<double>(filtered ? r.filtered_rank : r.raw_rank);
    const double auc = filtered ? r.filtered_auc : r.raw_auc;
    m.macro_mr += rank;
    m.macro_auc += auc;
    auto& a = by_subject[r.axiom.slots[0]];
    a.rank += rank;
    a.auc += auc;
    ++a.n;
  }
  m.macro_mr /= static_cast<double>(ranks.size());
  m.macro_auc /= static_cast<double>(ranks.size());

  for (const auto& [subject, a] : by_subject) {
    m.micro_mr += a.rank / static_cast<double>(a.n);
    m.micro_auc += a.auc / static_cast<double>(a.n);
  }
  double classes = static_cast<double>(by_subject.size());
  if (micro == MicroAverage::kSignature) {
    if (signature_concepts < 2) throw std::invalid_argument("signature micro average needs the concept count");
    classes = static_cast<double>(signature_concepts - 1);  // ⊥ is never a subject
  }
  m.micro_mr /= classes;
  m.micro_auc /= classes;
  return m;
}

RankingReport rank_axioms(const RankingTask& task, const ScoreFn& score) {
  for (const auto& ax : task.test) check_test_axiom(ax);
  const auto pool = candidate_pool(task, largest_id(task));
  const std::unordered_set<NormalizedAxiom> train(task.train.begin(), task.train.end());

  RankingReport report;
  report.ranks.resize(task.test.size());
  const std::size_t n = task.test.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(task.threads, n));
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      report.ranks[i] = rank_one(task.test[i], pool, score, train, task.closures);
    }
  };
  if (workers == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          run(n * w / workers, n * (w + 1) / workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  report.raw = aggregate(report.ranks, false, task.micro, task.signature_concepts);
  report.filtered = aggregate(report.ranks, true, task.micro, task.signature_concepts);
  return report;
}

RankingReport score_and_rank(const GeometricModel& m, const RankingTask& task) {
  for (const auto& ax : task.test) {
    check_test_axiom(ax);
    if (ax.slots[0] >= m.concept_count() || ax.slots[rightmost_concept_slot(ax.variant)] >= m.concept_count() ||
        (ax.variant == Variant::kGci2 && ax.slots[1] >= m.role_count())) {
      throw std::invalid_argument("test axiom refers to an id outside the model");
    }
  }
  for (ConceptId c : task.pool) {
    if (c >= m.concept_count()) throw std::invalid_argument("candidate outside the model");
  }
  RankingTask sized = task;
  if (sized.signature_concepts == 0) sized.signature_concepts = m.concept_count();
  return rank_axioms(sized, [&m](const NormalizedAxiom& test, ConceptId c) {
    return axiom_loss(m, {with_candidate(test, c), Polarity::kPositive});
  });
}

FilteredTestSet filter_test_set(std::span<const NormalizedAxiom> test, const DeductiveClosure& dc) {
  FilteredTestSet out;
  for (const auto& ax : test) {
    if (dc.entails(ax)) {
      ++out.removed;
    } else {
      out.kept.push_back(ax);
    }
  }
  return out;
}

Metrics nf_f_delta(const RankingReport& nf, const RankingReport& f) {
  if (nf.ranks.size() != f.ranks.size()) throw std::invalid_argument("reports rank different test sets");
  for (std::size_t i = 0; i < nf.ranks.size(); ++i) {
    if (nf.ranks[i].axiom != f.ranks[i].axiom) throw std::invalid_argument("reports rank different test sets");
  }
  const Metrics& a = nf.raw;
  const Metrics& b = f.filtered;
  return {a.hits10 - b.hits10,     a.hits100 - b.hits100,     a.macro_mr - b.macro_mr,
          a.micro_mr - b.micro_mr, a.macro_auc - b.macro_auc, a.micro_auc - b.micro_auc};
}

std::string report_json(const RankingReport& r, std::string_view task_name) {
  nlohmann::json metrics = metrics_json(r.raw, "");
  metrics.update(metrics_json(r.filtered, "F_"));
  metrics["NF_minus_F"] = metrics_json(nf_f_delta(r), "");
  const nlohmann::json j = {{"task", std::string(task_name)}, {"n_test", r.ranks.size()}, {"metrics", metrics}};
  return j.dump(2) + "\n";
}

std::string ranks_csv(const RankingReport& r, const Signature& sig) {
  std::ostringstream out;
  out.precision(10);
  out << "axiom,raw_rank,filtered_rank,raw_candidates,filtered_candidates,raw_auc,filtered_auc\n";
  for (const auto& a : r.ranks) {
    out << csv_quote(format_axiom(a.axiom, sig)) << ',' << a.raw_rank << ',' << a.filtered_rank << ','
        << a.raw_candidates << ',' << a.filtered_candidates << ',' << a.raw_auc << ',' << a.filtered_auc
        << '\n';
  }
  return out.str();
}

}  // namespace elkbc
