#include "elkbc/closure.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <string>
#include <thread>
#include <unordered_map>

namespace elkbc {

namespace {

// Runs fn(i, out) for i in [0, n) across `threads` workers and concatenates
// the per-worker outputs.
std::vector<NormalizedAxiom> parallel_collect(
    std::size_t n, unsigned threads,
    const std::function<void(std::size_t, std::vector<NormalizedAxiom>&)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::vector<NormalizedAxiom>> parts(threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += threads) fn(i, parts[w]);
      });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<NormalizedAxiom> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::uint64_t pair_key(ConceptId a, ConceptId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

MaterializationCapError::MaterializationCapError(std::size_t concepts, double cap)
    : std::runtime_error("materialized closure refused: |C|^3 = " +
                         std::to_string(static_cast<double>(concepts) * concepts * concepts) +
                         " exceeds cap " + std::to_string(cap) + "; use oracle mode") {}

DeductiveClosure DeductiveClosure::compute(const Theory& t, const Classification& c,
                                           const ClosureOptions& opts) {
  return DeductiveClosure(t, c, opts);
}

DeductiveClosure DeductiveClosure::compute(const Theory& t, const ClosureOptions& opts) {
  return DeductiveClosure(t, classify(t), opts);
}

DeductiveClosure::DeductiveClosure(const Theory& t, const Classification& c,
                                   const ClosureOptions& opts)
    : theory_(t),
      cls_(c),
      mode_(opts.mode),
      universal_limit_(opts.universal_limit),
      chain_pair_cap_(opts.chain_pair_cap) {
  const auto n = static_cast<double>(t.signature().concept_count());
  if (mode_ == ClosureMode::kMaterialized && n * n * n > opts.cap) {
    throw MaterializationCapError(t.signature().concept_count(), opts.cap);
  }
  build_indexes();
  compute_chain_extras();
  if (mode_ == ClosureMode::kMaterialized) {
    universal_materialized_ = t.signature().concept_count() <= universal_limit_;
    materialize(opts.threads);
  }
}

void DeductiveClosure::build_indexes() {
  const std::size_t n = theory_.signature().concept_count();
  gci1_by_conj_.assign(n, {});
  gci1_bot_by_conj_.assign(n, {});
  gci2_by_lhs_.assign(n, {});
  gci3_by_filler_.assign(n, {});
  gci3_bot_by_filler_.assign(n, {});
  for (const auto& ax : theory_.axioms()) {
    const auto& s = ax.slots;
    switch (ax.variant) {
      case Variant::kGci1:
        gci1_by_conj_[s[0]].push_back({s[1], s[2]});
        if (s[0] != s[1]) gci1_by_conj_[s[1]].push_back({s[0], s[2]});
        break;
      case Variant::kGci1Bot:
        gci1_bot_by_conj_[s[0]].push_back(s[1]);
        if (s[0] != s[1]) gci1_bot_by_conj_[s[1]].push_back(s[0]);
        break;
      case Variant::kGci2: gci2_by_lhs_[s[0]].push_back({s[1], s[2]}); break;
      case Variant::kGci3: gci3_by_filler_[s[1]].push_back({s[0], s[2]}); break;
      case Variant::kGci3Bot: gci3_bot_by_filler_[s[1]].push_back(s[0]); break;
      default: break;
    }
  }
}

void DeductiveClosure::check_ids(const NormalizedAxiom& ax) const {
  const auto& sig = theory_.signature();
  const std::size_t arity = variant_arity(ax.variant);
  for (std::size_t i = 0; i < arity; ++i) {
    const std::size_t bound =
        slot_kind(ax.variant, i) == SlotKind::kRole ? sig.role_count() : sig.concept_count();
    if (ax.slots[i] >= bound) {
      throw std::out_of_range("axiom slot " + std::to_string(i) + " references unknown id " +
                              std::to_string(ax.slots[i]));
    }
  }
}

// ---------------------------------------------------------------------------
// Premise scans

namespace {

// Calls fn(x) for every entailed superclass x of `a` until fn returns true.
template <class Fn>
bool any_super(const SubsumptionIndex& s, ConceptId a, Fn&& fn) {
  if (s.unsatisfiable(a)) {
    for (ConceptId x = 0; x < s.concept_count(); ++x) {
      if (fn(x)) return true;
    }
    return false;
  }
  for (auto x : s.stored_superclasses(a)) {
    if (fn(x)) return true;
  }
  return false;
}

}  // namespace

bool DeductiveClosure::gci1_bot_pair(ConceptId a, ConceptId b) const {
  if (unsat(a) || unsat(b)) return true;
  return any_super(cls_.subsumption, a, [&](ConceptId x) {
    for (auto other : gci1_bot_by_conj_[x]) {
      if (sub(b, other)) return true;
    }
    for (const auto& [other, target] : gci1_by_conj_[x]) {
      if (unsat(target) && sub(b, other)) return true;
    }
    return false;
  });
}

bool DeductiveClosure::gci1_by_rule(ConceptId a, ConceptId b, ConceptId e) const {
  return any_super(cls_.subsumption, a, [&](ConceptId x) {
    for (const auto& [other, target] : gci1_by_conj_[x]) {
      if (sub(b, other) && sub(target, e)) return true;
    }
    return false;
  });
}

bool DeductiveClosure::gci1_universal(ConceptId a, ConceptId b, ConceptId e) const {
  return unsat(a) || unsat(b) || sub(a, e) || sub(b, e);
}

bool DeductiveClosure::gci2_analytic(ConceptId a, RoleId r, ConceptId b) const {
  if (unsat(a)) return true;
  const bool asserted = any_super(cls_.subsumption, a, [&](ConceptId x) {
    for (const auto& [role, filler] : gci2_by_lhs_[x]) {
      if (cls_.roles.is_subrole(role, r) && sub(filler, b)) return true;
    }
    return false;
  });
  return asserted || chain_extra_.count(NormalizedAxiom::gci2(a, r, b)) > 0;
}

bool DeductiveClosure::gci3_analytic(RoleId r, ConceptId a, ConceptId b) const {
  if (b == kTop && a != kBottom) return true;
  return any_super(cls_.subsumption, a, [&](ConceptId x) {
    for (const auto& [role, rhs] : gci3_by_filler_[x]) {
      if (cls_.roles.is_subrole(r, role) && sub(rhs, b)) return true;
    }
    return false;
  });
}

bool DeductiveClosure::gci3_bot_analytic(RoleId r, ConceptId a) const {
  return any_super(cls_.subsumption, a, [&](ConceptId x) {
    for (auto role : gci3_bot_by_filler_[x]) {
      if (cls_.roles.is_subrole(r, role)) return true;
    }
    for (const auto& [role, rhs] : gci3_by_filler_[x]) {
      if (unsat(rhs) && cls_.roles.is_subrole(r, role)) return true;
    }
    return false;
  });
}

bool DeductiveClosure::analytic(const NormalizedAxiom& ax) const {
  const auto& s = ax.slots;
  switch (ax.variant) {
    case Variant::kGci0: return sub(s[0], s[1]);
    case Variant::kGci0Bot: return unsat(s[0]);
    case Variant::kGci1:
      return gci1_bot_pair(s[0], s[1]) || gci1_universal(s[0], s[1], s[2]) ||
             gci1_by_rule(s[0], s[1], s[2]) || gci1_by_rule(s[1], s[0], s[2]);
    case Variant::kGci1Bot: return gci1_bot_pair(s[0], s[1]);
    case Variant::kGci2: return gci2_analytic(s[0], s[1], s[2]);
    case Variant::kGci3: return gci3_analytic(s[0], s[1], s[2]);
    case Variant::kGci3Bot: return gci3_bot_analytic(s[0], s[1]);
    case Variant::kRi0: return cls_.roles.is_subrole(s[0], s[1]);
    case Variant::kRi1: return theory_.contains(ax);
  }
  return false;
}

bool DeductiveClosure::entails(const NormalizedAxiom& raw) const {
  check_ids(raw);
  const NormalizedAxiom ax = canonical(raw);
  if (mode_ == ClosureMode::kOracle || !is_gci(ax.variant)) return analytic(ax);
  const auto& set = sets_[variant_index(ax.variant)];
  if (std::binary_search(set.begin(), set.end(), ax)) return true;
  if (universal_materialized_) return false;
  const auto& s = ax.slots;
  if (ax.variant == Variant::kGci1) return gci1_universal(s[0], s[1], s[2]);
  if (ax.variant == Variant::kGci1Bot) return unsat(s[0]) || unsat(s[1]);
  return false;
}

const std::vector<NormalizedAxiom>& DeductiveClosure::axioms(Variant v) const {
  if (mode_ != ClosureMode::kMaterialized) {
    throw std::logic_error("closure axiom sets are only available in materialized mode");
  }
  if (!is_gci(v)) throw std::invalid_argument("closure sets exist for GCI variants only");
  return sets_[variant_index(v)];
}

// ---------------------------------------------------------------------------
// Chain rule: A ⊑ ∃r.B, B ⊑ ∃r'.E, r ∘ r' ⊑ s ⊢ A ⊑ ∃s.E, iterated to a
// fixpoint over the GCI2 closure. Only roles that occur as chain premises are
// tracked; unsatisfiable subjects already entail every GCI2 and are skipped.

void DeductiveClosure::compute_chain_extras() {
  const auto& chains = cls_.roles.chains();
  if (chains.empty()) return;
  const auto& S = cls_.subsumption;
  const std::size_t nr = theory_.signature().role_count();

  std::vector<std::uint8_t> tracked(nr, 0);
  std::vector<std::vector<std::pair<RoleId, RoleId>>> as_first(nr), as_second(nr);
  for (const auto& ch : chains) {
    tracked[ch[0]] = tracked[ch[1]] = 1;
    as_first[ch[0]].push_back({ch[1], ch[2]});
    as_second[ch[1]].push_back({ch[0], ch[2]});
  }

  struct RolePairs {
    std::unordered_set<std::uint64_t> present;
    std::unordered_map<ConceptId, std::vector<ConceptId>> succ;
    std::unordered_map<ConceptId, std::vector<ConceptId>> pred;
  };
  std::vector<RolePairs> g(nr);
  struct Triple {
    ConceptId a;
    RoleId r;
    ConceptId b;
  };
  std::deque<Triple> queue;
  std::size_t total = 0;

  auto insert = [&](ConceptId a, RoleId r, ConceptId b) {
    if (!tracked[r]) return false;
    if (total >= chain_pair_cap_) {
      chain_truncated_ = true;
      return false;
    }
    if (!g[r].present.insert(pair_key(a, b)).second) return false;
    g[r].succ[a].push_back(b);
    g[r].pred[b].push_back(a);
    queue.push_back({a, r, b});
    ++total;
    return true;
  };

  for (const auto& ax : theory_.axioms()) {
    if (ax.variant != Variant::kGci2) continue;
    const auto [a0, r0, b0] = ax.slots;
    if (S.unsatisfiable(a0)) continue;
    for (auto r : cls_.roles.superroles(r0)) {
      if (!tracked[r]) continue;
      for (auto a : S.subclasses(a0)) {
        if (S.unsatisfiable(a)) continue;
        for (auto b : S.stored_superclasses(b0)) insert(a, r, b);
      }
    }
  }

  auto conclude = [&](ConceptId a, RoleId s, ConceptId e) {
    const auto ax = NormalizedAxiom::gci2(a, s, e);
    if (!chain_extra_.count(ax) && !gci2_analytic(a, s, e)) chain_extra_.insert(ax);
    insert(a, s, e);
  };

  while (!queue.empty()) {
    const Triple t = queue.front();
    queue.pop_front();
    for (const auto& [r2, s] : as_first[t.r]) {
      auto it = g[r2].succ.find(t.b);
      if (it == g[r2].succ.end()) continue;
      const std::vector<ConceptId> targets = it->second;
      for (auto e : targets) conclude(t.a, s, e);
    }
    for (const auto& [r1, s] : as_second[t.r]) {
      auto it = g[r1].pred.find(t.a);
      if (it == g[r1].pred.end()) continue;
      const std::vector<ConceptId> sources = it->second;
      for (auto c : sources) conclude(c, s, t.b);
    }
  }
}

// ---------------------------------------------------------------------------
// Materialization

void DeductiveClosure::materialize(unsigned threads) {
  const auto& S = cls_.subsumption;
  const auto& RH = cls_.roles;
  const auto n = static_cast<ConceptId>(theory_.signature().concept_count());
  const auto nr = static_cast<RoleId>(theory_.signature().role_count());
  const auto& asserted = theory_.axioms();

  std::vector<NormalizedAxiom> all;

  // GCI0 and GCI0_BOT are the reasoner output.
  for (ConceptId a = 0; a < n; ++a) {
    if (S.unsatisfiable(a)) all.push_back(NormalizedAxiom::gci0_bot(a));
    for (auto b : S.superclasses(a)) {
      if (b != kBottom) all.push_back(NormalizedAxiom::gci0(a, b));
    }
  }

  // Pairs whose conjunction is unsatisfiable.
  std::vector<std::pair<ConceptId, ConceptId>> bot_pairs;
  auto add_bot_pairs = [&](ConceptId a, ConceptId b) {
    for (auto x : S.subclasses(a)) {
      for (auto y : S.subclasses(b)) {
        bot_pairs.push_back({x, y});
        bot_pairs.push_back({y, x});
      }
    }
  };
  for (const auto& ax : asserted) {
    if (ax.variant == Variant::kGci1Bot) add_bot_pairs(ax.slots[0], ax.slots[1]);
    if (ax.variant == Variant::kGci1 && S.unsatisfiable(ax.slots[2])) {
      add_bot_pairs(ax.slots[0], ax.slots[1]);
    }
  }
  if (universal_materialized_) {
    for (ConceptId a = 0; a < n; ++a) {
      for (ConceptId b = 0; b < n; ++b) {
        if (S.unsatisfiable(a) || S.unsatisfiable(b)) bot_pairs.push_back({a, b});
      }
    }
  }
  std::sort(bot_pairs.begin(), bot_pairs.end());
  bot_pairs.erase(std::unique(bot_pairs.begin(), bot_pairs.end()), bot_pairs.end());
  for (const auto& [a, b] : bot_pairs) {
    all.push_back(NormalizedAxiom::gci1_bot(a, b));
    for (ConceptId e = 0; e < n; ++e) {
      if (e != kBottom) all.push_back(NormalizedAxiom::gci1(a, b, e));
    }
  }

  // Algorithm 1 over asserted axioms, one task per asserted axiom.
  auto derived = parallel_collect(asserted.size(), threads, [&](std::size_t i, auto& out) {
    const auto& ax = asserted[i];
    const auto& s = ax.slots;
    switch (ax.variant) {
      case Variant::kGci1: {
        const auto subs_a = S.subclasses(s[0]);
        const auto subs_b = S.subclasses(s[1]);
        const auto sups_e = S.superclasses(s[2]);
        for (auto x : subs_a) {
          for (auto y : subs_b) {
            for (auto e : sups_e) {
              out.push_back(canonical(NormalizedAxiom::gci1(x, y, e)));
              out.push_back(canonical(NormalizedAxiom::gci1(y, x, e)));
            }
          }
        }
        break;
      }
      case Variant::kGci2: {
        const auto subs_a = S.subclasses(s[0]);
        const auto sups_b = S.superclasses(s[2]);
        for (auto r : RH.superroles(s[1])) {
          for (auto x : subs_a) {
            for (auto y : sups_b) out.push_back(NormalizedAxiom::gci2(x, r, y));
          }
        }
        break;
      }
      case Variant::kGci3: {
        const auto subs_a = S.subclasses(s[1]);
        const auto sups_b = S.superclasses(s[2]);
        for (auto r : RH.subroles(s[0])) {
          for (auto x : subs_a) {
            for (auto y : sups_b) out.push_back(canonical(NormalizedAxiom::gci3(r, x, y)));
          }
        }
        break;
      }
      case Variant::kGci3Bot: {
        for (auto r : RH.subroles(s[0])) {
          for (auto x : S.subclasses(s[1])) out.push_back(NormalizedAxiom::gci3_bot(r, x));
        }
        break;
      }
      default: break;
    }
  });
  all.insert(all.end(), derived.begin(), derived.end());
  derived.clear();
  derived.shrink_to_fit();

  // Algorithm 2.
  if (universal_materialized_) {
    auto pattern = parallel_collect(n, threads, [&](std::size_t i, auto& out) {
      const auto a = static_cast<ConceptId>(i);
      if (S.unsatisfiable(a)) return;  // covered by the bot pairs
      const auto& sup_a = S.stored_superclasses(a);
      for (ConceptId b = 0; b < n; ++b) {
        if (S.unsatisfiable(b)) continue;
        const auto& sup_b = S.stored_superclasses(b);
        std::vector<ConceptId> either;
        std::set_union(sup_a.begin(), sup_a.end(), sup_b.begin(), sup_b.end(),
                       std::back_inserter(either));
        for (auto e : either) out.push_back(NormalizedAxiom::gci1(a, b, e));
      }
    });
    all.insert(all.end(), pattern.begin(), pattern.end());
  }
  for (ConceptId a = 0; a < n; ++a) {
    if (S.unsatisfiable(a)) {
      for (RoleId r = 0; r < nr; ++r) {
        for (ConceptId b = 0; b < n; ++b) all.push_back(NormalizedAxiom::gci2(a, r, b));
      }
    }
    if (a != kBottom) {
      for (RoleId r = 0; r < nr; ++r) all.push_back(NormalizedAxiom::gci3(r, a, kTop));
    }
  }
  all.insert(all.end(), chain_extra_.begin(), chain_extra_.end());

  for (auto& set : sets_) set.clear();
  for (const auto& ax : all) sets_[variant_index(ax.variant)].push_back(ax);
  all.clear();
  all.shrink_to_fit();
  for (auto& set : sets_) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
}

}  // namespace elkbc
