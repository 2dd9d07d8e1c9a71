#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "elkbc/reasoner.hpp"
#include "elkbc/theory.hpp"

namespace elkbc {

enum class ClosureMode { kMaterialized, kOracle };

/// Thrown when a materialized closure would exceed the configured GCI1 bound.
class MaterializationCapError : public std::runtime_error {
 public:
  MaterializationCapError(std::size_t concepts, double cap);
};

struct ClosureOptions {
  ClosureMode mode = ClosureMode::kOracle;
  /// Materialization is refused when |C|^3 exceeds this.
  double cap = 1e8;
  /// Above this many concepts the pattern rules "A ⊓ ⊥ ⊑ E" and
  /// "E ⊑ E' ⊢ A ⊓ E ⊑ E'" are answered analytically instead of stored.
  std::size_t universal_limit = 2000;
  /// Upper bound on role pairs tracked while iterating the chain rule.
  std::size_t chain_pair_cap = 5'000'000;
  unsigned threads = 1;
};

/// Approximate deductive closure of a normalized theory. Both modes answer
/// `entails` identically; materialized mode additionally exposes the axiom
/// sets per variant.
class DeductiveClosure {
 public:
  static DeductiveClosure compute(const Theory& t, const Classification& c,
                                  const ClosureOptions& opts = {});
  /// Classifies `t` first.
  static DeductiveClosure compute(const Theory& t, const ClosureOptions& opts = {});

  ClosureMode mode() const { return mode_; }
  bool universal_rules_materialized() const { return universal_materialized_; }
  bool chain_truncated() const { return chain_truncated_; }

  /// Throws std::out_of_range when a slot is outside the signature.
  bool entails(const NormalizedAxiom& ax) const;

  /// Sorted, duplicate-free axioms of one GCI variant. Throws std::logic_error
  /// in oracle mode.
  const std::vector<NormalizedAxiom>& axioms(Variant v) const;
  std::size_t count(Variant v) const { return axioms(v).size(); }

  const Theory& theory() const { return theory_; }
  const Classification& classification() const { return cls_; }
  const SubsumptionIndex& subsumption() const { return cls_.subsumption; }
  const RoleHierarchy& roles() const { return cls_.roles; }

 private:
  DeductiveClosure(const Theory& t, const Classification& c, const ClosureOptions& opts);

  void build_indexes();
  void compute_chain_extras();
  void materialize(unsigned threads);

  bool sub(ConceptId a, ConceptId b) const { return cls_.subsumption.is_subclass(a, b); }
  bool unsat(ConceptId a) const { return cls_.subsumption.unsatisfiable(a); }
  void check_ids(const NormalizedAxiom& ax) const;

  bool gci1_bot_pair(ConceptId a, ConceptId b) const;
  bool gci1_by_rule(ConceptId a, ConceptId b, ConceptId e) const;
  bool gci1_universal(ConceptId a, ConceptId b, ConceptId e) const;
  bool gci2_analytic(ConceptId a, RoleId r, ConceptId b) const;
  bool gci3_analytic(RoleId r, ConceptId a, ConceptId b) const;
  bool gci3_bot_analytic(RoleId r, ConceptId a) const;
  bool analytic(const NormalizedAxiom& ax) const;

  Theory theory_;
  Classification cls_;
  ClosureMode mode_;
  std::size_t universal_limit_;
  std::size_t chain_pair_cap_;
  bool universal_materialized_ = false;
  bool chain_truncated_ = false;

  // Asserted premises, indexed by the slot the premise scan starts from.
  std::vector<std::vector<std::pair<ConceptId, ConceptId>>> gci1_by_conj_;  // (other, target)
  std::vector<std::vector<ConceptId>> gci1_bot_by_conj_;                    // other
  std::vector<std::vector<std::pair<RoleId, ConceptId>>> gci2_by_lhs_;      // (role, filler)
  std::vector<std::vector<std::pair<RoleId, ConceptId>>> gci3_by_filler_;   // (role, rhs)
  std::vector<std::vector<RoleId>> gci3_bot_by_filler_;                      // role

  std::unordered_set<NormalizedAxiom> chain_extra_;
  std::array<std::vector<NormalizedAxiom>, kVariantCount> sets_;
};

}  // namespace elkbc
