#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "elkbc/theory.hpp"

namespace elkbc {

/// Entailed atomic subsumptions. Stored sets hold exactly what the completion
/// rules derive; queries treat a concept with ⊥ among its superclasses as a
/// subclass of everything, so the query view is reflexive, transitive and
/// contains every concept in S(⊥).
class SubsumptionIndex {
 public:
  SubsumptionIndex() = default;
  SubsumptionIndex(std::vector<std::vector<ConceptId>> supers, std::size_t concept_count);

  std::size_t concept_count() const { return supers_.size(); }

  /// B ∈ S(A). Throws std::out_of_range for unknown ids.
  bool is_subclass(ConceptId a, ConceptId b) const;
  bool unsatisfiable(ConceptId a) const;

  /// Entailed superclasses of `a`, sorted (every concept if `a` is unsatisfiable).
  std::vector<ConceptId> superclasses(ConceptId a) const;
  /// Entailed subclasses of `b`, sorted (always includes unsatisfiable concepts).
  std::vector<ConceptId> subclasses(ConceptId b) const;

  /// The derived sets without the unsatisfiability expansion.
  const std::vector<ConceptId>& stored_superclasses(ConceptId a) const;
  const std::vector<ConceptId>& unsatisfiable_concepts() const { return unsat_; }

 private:
  void check(ConceptId id) const;

  std::vector<std::vector<ConceptId>> supers_;  // sorted
  std::vector<std::vector<ConceptId>> subs_;    // sorted, stored view
  std::vector<ConceptId> unsat_;                // sorted
  std::vector<std::uint8_t> unsat_flag_;
};

/// Reflexive-transitive closure of RI0 plus the RI1 chains.
class RoleHierarchy {
 public:
  RoleHierarchy() = default;
  explicit RoleHierarchy(const Theory& t);

  std::size_t role_count() const { return supers_.size(); }
  /// r ⊑* s
  bool is_subrole(RoleId r, RoleId s) const;
  const std::vector<RoleId>& superroles(RoleId r) const { return supers_.at(r); }
  const std::vector<RoleId>& subroles(RoleId s) const { return subs_.at(s); }
  const std::vector<std::array<RoleId, 3>>& chains() const { return chains_; }

 private:
  std::vector<std::vector<RoleId>> supers_;  // sorted
  std::vector<std::vector<RoleId>> subs_;    // sorted
  std::vector<std::array<RoleId, 3>> chains_;
};

/// (A, B) ∈ R(r) pairs derived during saturation.
struct RoleLink {
  RoleId role;
  ConceptId from;
  ConceptId to;
  friend bool operator==(const RoleLink&, const RoleLink&) = default;
  friend auto operator<=>(const RoleLink&, const RoleLink&) = default;
};

class RoleLinkIndex {
 public:
  RoleLinkIndex() = default;
  explicit RoleLinkIndex(std::vector<RoleLink> links);
  /// Sorted by (role, from, to).
  const std::vector<RoleLink>& links() const { return links_; }
  bool contains(RoleId r, ConceptId a, ConceptId b) const;

 private:
  std::vector<RoleLink> links_;
};

struct Classification {
  SubsumptionIndex subsumption;
  RoleHierarchy roles;
  RoleLinkIndex links;
};

/// Worklist saturation under the EL++ completion rules. BOT variants are read
/// as their ⊥-target GCI counterparts; RI axioms feed the role hierarchy.
Classification classify(const Theory& t);

inline bool is_subclass(const SubsumptionIndex& s, ConceptId a, ConceptId b) {
  return s.is_subclass(a, b);
}

/// `A <tab> B` lines, one per entailed GCI0, sorted by interned id.
std::string format_hierarchy(const SubsumptionIndex& s, const Signature& sig);

}  // namespace elkbc
