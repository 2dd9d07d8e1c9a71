#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "elkbc/theory.hpp"

namespace elkbc::testing {

/// Completion rules applied by re-scanning every rule instantiation until
/// nothing changes. Slow but obviously faithful to the rule list.
struct NaiveClassification {
  std::vector<std::set<ConceptId>> supers;
  std::set<std::tuple<RoleId, ConceptId, ConceptId>> links;
};
NaiveClassification naive_classify(const Theory& t);

/// Closure sets built by enumerating every instantiation of every closure
/// rule over naive_classify's subsumptions (an unsatisfiable concept is
/// subsumed by everything), then repeating the role chain rule over the
/// GCI2 set until it stops growing. Canonical axioms, keyed by variant.
std::map<Variant, std::set<NormalizedAxiom>> naive_closure(const Theory& t);

/// A finite interpretation with at most 8 domain elements. Concept and role
/// extensions are bitmasks (roles index pairs as x * domain + y).
struct Interpretation {
  int domain = 1;
  std::vector<std::uint8_t> concepts;
  std::vector<std::uint64_t> roles;

  std::uint8_t full() const { return static_cast<std::uint8_t>((1u << domain) - 1); }
  std::uint8_t exists(RoleId r, std::uint8_t filler) const;
};

bool holds(const Interpretation& m, const NormalizedAxiom& ax);
bool is_model(const Interpretation& m, const Theory& t);

/// Calls fn for every model of `t` over domains of size 1..max_domain.
/// Returns the number of models visited.
std::size_t for_each_model(const Theory& t, int max_domain,
                           const std::function<void(const Interpretation&)>& fn);

struct RandomTheorySpec {
  std::size_t named_concepts = 4;
  std::size_t roles = 1;
  std::size_t axioms = 8;
  bool role_inclusions = true;
  bool bottom_forms = true;
};

/// Random normalized theory; concept slots may also pick ⊤ and ⊥.
Theory random_theory(std::mt19937_64& rng, const RandomTheorySpec& spec);

}  // namespace elkbc::testing
