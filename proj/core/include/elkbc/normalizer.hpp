#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "elkbc/theory.hpp"

namespace elkbc {

/// EL++ concept description: ⊥ | ⊤ | A | C ⊓ D | ∃r.C | {a}.
/// `name` holds the concept, role or individual name depending on the kind.
struct ConceptExpr {
  enum class Kind { kBot, kTop, kName, kAnd, kSome, kNominal };

  Kind kind = Kind::kTop;
  std::string name;
  std::vector<ConceptExpr> args;  // two for kAnd, one for kSome

  static ConceptExpr bot() { return {Kind::kBot, {}, {}}; }
  static ConceptExpr top() { return {Kind::kTop, {}, {}}; }
  static ConceptExpr atom(std::string n) { return {Kind::kName, std::move(n), {}}; }
  static ConceptExpr nominal(std::string ind) { return {Kind::kNominal, std::move(ind), {}}; }
  static ConceptExpr conj(ConceptExpr a, ConceptExpr b);
  static ConceptExpr some(std::string role, ConceptExpr filler);

  /// ⊥, ⊤, names and nominals; everything else is complex.
  bool is_atomic() const { return kind != Kind::kAnd && kind != Kind::kSome; }

  friend bool operator==(const ConceptExpr&, const ConceptExpr&) = default;
};

struct InputAxiom {
  enum class Kind { kSub, kEquiv, kInstance, kRoleAssertion, kRoleChainSub };

  Kind kind = Kind::kSub;
  ConceptExpr lhs;                  // kSub, kEquiv, kInstance (the concept)
  ConceptExpr rhs;                  // kSub, kEquiv
  std::vector<std::string> roles;   // kRoleAssertion: {r}; kRoleChainSub: chain then super role
  std::vector<std::string> individuals;  // kInstance: {a}; kRoleAssertion: {a, b}

  friend bool operator==(const InputAxiom&, const InputAxiom&) = default;
};

/// Name a nominal {a} is interned under as a concept.
std::string nominal_concept_name(std::string_view individual);

std::vector<InputAxiom> parse_input(std::string_view text);
std::vector<InputAxiom> load_input_file(const std::string& path);

std::string to_elpp(const ConceptExpr& c);
std::string to_elpp(const InputAxiom& ax);

struct FreshName {
  std::string name;
  bool is_role = false;
  std::string definition;  // the expression the name abbreviates, in .elpp syntax
};

struct NormalizationResult {
  Theory theory;
  std::vector<FreshName> ledger;
};

/// Rewrites arbitrary EL++ axioms into normal forms. Fresh concepts are named
/// `_N1, _N2, ...` and fresh roles `_u1, _u2, ...` in first-use order, with
/// subexpressions normalized before the axiom that contains them.
NormalizationResult normalize(const std::vector<InputAxiom>& axioms);

/// The axioms of an already normalized theory as input axioms, so that a
/// `.nf` file can be fed back through `normalize`. Concept names of the form
/// `{a}` become nominals.
std::vector<InputAxiom> to_input_axioms(const Theory& t);

/// Renders the fresh-name ledger as `name <tab> kind <tab> definition` lines.
std::string format_ledger(const std::vector<FreshName>& ledger);

}  // namespace elkbc
