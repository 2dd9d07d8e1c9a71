#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "elkbc/axiom.hpp"

namespace elkbc {

/// Bijective name <-> dense id mapping.
class Interner {
 public:
  std::uint32_t intern(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::string& name(std::uint32_t id) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const Interner& a, const Interner& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Σ = (C, R, I). Concept ids 0 and 1 are always ⊤ and ⊥.
struct Signature {
  Signature();

  Interner concepts;
  Interner roles;
  Interner individuals;

  std::size_t concept_count() const { return concepts.size(); }
  std::size_t role_count() const { return roles.size(); }

  friend bool operator==(const Signature&, const Signature&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A normalized knowledge base: a signature plus a duplicate-free, ordered
/// list of canonical axioms.
class Theory {
 public:
  Theory() = default;
  explicit Theory(Signature sig) : signature_(std::move(sig)) {}

  const Signature& signature() const { return signature_; }
  Signature& signature() { return signature_; }
  const std::vector<NormalizedAxiom>& axioms() const { return axioms_; }

  /// Adds the canonical form of `ax`; returns false if it was already present.
  /// Throws std::out_of_range if a slot references an id outside the signature.
  bool add(const NormalizedAxiom& ax);
  bool contains(const NormalizedAxiom& ax) const;

  ConceptId concept_id(std::string_view name) { return signature_.concepts.intern(name); }
  RoleId role_id(std::string_view name) { return signature_.roles.intern(name); }

  std::size_t size() const { return axioms_.size(); }
  bool empty() const { return axioms_.empty(); }

  /// Axioms of one variant, in theory order.
  std::vector<NormalizedAxiom> of_variant(Variant v) const;

  friend bool operator==(const Theory& a, const Theory& b) {
    return a.signature_ == b.signature_ && a.axioms_ == b.axioms_;
  }

 private:
  Signature signature_;
  std::vector<NormalizedAxiom> axioms_;
  std::unordered_set<NormalizedAxiom> present_;
};

/// Parses one `.nf` axiom line against `sig`, interning names as needed.
/// Throws ParseError (line number `line_no`) on malformed input.
NormalizedAxiom parse_axiom_line(std::string_view line, Signature& sig, std::size_t line_no = 1);

/// Parses an axiom line using only names already in `sig`.
/// Throws ParseError if a name is unknown.
NormalizedAxiom parse_axiom_line_known(std::string_view line, const Signature& sig,
                                       std::size_t line_no = 1);

Theory parse_normalized(std::string_view text);
Theory parse_normalized(std::istream& in);
Theory load_normalized_file(const std::string& path);

/// Parses axiom lines into an existing signature (used for validation/test
/// splits that share the training signature). Unknown names are interned.
std::vector<NormalizedAxiom> parse_axioms_into(std::string_view text, Signature& sig);
std::vector<NormalizedAxiom> load_axioms_into(const std::string& path, Signature& sig);

std::string format_axiom(const NormalizedAxiom& ax, const Signature& sig);
std::string serialize_theory(const Theory& t);
void save_normalized_file(const Theory& t, const std::string& path);

struct SignatureStats {
  std::array<std::size_t, kVariantCount> per_variant{};
  std::size_t concepts = 0;
  std::size_t roles = 0;
  std::size_t individuals = 0;

  std::size_t count(Variant v) const { return per_variant[variant_index(v)]; }
};

SignatureStats signature_stats(const Theory& t);

}  // namespace elkbc
