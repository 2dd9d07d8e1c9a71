#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "elkbc/theory.hpp"

namespace elkbc {

struct SyntheticConfig {
  std::size_t concepts = 200;  // named concepts, ⊤ and ⊥ not included
  std::size_t roles = 2;
  double extra_parent = 0.5;   // chance a concept gets a second parent
  double shortcut = 0.6;       // chance of also stating a grandparent edge
  std::size_t existentials = 150;       // A ⊑ ∃r.B
  std::size_t existential_heads = 40;   // ∃r.A ⊑ B
  std::uint64_t seed = 42;
};

/// A random subsumption DAG (every concept after the first picks a parent
/// among the earlier ones, so ids are a topological order) plus existential
/// axioms whose fillers follow the hierarchy.
Theory synthetic_ontology(const SyntheticConfig& cfg);

struct Split {
  Theory train;
  std::vector<NormalizedAxiom> valid;
  std::vector<NormalizedAxiom> test;
};

/// Shuffles the axioms of `held_out` variant and moves `valid_fraction` and
/// `test_fraction` of them out of the training theory. Every other axiom
/// stays in training.
Split split_theory(const Theory& t, Variant held_out, double valid_fraction, double test_fraction,
                   std::uint64_t seed);

/// Axiom counts of a published training set.
struct DatasetShape {
  std::string name;
  std::array<std::size_t, kVariantCount> per_variant{};
  std::size_t classes = 0;  // |C|, ⊤ and ⊥ included
  std::size_t roles = 0;
  std::size_t test_axioms = 0;
  Variant test_variant = Variant::kGci0;

  std::size_t count(Variant v) const { return per_variant[variant_index(v)]; }
  std::size_t axiom_count() const;
};

/// Yeast (interacts-with and has-function tasks), FoodOn and GALEN.
const std::vector<DatasetShape>& published_shapes();
const DatasetShape& published_shape(const std::string& name);

struct ShapedDataset {
  Theory train;
  std::vector<NormalizedAxiom> test;
};

/// Random theory with exactly the shape's per-variant counts, class and role
/// counts, and a test set of the shape's size that does not overlap training.
ShapedDataset generate_shaped(const DatasetShape& shape, std::uint64_t seed);

}  // namespace elkbc
