#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "elkbc/closure.hpp"
#include "elkbc/rng.hpp"

namespace elkbc {

enum class SamplerMode : std::uint8_t { kRandom, kFiltered, kBiased };

std::string_view sampler_mode_tag(SamplerMode m);  // "random", "filtered", "biased"
std::optional<SamplerMode> parse_sampler_mode(std::string_view tag);

struct SamplerConfig {
  SamplerMode mode = SamplerMode::kRandom;
  /// Probability of an entailed corruption in biased mode.
  double biased_p = 0.5;
  std::size_t retry_limit = 100;
  std::uint64_t seed = 42;
  /// Replacement candidates. Empty means every concept except ⊥.
  std::vector<ConceptId> pool;
  /// Slot to corrupt per variant; -1 picks the rightmost concept slot. GCI1
  /// always corrupts E.
  std::array<int, kVariantCount> slot{-1, -1, -1, -1, -1, -1, -1, -1, -1};

  /// Throws std::invalid_argument on p outside [0, 1], a zero retry limit or
  /// a slot that does not hold a concept.
  void validate() const;
};

/// No acceptable replacement exists (or none was found within the retry
/// limit). Callers skip the sample.
class PoolExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Concepts whose names satisfy `keep`, never ⊥. Useful for restricting
/// corruption to, e.g., protein nominals.
std::vector<ConceptId> concept_pool(const Signature& sig,
                                    const std::function<bool(std::string_view)>& keep);

class NegativeSampler {
 public:
  /// `dc` is required for the filtered and biased modes and must outlive the
  /// sampler.
  NegativeSampler(SamplerConfig cfg, std::size_t concept_count, const DeductiveClosure* dc = nullptr);

  const SamplerConfig& config() const { return cfg_; }
  const std::vector<ConceptId>& pool() const { return pool_; }
  /// The slot `corrupt` rewrites for this variant.
  std::size_t corrupted_slot(Variant v) const;

  /// `ax` with exactly one concept slot replaced by a different pool member.
  /// Throws PoolExhaustedError, or std::invalid_argument for RI axioms.
  NormalizedAxiom corrupt(const NormalizedAxiom& ax, Rng& rng) const;

 private:
  NormalizedAxiom with_slot(const NormalizedAxiom& ax, std::size_t slot, ConceptId c) const;

  SamplerConfig cfg_;
  std::vector<ConceptId> pool_;
  const DeductiveClosure* dc_;
};

struct SampleBatch {
  std::vector<NormalizedAxiom> negatives;
  /// Index into the input of the positive each negative was drawn for.
  std::vector<std::size_t> source;
  std::size_t skipped = 0;
};

/// `count` corruptions per GCI in `axioms` (RI axioms are ignored). Axiom i
/// draws from its own generator seeded by derive_seed(seed, i), so the batch
/// depends only on the inputs and the seed.
SampleBatch sample_batch(std::span<const NormalizedAxiom> axioms, std::size_t count,
                         const NegativeSampler& sampler, std::uint64_t seed);

}  // namespace elkbc
