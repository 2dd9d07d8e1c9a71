#include "elkbc/sampler.hpp"

#include <algorithm>
#include <string>

namespace elkbc {

std::string_view sampler_mode_tag(SamplerMode m) {
  switch (m) {
    case SamplerMode::kRandom: return "random";
    case SamplerMode::kFiltered: return "filtered";
    case SamplerMode::kBiased: return "biased";
  }
  return "?";
}

std::optional<SamplerMode> parse_sampler_mode(std::string_view tag) {
  if (tag == "random") return SamplerMode::kRandom;
  if (tag == "filtered") return SamplerMode::kFiltered;
  if (tag == "biased") return SamplerMode::kBiased;
  return std::nullopt;
}

void SamplerConfig::validate() const {
  if (!(biased_p >= 0.0 && biased_p <= 1.0)) {
    throw std::invalid_argument("biased fraction must lie in [0, 1], got " + std::to_string(biased_p));
  }
  if (retry_limit == 0) throw std::invalid_argument("retry limit must be at least 1");
  for (auto v : kGciVariants) {
    const int s = slot[variant_index(v)];
    if (s == -1) continue;
    if (s < 0 || static_cast<std::size_t>(s) >= variant_arity(v) ||
        slot_kind(v, static_cast<std::size_t>(s)) != SlotKind::kConcept) {
      throw std::invalid_argument("slot " + std::to_string(s) + " of " + std::string(variant_tag(v)) +
                                  " does not hold a concept");
    }
    if (v == Variant::kGci1 && s != 2) {
      throw std::invalid_argument("GCI1 negatives corrupt the conclusion E only");
    }
  }
}

std::vector<ConceptId> concept_pool(const Signature& sig,
                                    const std::function<bool(std::string_view)>& keep) {
  std::vector<ConceptId> out;
  for (ConceptId c = 0; c < sig.concept_count(); ++c) {
    if (c != kBottom && keep(sig.concepts.name(c))) out.push_back(c);
  }
  return out;
}

NegativeSampler::NegativeSampler(SamplerConfig cfg, std::size_t concept_count,
                                 const DeductiveClosure* dc)
    : cfg_(std::move(cfg)), dc_(dc) {
  cfg_.validate();
  if (cfg_.mode != SamplerMode::kRandom && dc_ == nullptr) {
    throw std::invalid_argument(std::string(sampler_mode_tag(cfg_.mode)) +
                                " sampling needs a deductive closure");
  }
  if (cfg_.pool.empty()) {
    for (ConceptId c = 0; c < concept_count; ++c) {
      if (c != kBottom) pool_.push_back(c);
    }
  } else {
    pool_ = cfg_.pool;
    std::sort(pool_.begin(), pool_.end());
    pool_.erase(std::unique(pool_.begin(), pool_.end()), pool_.end());
    for (auto c : pool_) {
      if (c >= concept_count) throw std::out_of_range("pool concept " + std::to_string(c) + " unknown");
    }
  }
}

std::size_t NegativeSampler::corrupted_slot(Variant v) const {
  if (!is_gci(v)) throw std::invalid_argument("role inclusions are not corrupted");
  const int s = cfg_.slot[variant_index(v)];
  return s < 0 ? rightmost_concept_slot(v) : static_cast<std::size_t>(s);
}

NormalizedAxiom NegativeSampler::with_slot(const NormalizedAxiom& ax, std::size_t slot,
                                           ConceptId c) const {
  NormalizedAxiom out = ax;
  out.slots[slot] = c;
  return out;
}

NormalizedAxiom NegativeSampler::corrupt(const NormalizedAxiom& ax, Rng& rng) const {
  const std::size_t slot = corrupted_slot(ax.variant);
  const ConceptId current = ax.slots[slot];
  const auto self = std::lower_bound(pool_.begin(), pool_.end(), current);
  const bool in_pool = self != pool_.end() && *self == current;
  const std::size_t choices = pool_.size() - (in_pool ? 1 : 0);
  if (choices == 0) throw PoolExhaustedError("no replacement candidate besides the current concept");

  // Uniform over the pool minus the current concept.
  auto draw = [&] {
    std::size_t i = uniform_index(rng, choices);
    if (in_pool && i >= static_cast<std::size_t>(self - pool_.begin())) ++i;
    return pool_[i];
  };

  switch (cfg_.mode) {
    case SamplerMode::kRandom: return with_slot(ax, slot, draw());
    case SamplerMode::kFiltered:
      for (std::size_t attempt = 0; attempt < cfg_.retry_limit; ++attempt) {
        const auto candidate = with_slot(ax, slot, draw());
        if (!dc_->entails(candidate)) return candidate;
      }
      throw PoolExhaustedError("every drawn candidate is entailed (retry limit " +
                               std::to_string(cfg_.retry_limit) + ")");
    case SamplerMode::kBiased: {
      std::vector<ConceptId> entailed, open;
      for (auto c : pool_) {
        if (c == current) continue;
        (dc_->entails(with_slot(ax, slot, c)) ? entailed : open).push_back(c);
      }
      if (entailed.empty() || open.empty()) {
        throw PoolExhaustedError("biased sampling needs both entailed and non-entailed candidates");
      }
      const auto& side = uniform01(rng) < cfg_.biased_p ? entailed : open;
      return with_slot(ax, slot, side[uniform_index(rng, side.size())]);
    }
  }
  return ax;
}

SampleBatch sample_batch(std::span<const NormalizedAxiom> axioms, std::size_t count,
                         const NegativeSampler& sampler, std::uint64_t seed) {
  SampleBatch out;
  for (std::size_t i = 0; i < axioms.size(); ++i) {
    if (!is_gci(axioms[i].variant)) continue;
    Rng rng(derive_seed(seed, i));
    for (std::size_t k = 0; k < count; ++k) {
      try {
        out.negatives.push_back(sampler.corrupt(axioms[i], rng));
        out.source.push_back(i);
      } catch (const PoolExhaustedError&) {
        ++out.skipped;
      }
    }
  }
  return out;
}

}  // namespace elkbc
