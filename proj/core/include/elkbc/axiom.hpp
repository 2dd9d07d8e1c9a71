#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace elkbc {

using ConceptId = std::uint32_t;
using RoleId = std::uint32_t;
using IndividualId = std::uint32_t;

/// Reserved concept ids; every signature interns these first.
inline constexpr ConceptId kTop = 0;
inline constexpr ConceptId kBottom = 1;
inline constexpr std::string_view kTopName = "owl:Thing";
inline constexpr std::string_view kBottomName = "owl:Nothing";

/// The nine normal forms of EL++ axioms.
enum class Variant : std::uint8_t {
  kGci0,     // A ⊑ B
  kGci1,     // A ⊓ B ⊑ E
  kGci2,     // A ⊑ ∃r.B
  kGci3,     // ∃r.A ⊑ B
  kGci0Bot,  // A ⊑ ⊥
  kGci1Bot,  // A ⊓ B ⊑ ⊥
  kGci3Bot,  // ∃r.A ⊑ ⊥
  kRi0,      // r ⊑ s
  kRi1,      // r1 ∘ r2 ⊑ s
};

inline constexpr std::size_t kVariantCount = 9;
inline constexpr std::array<Variant, kVariantCount> kAllVariants = {
    Variant::kGci0,    Variant::kGci1,    Variant::kGci2,
    Variant::kGci3,    Variant::kGci0Bot, Variant::kGci1Bot,
    Variant::kGci3Bot, Variant::kRi0,     Variant::kRi1};

/// The seven concept-inclusion forms, i.e. the ones that carry losses.
inline constexpr std::array<Variant, 7> kGciVariants = {
    Variant::kGci0,    Variant::kGci1,    Variant::kGci2,   Variant::kGci3,
    Variant::kGci0Bot, Variant::kGci1Bot, Variant::kGci3Bot};

enum class SlotKind : std::uint8_t { kNone, kConcept, kRole };

std::string_view variant_tag(Variant v);
std::optional<Variant> parse_variant_tag(std::string_view tag);
std::size_t variant_arity(Variant v);
SlotKind slot_kind(Variant v, std::size_t slot);
constexpr std::size_t variant_index(Variant v) { return static_cast<std::size_t>(v); }
bool is_gci(Variant v);

/// A normalized axiom: a variant tag plus up to three id slots, laid out in
/// the same order as the `.nf` file format. Unused slots are zero.
struct NormalizedAxiom {
  Variant variant = Variant::kGci0;
  std::array<std::uint32_t, 3> slots{};

  static NormalizedAxiom gci0(ConceptId a, ConceptId b) { return {Variant::kGci0, {a, b, 0}}; }
  static NormalizedAxiom gci1(ConceptId a, ConceptId b, ConceptId e) {
    return {Variant::kGci1, {a, b, e}};
  }
  static NormalizedAxiom gci2(ConceptId a, RoleId r, ConceptId b) {
    return {Variant::kGci2, {a, r, b}};
  }
  static NormalizedAxiom gci3(RoleId r, ConceptId a, ConceptId b) {
    return {Variant::kGci3, {r, a, b}};
  }
  static NormalizedAxiom gci0_bot(ConceptId a) { return {Variant::kGci0Bot, {a, 0, 0}}; }
  static NormalizedAxiom gci1_bot(ConceptId a, ConceptId b) {
    return {Variant::kGci1Bot, {a, b, 0}};
  }
  static NormalizedAxiom gci3_bot(RoleId r, ConceptId a) { return {Variant::kGci3Bot, {r, a, 0}}; }
  static NormalizedAxiom ri0(RoleId r, RoleId s) { return {Variant::kRi0, {r, s, 0}}; }
  static NormalizedAxiom ri1(RoleId r1, RoleId r2, RoleId s) { return {Variant::kRi1, {r1, r2, s}}; }

  friend bool operator==(const NormalizedAxiom&, const NormalizedAxiom&) = default;
  friend auto operator<=>(const NormalizedAxiom&, const NormalizedAxiom&) = default;
};

/// Rewrites ⊥-targeted GCI0/GCI1/GCI3 into their BOT variants. Every axiom
/// stored in a Theory or a closure is canonical.
NormalizedAxiom canonical(const NormalizedAxiom& ax);

/// Index of the rightmost concept slot (the B slot for GCI0/GCI2/GCI3, E for
/// GCI1, the only concept for GCI0_BOT/GCI3_BOT, B for GCI1_BOT).
std::size_t rightmost_concept_slot(Variant v);

struct AxiomHash {
  std::size_t operator()(const NormalizedAxiom& ax) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(ax.variant) * 0x9E3779B97F4A7C15ULL;
    for (auto s : ax.slots) {
      h ^= s + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace elkbc

template <>
struct std::hash<elkbc::NormalizedAxiom> : elkbc::AxiomHash {};
