#include "elkbc/axiom.hpp"

#include <stdexcept>

namespace elkbc {

namespace {

struct VariantInfo {
  std::string_view tag;
  std::array<SlotKind, 3> slots;
};

constexpr SlotKind C = SlotKind::kConcept;
constexpr SlotKind R = SlotKind::kRole;
constexpr SlotKind N = SlotKind::kNone;

constexpr std::array<VariantInfo, kVariantCount> kInfo = {{
    {"GCI0", {C, C, N}},
    {"GCI1", {C, C, C}},
    {"GCI2", {C, R, C}},
    {"GCI3", {R, C, C}},
    {"GCI0_BOT", {C, N, N}},
    {"GCI1_BOT", {C, C, N}},
    {"GCI3_BOT", {R, C, N}},
    {"RI0", {R, R, N}},
    {"RI1", {R, R, R}},
}};

}  // namespace

std::string_view variant_tag(Variant v) { return kInfo[variant_index(v)].tag; }

std::optional<Variant> parse_variant_tag(std::string_view tag) {
  for (auto v : kAllVariants) {
    if (kInfo[variant_index(v)].tag == tag) return v;
  }
  return std::nullopt;
}

std::size_t variant_arity(Variant v) {
  std::size_t n = 0;
  for (auto k : kInfo[variant_index(v)].slots) n += (k != SlotKind::kNone);
  return n;
}

SlotKind slot_kind(Variant v, std::size_t slot) {
  if (slot >= 3) return SlotKind::kNone;
  return kInfo[variant_index(v)].slots[slot];
}

bool is_gci(Variant v) { return v != Variant::kRi0 && v != Variant::kRi1; }

NormalizedAxiom canonical(const NormalizedAxiom& ax) {
  switch (ax.variant) {
    case Variant::kGci0:
      if (ax.slots[1] == kBottom) return NormalizedAxiom::gci0_bot(ax.slots[0]);
      break;
    case Variant::kGci1:
      if (ax.slots[2] == kBottom) return NormalizedAxiom::gci1_bot(ax.slots[0], ax.slots[1]);
      break;
    case Variant::kGci3:
      if (ax.slots[2] == kBottom) return NormalizedAxiom::gci3_bot(ax.slots[0], ax.slots[1]);
      break;
    default:
      break;
  }
  return ax;
}

std::size_t rightmost_concept_slot(Variant v) {
  switch (v) {
    case Variant::kGci0: return 1;
    case Variant::kGci1: return 2;
    case Variant::kGci2: return 2;
    case Variant::kGci3: return 2;
    case Variant::kGci0Bot: return 0;
    case Variant::kGci1Bot: return 1;
    case Variant::kGci3Bot: return 1;
    default:
      throw std::invalid_argument("role inclusion axioms have no concept slot");
  }
}

}  // namespace elkbc
