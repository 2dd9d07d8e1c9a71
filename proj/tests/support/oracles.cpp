#include "oracles.hpp"

#include <string>

namespace elkbc::testing {

NaiveClassification naive_classify(const Theory& t) {
  const std::size_t n = t.signature().concept_count();
  const std::size_t nr = t.signature().role_count();

  std::vector<std::set<RoleId>> rsup(nr);
  for (RoleId r = 0; r < nr; ++r) rsup[r].insert(r);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& ax : t.axioms()) {
      if (ax.variant != Variant::kRi0) continue;
      for (RoleId r = 0; r < nr; ++r) {
        if (rsup[r].count(ax.slots[0]) && rsup[r].insert(ax.slots[1]).second) changed = true;
      }
    }
  }

  NaiveClassification out;
  out.supers.assign(n, {});
  auto& S = out.supers;
  auto& R = out.links;
  for (ConceptId a = 0; a < n; ++a) {
    S[a].insert(a);
    S[a].insert(kTop);
  }
  auto target = [](const NormalizedAxiom& ax) -> ConceptId {
    switch (ax.variant) {
      case Variant::kGci0: return ax.slots[1];
      case Variant::kGci1: return ax.slots[2];
      case Variant::kGci3: return ax.slots[2];
      default: return kBottom;
    }
  };

  for (bool changed = true; changed;) {
    changed = false;
    auto add_s = [&](ConceptId a, ConceptId x) {
      if (S[a].insert(x).second) changed = true;
    };
    auto add_r = [&](RoleId r, ConceptId a, ConceptId b) {
      if (R.insert({r, a, b}).second) changed = true;
    };
    for (ConceptId a = 0; a < n; ++a) {
      for (const auto& ax : t.axioms()) {
        const auto& s = ax.slots;
        switch (ax.variant) {
          case Variant::kGci0:
          case Variant::kGci0Bot:
            if (S[a].count(s[0])) add_s(a, target(ax));
            break;
          case Variant::kGci1:
          case Variant::kGci1Bot:
            if (S[a].count(s[0]) && S[a].count(s[1])) add_s(a, target(ax));
            break;
          case Variant::kGci2:
            if (S[a].count(s[0])) add_r(s[1], a, s[2]);
            break;
          default: break;
        }
      }
    }
    const auto snapshot = R;
    for (const auto& [r, a, b] : snapshot) {
      for (const auto& ax : t.axioms()) {
        const auto& s = ax.slots;
        if ((ax.variant == Variant::kGci3 || ax.variant == Variant::kGci3Bot) && s[0] == r &&
            S[b].count(s[1])) {
          add_s(a, target(ax));
        }
        if (ax.variant == Variant::kRi1 && s[0] == r) {
          for (const auto& [r2, b2, e] : snapshot) {
            if (r2 == s[1] && b2 == b) add_r(s[2], a, e);
          }
        }
      }
      if (S[b].count(kBottom)) add_s(a, kBottom);
      for (auto sr : rsup[r]) add_r(sr, a, b);
    }
  }
  return out;
}

std::uint8_t Interpretation::exists(RoleId r, std::uint8_t filler) const {
  std::uint8_t out = 0;
  for (int x = 0; x < domain; ++x) {
    for (int y = 0; y < domain; ++y) {
      if (((roles[r] >> (x * domain + y)) & 1u) && ((filler >> y) & 1u)) {
        out = static_cast<std::uint8_t>(out | (1u << x));
      }
    }
  }
  return out;
}

namespace {

bool subset(std::uint8_t a, std::uint8_t b) { return (a & ~b) == 0; }

std::uint64_t compose(const Interpretation& m, std::uint64_t r1, std::uint64_t r2) {
  std::uint64_t out = 0;
  const int d = m.domain;
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      if (!((r1 >> (x * d + y)) & 1u)) continue;
      for (int z = 0; z < d; ++z) {
        if ((r2 >> (y * d + z)) & 1u) out |= std::uint64_t{1} << (x * d + z);
      }
    }
  }
  return out;
}

}  // namespace

bool holds(const Interpretation& m, const NormalizedAxiom& ax) {
  const auto& c = m.concepts;
  const auto& s = ax.slots;
  switch (ax.variant) {
    case Variant::kGci0: return subset(c[s[0]], c[s[1]]);
    case Variant::kGci1: return subset(c[s[0]] & c[s[1]], c[s[2]]);
    case Variant::kGci2: return subset(c[s[0]], m.exists(s[1], c[s[2]]));
    case Variant::kGci3: return subset(m.exists(s[0], c[s[1]]), c[s[2]]);
    case Variant::kGci0Bot: return c[s[0]] == 0;
    case Variant::kGci1Bot: return (c[s[0]] & c[s[1]]) == 0;
    case Variant::kGci3Bot: return m.exists(s[0], c[s[1]]) == 0;
    case Variant::kRi0: return (m.roles[s[0]] & ~m.roles[s[1]]) == 0;
    case Variant::kRi1: return (compose(m, m.roles[s[0]], m.roles[s[1]]) & ~m.roles[s[2]]) == 0;
  }
  return false;
}

bool is_model(const Interpretation& m, const Theory& t) {
  for (const auto& ax : t.axioms()) {
    if (!holds(m, ax)) return false;
  }
  return true;
}

std::size_t for_each_model(const Theory& t, int max_domain,
                           const std::function<void(const Interpretation&)>& fn) {
  const std::size_t n = t.signature().concept_count();
  const std::size_t nr = t.signature().role_count();
  std::size_t models = 0;
  for (int d = 1; d <= max_domain; ++d) {
    Interpretation m;
    m.domain = d;
    m.concepts.assign(n, 0);
    m.roles.assign(nr, 0);
    m.concepts[kTop] = m.full();
    m.concepts[kBottom] = 0;
    const std::uint64_t concept_choices = std::uint64_t{1} << d;
    const std::uint64_t role_choices = std::uint64_t{1} << (d * d);
    std::uint64_t total = 1;
    for (std::size_t i = 2; i < n; ++i) total *= concept_choices;
    for (std::size_t i = 0; i < nr; ++i) total *= role_choices;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t rest = code;
      for (std::size_t i = 2; i < n; ++i) {
        m.concepts[i] = static_cast<std::uint8_t>(rest % concept_choices);
        rest /= concept_choices;
      }
      for (std::size_t i = 0; i < nr; ++i) {
        m.roles[i] = rest % role_choices;
        rest /= role_choices;
      }
      if (is_model(m, t)) {
        ++models;
        fn(m);
      }
    }
  }
  return models;
}

Theory random_theory(std::mt19937_64& rng, const RandomTheorySpec& spec) {
  Theory t;
  for (std::size_t i = 0; i < spec.named_concepts; ++i) t.concept_id("C" + std::to_string(i));
  for (std::size_t i = 0; i < spec.roles; ++i) t.role_id("r" + std::to_string(i));
  const auto n = static_cast<ConceptId>(t.signature().concept_count());
  const auto nr = static_cast<RoleId>(t.signature().role_count());
  std::uniform_int_distribution<ConceptId> any_concept(0, n - 1);
  // Named concepts most of the time, ⊤/⊥ occasionally.
  auto concept_pick = [&]() -> ConceptId {
    if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) return any_concept(rng);
    return std::uniform_int_distribution<ConceptId>(2, n - 1)(rng);
  };
  auto role_pick = [&]() -> RoleId { return std::uniform_int_distribution<RoleId>(0, nr - 1)(rng); };

  std::vector<Variant> pool = {Variant::kGci0, Variant::kGci1, Variant::kGci2, Variant::kGci3};
  if (spec.bottom_forms) {
    pool.insert(pool.end(), {Variant::kGci0Bot, Variant::kGci1Bot, Variant::kGci3Bot});
  }
  if (spec.role_inclusions && nr > 0) pool.insert(pool.end(), {Variant::kRi0, Variant::kRi1});
  if (nr == 0) {
    std::erase_if(pool, [](Variant v) {
      return v == Variant::kGci2 || v == Variant::kGci3 || v == Variant::kGci3Bot;
    });
  }
  std::uniform_int_distribution<std::size_t> pick_variant(0, pool.size() - 1);
  for (std::size_t i = 0; i < spec.axioms; ++i) {
    const Variant v = pool[pick_variant(rng)];
    NormalizedAxiom ax{v, {0, 0, 0}};
    for (std::size_t s = 0; s < variant_arity(v); ++s) {
      ax.slots[s] = slot_kind(v, s) == SlotKind::kRole ? role_pick() : concept_pick();
    }
    t.add(ax);
  }
  return t;
}

}  // namespace elkbc::testing

namespace elkbc::testing {

std::map<Variant, std::set<NormalizedAxiom>> naive_closure(const Theory& t) {
  const auto n = static_cast<ConceptId>(t.signature().concept_count());
  const auto nr = static_cast<RoleId>(t.signature().role_count());
  const auto S = naive_classify(t).supers;
  auto unsat = [&](ConceptId x) { return S[x].count(kBottom) > 0; };
  auto sub = [&](ConceptId x, ConceptId y) { return unsat(x) || S[x].count(y) > 0; };

  std::vector<std::set<RoleId>> rsup(nr);
  for (RoleId r = 0; r < nr; ++r) rsup[r].insert(r);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& ax : t.axioms()) {
      if (ax.variant != Variant::kRi0) continue;
      for (RoleId r = 0; r < nr; ++r) {
        if (rsup[r].count(ax.slots[0]) && rsup[r].insert(ax.slots[1]).second) changed = true;
      }
    }
  }
  auto rsub = [&](RoleId r, RoleId s) { return rsup[r].count(s) > 0; };

  std::map<Variant, std::set<NormalizedAxiom>> out;
  for (Variant v : kGciVariants) out[v];
  auto add = [&](const NormalizedAxiom& ax) { out[canonical(ax).variant].insert(canonical(ax)); };
  auto conj = [&](ConceptId a, ConceptId b, ConceptId e) {
    add(NormalizedAxiom::gci1(a, b, e));
    add(NormalizedAxiom::gci1(b, a, e));
  };

  for (ConceptId a = 0; a < n; ++a) {
    for (ConceptId b = 0; b < n; ++b) {
      if (sub(a, b)) add(NormalizedAxiom::gci0(a, b));
    }
  }

  // Rules over asserted axioms.
  for (const auto& ax : t.axioms()) {
    const auto& s = ax.slots;
    for (ConceptId x = 0; x < n; ++x) {
      for (ConceptId y = 0; y < n; ++y) {
        switch (ax.variant) {
          case Variant::kGci1:
            for (ConceptId e = 0; e < n; ++e) {
              if (sub(x, s[0]) && sub(y, s[1]) && sub(s[2], e)) conj(x, y, e);
            }
            break;
          case Variant::kGci1Bot:
            if (sub(x, s[0]) && sub(y, s[1])) conj(x, y, kBottom);
            break;
          case Variant::kGci2:
            for (RoleId r = 0; r < nr; ++r) {
              if (sub(x, s[0]) && rsub(s[1], r) && sub(s[2], y)) add(NormalizedAxiom::gci2(x, r, y));
            }
            break;
          case Variant::kGci3:
            for (RoleId r = 0; r < nr; ++r) {
              if (sub(x, s[1]) && rsub(r, s[0]) && sub(s[2], y)) add(NormalizedAxiom::gci3(r, x, y));
            }
            break;
          case Variant::kGci3Bot:
            for (RoleId r = 0; r < nr; ++r) {
              if (y == 0 && sub(x, s[1]) && rsub(r, s[0])) add(NormalizedAxiom::gci3_bot(r, x));
            }
            break;
          default: break;
        }
      }
    }
  }

  // Rules that hold in every theory, given the subsumptions.
  for (ConceptId a = 0; a < n; ++a) {
    for (ConceptId b = 0; b < n; ++b) {
      for (ConceptId e = 0; e < n; ++e) {
        if (b == kBottom || unsat(b)) conj(a, b, e);
        if (sub(b, e)) conj(a, b, e);
        if (b == kTop && sub(a, e)) conj(a, b, e);
        for (ConceptId m = 0; m < n; ++m) {
          if (sub(a, m) && sub(b, m) && sub(m, e)) conj(a, b, e);
        }
      }
    }
    for (RoleId r = 0; r < nr; ++r) {
      for (ConceptId b = 0; b < n; ++b) {
        if (a == kBottom || unsat(a)) add(NormalizedAxiom::gci2(a, r, b));
      }
      if (a != kBottom) add(NormalizedAxiom::gci3(r, a, kTop));
    }
  }
  for (const auto& ax : std::set<NormalizedAxiom>(out[Variant::kGci1Bot])) {
    for (ConceptId e = 0; e < n; ++e) conj(ax.slots[0], ax.slots[1], e);
  }

  // Role chains, repeated until nothing new appears.
  for (bool changed = true; changed;) {
    changed = false;
    const auto gci2 = out[Variant::kGci2];
    for (const auto& chain : t.axioms()) {
      if (chain.variant != Variant::kRi1) continue;
      for (const auto& first : gci2) {
        if (first.slots[1] != chain.slots[0]) continue;
        for (const auto& second : gci2) {
          if (second.slots[1] != chain.slots[1] || second.slots[0] != first.slots[2]) continue;
          changed |= out[Variant::kGci2].insert(NormalizedAxiom::gci2(first.slots[0], chain.slots[2], second.slots[2])).second;
        }
      }
    }
  }
  return out;
}

}  // namespace elkbc::testing
