#include "elkbc/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "elkbc/rng.hpp"

namespace elkbc {

namespace {

std::vector<ConceptId> intern_concepts(Theory& t, std::size_t n) {
  std::vector<ConceptId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = t.concept_id("C" + std::to_string(i));
  return ids;
}

std::vector<RoleId> intern_roles(Theory& t, std::size_t n) {
  std::vector<RoleId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = t.role_id("r" + std::to_string(i));
  return ids;
}

// Draws `k` distinct entries of `ids` (k ≤ 3).
template <class Id>
std::array<Id, 3> distinct(const std::vector<Id>& ids, std::size_t k, Rng& rng) {
  std::array<Id, 3> out{};
  for (std::size_t i = 0; i < k; ++i) {
    bool fresh;
    do {
      out[i] = ids[uniform_index(rng, ids.size())];
      fresh = true;
      for (std::size_t j = 0; j < i; ++j) fresh = fresh && out[j] != out[i];
    } while (!fresh);
  }
  return out;
}

NormalizedAxiom random_axiom(Variant v, const std::vector<ConceptId>& cs, const std::vector<RoleId>& rs,
                             Rng& rng) {
  const auto c = distinct(cs, v == Variant::kGci1 ? 3 : 2, rng);
  const RoleId r = rs.empty() ? 0 : rs[uniform_index(rng, rs.size())];
  switch (v) {
    case Variant::kGci0: return NormalizedAxiom::gci0(c[0], c[1]);
    case Variant::kGci1: return NormalizedAxiom::gci1(c[0], c[1], c[2]);
    case Variant::kGci2: return NormalizedAxiom::gci2(c[0], r, c[1]);
    case Variant::kGci3: return NormalizedAxiom::gci3(r, c[0], c[1]);
    case Variant::kGci0Bot: return NormalizedAxiom::gci0_bot(c[0]);
    case Variant::kGci1Bot: return NormalizedAxiom::gci1_bot(c[0], c[1]);
    case Variant::kGci3Bot: return NormalizedAxiom::gci3_bot(r, c[0]);
    default: break;
  }
  throw std::invalid_argument("shapes cover GCI variants only");
}

bool needs_role(Variant v) { return v == Variant::kGci2 || v == Variant::kGci3 || v == Variant::kGci3Bot; }

}  // namespace

Theory synthetic_ontology(const SyntheticConfig& cfg) {
  if (cfg.concepts < 3) throw std::invalid_argument("synthetic ontology needs at least 3 concepts");
  if (cfg.roles == 0 && (cfg.existentials > 0 || cfg.existential_heads > 0)) {
    throw std::invalid_argument("existential axioms need at least one role");
  }
  Rng rng(cfg.seed);
  Theory t;
  const auto cs = intern_concepts(t, cfg.concepts);
  const auto rs = intern_roles(t, cfg.roles);

  std::vector<std::vector<std::size_t>> parents(cfg.concepts);
  for (std::size_t i = 1; i < cfg.concepts; ++i) {
    parents[i].push_back(uniform_index(rng, i));
    if (i > 1 && uniform01(rng) < cfg.extra_parent) {
      const std::size_t p = uniform_index(rng, i);
      if (p != parents[i][0]) parents[i].push_back(p);
    }
    for (std::size_t p : parents[i]) t.add(NormalizedAxiom::gci0(cs[i], cs[p]));
    for (std::size_t p : parents[i]) {
      if (!parents[p].empty() && uniform01(rng) < cfg.shortcut) {
        t.add(NormalizedAxiom::gci0(cs[i], cs[parents[p][uniform_index(rng, parents[p].size())]]));
      }
    }
  }
  for (std::size_t k = 0; k < cfg.existentials; ++k) {
    const auto ab = distinct(cs, 2, rng);
    t.add(NormalizedAxiom::gci2(ab[0], rs[uniform_index(rng, rs.size())], ab[1]));
  }
  for (std::size_t k = 0; k < cfg.existential_heads; ++k) {
    const auto ab = distinct(cs, 2, rng);
    t.add(NormalizedAxiom::gci3(rs[uniform_index(rng, rs.size())], ab[0], ab[1]));
  }
  return t;
}

Split split_theory(const Theory& t, Variant held_out, double valid_fraction, double test_fraction,
                   std::uint64_t seed) {
  if (valid_fraction < 0.0 || test_fraction < 0.0 || valid_fraction + test_fraction > 1.0) {
    throw std::invalid_argument("split fractions must be non-negative and sum to at most 1");
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < t.axioms().size(); ++i) {
    if (t.axioms()[i].variant == held_out) candidates.push_back(i);
  }
  Rng rng(seed);
  shuffle(candidates.begin(), candidates.end(), rng);
  const auto n = static_cast<double>(candidates.size());
  const auto n_valid = static_cast<std::size_t>(std::llround(n * valid_fraction));
  const auto n_test = static_cast<std::size_t>(std::llround(n * test_fraction));

  Split out{Theory(t.signature()), {}, {}};
  std::vector<char> held(t.axioms().size(), 0);
  for (std::size_t k = 0; k < n_valid + n_test && k < candidates.size(); ++k) {
    const auto& ax = t.axioms()[candidates[k]];
    (k < n_valid ? out.valid : out.test).push_back(ax);
    held[candidates[k]] = 1;
  }
  for (std::size_t i = 0; i < t.axioms().size(); ++i) {
    if (!held[i]) out.train.add(t.axioms()[i]);
  }
  return out;
}

std::size_t DatasetShape::axiom_count() const {
  return std::accumulate(per_variant.begin(), per_variant.end(), std::size_t{0});
}

const std::vector<DatasetShape>& published_shapes() {
  static const std::vector<DatasetShape> shapes = [] {
    auto make = [](std::string name, std::array<std::size_t, 7> gci, std::size_t classes, std::size_t roles,
                   std::size_t test, Variant tv) {
      DatasetShape s{std::move(name), {}, classes, roles, test, tv};
      for (std::size_t i = 0; i < gci.size(); ++i) s.per_variant[variant_index(kGciVariants[i])] = gci[i];
      return s;
    };
    // GCI0, GCI1, GCI2, GCI3, GCI0_BOT, GCI1_BOT, GCI3_BOT
    return std::vector<DatasetShape>{
        make("yeast-iw", {81'068, 11'825, 269'567, 11'823, 0, 31, 0}, 61'846, 16, 12'040, Variant::kGci2),
        make("yeast-hf", {81'068, 11'825, 290'433, 11'823, 0, 31, 0}, 61'850, 16, 1'530, Variant::kGci2),
        make("foodon", {21'795, 1'267, 10'719, 897, 0, 495, 0}, 24'969, 43, 5'752, Variant::kGci0),
        make("galen", {27'339, 15'613, 29'618, 15'615, 0, 0, 0}, 49'223, 888, 667, Variant::kGci0),
    };
  }();
  return shapes;
}

const DatasetShape& published_shape(const std::string& name) {
  for (const auto& s : published_shapes()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown dataset shape '" + name + "'");
}

ShapedDataset generate_shaped(const DatasetShape& shape, std::uint64_t seed) {
  if (shape.classes < 5) throw std::invalid_argument("dataset shape needs at least 5 classes");
  Rng rng(seed);
  ShapedDataset out;
  Theory& t = out.train;
  const auto cs = intern_concepts(t, shape.classes - 2);
  const auto rs = intern_roles(t, shape.roles);
  for (Variant v : kGciVariants) {
    const std::size_t want = shape.count(v);
    if (want > 0 && needs_role(v) && rs.empty()) throw std::invalid_argument("shape needs roles");
    for (std::size_t have = 0; have < want;) have += t.add(random_axiom(v, cs, rs, rng));
  }
  std::unordered_set<NormalizedAxiom> seen;
  while (out.test.size() < shape.test_axioms) {
    const auto ax = random_axiom(shape.test_variant, cs, rs, rng);
    if (!t.contains(ax) && seen.insert(ax).second) out.test.push_back(ax);
  }
  return out;
}

}  // namespace elkbc
