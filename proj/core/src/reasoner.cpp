#include "elkbc/reasoner.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace elkbc {

// ---------------------------------------------------------------------------
// SubsumptionIndex

SubsumptionIndex::SubsumptionIndex(std::vector<std::vector<ConceptId>> supers,
                                   std::size_t concept_count)
    : supers_(std::move(supers)) {
  supers_.resize(concept_count);
  subs_.assign(concept_count, {});
  unsat_flag_.assign(concept_count, 0);
  for (ConceptId a = 0; a < concept_count; ++a) {
    auto& s = supers_[a];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (auto b : s) subs_[b].push_back(a);
    if (std::binary_search(s.begin(), s.end(), kBottom)) {
      unsat_flag_[a] = 1;
      unsat_.push_back(a);
    }
  }
}

void SubsumptionIndex::check(ConceptId id) const {
  if (id >= supers_.size()) throw std::out_of_range("unknown concept id " + std::to_string(id));
}

bool SubsumptionIndex::is_subclass(ConceptId a, ConceptId b) const {
  check(a);
  check(b);
  return unsat_flag_[a] || std::binary_search(supers_[a].begin(), supers_[a].end(), b);
}

bool SubsumptionIndex::unsatisfiable(ConceptId a) const {
  check(a);
  return unsat_flag_[a] != 0;
}

std::vector<ConceptId> SubsumptionIndex::superclasses(ConceptId a) const {
  check(a);
  if (unsat_flag_[a]) {
    std::vector<ConceptId> all(supers_.size());
    std::iota(all.begin(), all.end(), ConceptId{0});
    return all;
  }
  return supers_[a];
}

std::vector<ConceptId> SubsumptionIndex::subclasses(ConceptId b) const {
  check(b);
  std::vector<ConceptId> out;
  out.reserve(subs_[b].size() + unsat_.size());
  std::set_union(subs_[b].begin(), subs_[b].end(), unsat_.begin(), unsat_.end(),
                 std::back_inserter(out));
  return out;
}

const std::vector<ConceptId>& SubsumptionIndex::stored_superclasses(ConceptId a) const {
  check(a);
  return supers_[a];
}

// ---------------------------------------------------------------------------
// RoleHierarchy

RoleHierarchy::RoleHierarchy(const Theory& t) {
  const std::size_t n = t.signature().role_count();
  std::vector<std::vector<RoleId>> direct(n);
  for (const auto& ax : t.axioms()) {
    if (ax.variant == Variant::kRi0) direct[ax.slots[0]].push_back(ax.slots[1]);
    if (ax.variant == Variant::kRi1) chains_.push_back({ax.slots[0], ax.slots[1], ax.slots[2]});
  }
  supers_.assign(n, {});
  subs_.assign(n, {});
  std::vector<std::uint8_t> seen(n);
  for (RoleId r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<RoleId> stack{r};
    seen[r] = 1;
    while (!stack.empty()) {
      const RoleId cur = stack.back();
      stack.pop_back();
      supers_[r].push_back(cur);
      for (auto s : direct[cur]) {
        if (!seen[s]) {
          seen[s] = 1;
          stack.push_back(s);
        }
      }
    }
    std::sort(supers_[r].begin(), supers_[r].end());
    for (auto s : supers_[r]) subs_[s].push_back(r);
  }
}

bool RoleHierarchy::is_subrole(RoleId r, RoleId s) const {
  const auto& sup = supers_.at(r);
  return std::binary_search(sup.begin(), sup.end(), s);
}

// ---------------------------------------------------------------------------
// RoleLinkIndex

RoleLinkIndex::RoleLinkIndex(std::vector<RoleLink> links) : links_(std::move(links)) {
  std::sort(links_.begin(), links_.end());
}

bool RoleLinkIndex::contains(RoleId r, ConceptId a, ConceptId b) const {
  return std::binary_search(links_.begin(), links_.end(), RoleLink{r, a, b});
}

// ---------------------------------------------------------------------------
// Saturation

namespace {

using RoleConcept = std::pair<RoleId, ConceptId>;

class Saturation {
 public:
  Saturation(const Theory& t, const RoleHierarchy& rh)
      : n_(t.signature().concept_count()), rh_(rh) {
    const std::size_t nr = t.signature().role_count();
    gci0_.resize(n_);
    gci1_.resize(n_);
    gci2_.resize(n_);
    gci3_.resize(n_);
    chains_first_.resize(nr);
    chains_second_.resize(nr);
    links_.resize(nr);
    for (const auto& ax : t.axioms()) {
      const auto& s = ax.slots;
      switch (ax.variant) {
        case Variant::kGci0: gci0_[s[0]].push_back(s[1]); break;
        case Variant::kGci0Bot: gci0_[s[0]].push_back(kBottom); break;
        case Variant::kGci1: add_conj(s[0], s[1], s[2]); break;
        case Variant::kGci1Bot: add_conj(s[0], s[1], kBottom); break;
        case Variant::kGci2: gci2_[s[0]].push_back({s[1], s[2]}); break;
        case Variant::kGci3: gci3_[s[1]].push_back({s[0], s[2]}); break;
        case Variant::kGci3Bot: gci3_[s[1]].push_back({s[0], kBottom}); break;
        case Variant::kRi0: break;
        case Variant::kRi1:
          chains_first_[s[0]].push_back({s[1], s[2]});
          chains_second_[s[1]].push_back({s[0], s[2]});
          break;
      }
    }
    set_.resize(n_);
    list_.resize(n_);
    succ_.resize(n_);
    pred_.resize(n_);
  }

  void run() {
    for (ConceptId a = 0; a < n_; ++a) {
      add_sub(a, a);
      add_sub(a, kTop);
    }
    while (!queue_.empty()) {
      const Event e = queue_.front();
      queue_.pop_front();
      if (e.is_link) {
        process_link(e.role, e.a, e.b);
      } else {
        process_sub(e.a, e.b);
      }
    }
  }

  std::vector<std::vector<ConceptId>> take_supers() { return std::move(list_); }

  std::vector<RoleLink> collect_links() const {
    std::vector<RoleLink> out;
    for (ConceptId a = 0; a < n_; ++a) {
      for (const auto& [r, b] : succ_[a]) out.push_back({r, a, b});
    }
    return out;
  }

 private:
  struct Event {
    bool is_link;
    RoleId role;
    ConceptId a;
    ConceptId b;
  };

  void add_conj(ConceptId a1, ConceptId a2, ConceptId target) {
    gci1_[a1].push_back({a2, target});
    if (a1 != a2) gci1_[a2].push_back({a1, target});
  }

  bool has(ConceptId a, ConceptId x) const { return set_[a].count(x) > 0; }

  void add_sub(ConceptId a, ConceptId x) {
    if (set_[a].insert(x).second) {
      list_[a].push_back(x);
      queue_.push_back({false, 0, a, x});
    }
  }

  void add_link(RoleId r, ConceptId a, ConceptId b) {
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    if (links_[r].insert(key).second) {
      succ_[a].push_back({r, b});
      pred_[b].push_back({r, a});
      queue_.push_back({true, r, a, b});
    }
  }

  // X was added to S(A).
  void process_sub(ConceptId a, ConceptId x) {
    for (auto b : gci0_[x]) add_sub(a, b);                       // CR1
    for (const auto& [other, target] : gci1_[x]) {               // CR2
      if (has(a, other)) add_sub(a, target);
    }
    for (const auto& [r, b] : gci2_[x]) add_link(r, a, b);       // CR3
    const auto& g3 = gci3_[x];
    for (std::size_t i = 0; i < pred_[a].size(); ++i) {
      const auto [r, c] = pred_[a][i];
      for (const auto& [r3, e] : g3) {                             // CR4
        if (r3 == r) add_sub(c, e);
      }
      if (x == kBottom) add_sub(c, kBottom);                      // CR5
    }
  }

  // (A, B) was added to R(r).
  void process_link(RoleId r, ConceptId a, ConceptId b) {
    for (std::size_t i = 0; i < list_[b].size(); ++i) {          // CR4
      const ConceptId x = list_[b][i];
      for (const auto& [r3, e] : gci3_[x]) {
        if (r3 == r) add_sub(a, e);
      }
    }
    if (has(b, kBottom)) add_sub(a, kBottom);                    // CR5
    for (auto s : rh_.superroles(r)) {                           // CR6
      if (s != r) add_link(s, a, b);
    }
    for (const auto& [r2, s] : chains_first_[r]) {               // CR7, link as first
      for (std::size_t i = 0; i < succ_[b].size(); ++i) {
        const auto [rr, e] = succ_[b][i];
        if (rr == r2) add_link(s, a, e);
      }
    }
    for (const auto& [r1, s] : chains_second_[r]) {              // CR7, link as second
      for (std::size_t i = 0; i < pred_[a].size(); ++i) {
        const auto [rr, c] = pred_[a][i];
        if (rr == r1) add_link(s, c, b);
      }
    }
  }

  std::size_t n_;
  const RoleHierarchy& rh_;

  std::vector<std::vector<ConceptId>> gci0_;
  std::vector<std::vector<std::pair<ConceptId, ConceptId>>> gci1_;
  std::vector<std::vector<RoleConcept>> gci2_;
  std::vector<std::vector<RoleConcept>> gci3_;  // by filler: (role, target)
  std::vector<std::vector<std::pair<RoleId, RoleId>>> chains_first_;
  std::vector<std::vector<std::pair<RoleId, RoleId>>> chains_second_;

  std::vector<std::unordered_set<ConceptId>> set_;
  std::vector<std::vector<ConceptId>> list_;
  std::vector<std::unordered_set<std::uint64_t>> links_;
  std::vector<std::vector<RoleConcept>> succ_;
  std::vector<std::vector<RoleConcept>> pred_;
  std::deque<Event> queue_;
};

}  // namespace

Classification classify(const Theory& t) {
  Classification out;
  out.roles = RoleHierarchy(t);
  Saturation sat(t, out.roles);
  sat.run();
  out.links = RoleLinkIndex(sat.collect_links());
  out.subsumption = SubsumptionIndex(sat.take_supers(), t.signature().concept_count());
  return out;
}

std::string format_hierarchy(const SubsumptionIndex& s, const Signature& sig) {
  std::string out;
  for (ConceptId a = 0; a < s.concept_count(); ++a) {
    for (auto b : s.superclasses(a)) {
      out += sig.concepts.name(a);
      out += '\t';
      out += sig.concepts.name(b);
      out += '\n';
    }
  }
  return out;
}

}  // namespace elkbc
