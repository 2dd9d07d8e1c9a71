#include "elkbc/toy.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace elkbc {

namespace {

ConceptId need(const Theory& t, std::string_view name) {
  auto id = t.signature().concepts.find(name);
  if (!id) throw std::invalid_argument("toy theory lacks concept " + std::string(name));
  return *id;
}

double dist(std::span<const double> a, std::span<const double> b, std::span<const double> t, double s) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] + s * t[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

// Largest per-coordinate gap |c_a − c_b| − o_a − o_b; positive means the
// boxes are separated along at least one axis.
double max_gap(const AABox& a, const AABox& b) {
  const auto d = box_distance(a, b);
  double best = -INFINITY;
  for (double x : d) best = std::max(best, x);
  return best;
}

GeometryCheck check(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs <= rhs};
}

AABox bumped(const AABox& b, std::span<const double> bump, double sign) { return translated(b, bump, sign); }

}  // namespace

Theory toy_protein_theory(bool with_proteins) {
  std::ostringstream nf;
  nf << "GCI1_BOT {GO1} {GO2}\n"
     << "GCI1_BOT A B\n"
     << "GCI3 has_function {GO1} B\n"
     << "GCI3 has_function {GO2} A\n";
  if (with_proteins) {
    for (int i = 1; i <= 5; ++i) nf << "GCI2 {P" << i << "} has_function {GO1}\n";
    for (int i = 1; i <= 5; ++i) nf << "GCI2 {Q" << i << "} has_function {GO2}\n";
  }
  return parse_normalized(nf.str());
}

std::vector<GeometryCheck> toy_assertions(const GeometricModel& m, const Theory& toy, double tol) {
  const ConceptId go1 = need(toy, "{GO1}"), go2 = need(toy, "{GO2}"), a = need(toy, "A");
  const RoleId hf = *toy.signature().roles.find("has_function");
  std::vector<ConceptId> qs;
  for (int i = 1; i <= 5; ++i) {
    if (auto q = toy.signature().concepts.find("{Q" + std::to_string(i) + "}")) qs.push_back(*q);
  }

  std::vector<GeometryCheck> out;
  switch (m.kind()) {
    case ModelKind::kElem: {
      const auto v = m.role_vector(hf);
      out.push_back(check("disjoint {GO1} {GO2}", m.radius(go1) + m.radius(go2) - tol,
                          dist(m.center(go1), m.center(go2), v, 0.0)));
      for (auto q : qs) {
        out.push_back(check("contained " + toy.signature().concepts.name(q) + "+hf in {GO2}",
                            dist(m.center(q), m.center(go2), v, 1.0) + m.radius(q),
                            m.radius(go2) + tol));
      }
      out.push_back(check("meets {GO2}-hf A", dist(m.center(go2), m.center(a), v, -1.0),
                          m.radius(go2) + m.radius(a) + tol));
      break;
    }
    case ModelKind::kElbe: {
      const auto v = m.role_vector(hf);
      out.push_back(check("disjoint {GO1} {GO2}", -tol, max_gap(m.box(go1), m.box(go2))));
      for (auto q : qs) {
        out.push_back(check("contained " + toy.signature().concepts.name(q) + "+hf in {GO2}",
                            containment_measure_mu(translated(m.box(q), v, 1.0), m.box(go2)), tol));
      }
      out.push_back(check("meets {GO2}-hf A", max_gap(translated(m.box(go2), v, -1.0), m.box(a)), tol));
      break;
    }
    case ModelKind::kBox2El: {
      out.push_back(check("disjoint {GO1} {GO2}", -tol, max_gap(m.box(go1), m.box(go2))));
      for (auto q : qs) {
        const double head = containment_measure_mu(bumped(m.box(q), m.bump(go2), 1.0), m.head(hf));
        const double tail = containment_measure_mu(bumped(m.box(go2), m.bump(q), 1.0), m.tail(hf));
        out.push_back(check("contained " + toy.signature().concepts.name(q) + "+hf in {GO2}",
                            std::max(head, tail), tol));
      }
      out.push_back(check("meets {GO2}-hf A",
                          containment_measure_mu(bumped(m.head(hf), m.bump(go2), -1.0), m.box(a)), tol));
      break;
    }
  }
  return out;
}

bool all_pass(const std::vector<GeometryCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string ToyRegime::name() const {
  return std::string(negative_scope_tag(scope)) + "_" + std::string(sampler_mode_tag(sampling));
}

std::vector<ToyRegime> toy_regimes() {
  return {{NegativeScope::kGci2Only, SamplerMode::kRandom},
          {NegativeScope::kGci2Only, SamplerMode::kFiltered},
          {NegativeScope::kAllForms, SamplerMode::kRandom},
          {NegativeScope::kAllForms, SamplerMode::kFiltered}};
}

TrainConfig toy_train_config(ModelKind kind, const ToyRegime& regime, std::uint64_t seed) {
  TrainConfig cfg = TrainConfig::defaults(kind);
  cfg.hyper.dim = 2;
  cfg.hyper.gamma = 0.0;
  cfg.hyper.epsilon = 0.1;
  cfg.learning_rate = 0.01;
  cfg.epochs = 3000;
  // The sampled negatives change every epoch, so the training loss is noisy
  // at this scale; a short patience decays the rate before the balls settle.
  cfg.patience = 300;
  cfg.early_stop = cfg.epochs;
  cfg.seed = seed;
  cfg.scope = regime.scope;
  cfg.sampler.mode = regime.sampling;
  cfg.sampler.seed = seed;
  return cfg;
}

ToyRun run_toy_regime(ModelKind kind, const ToyRegime& regime, std::uint64_t seed) {
  const Theory toy = toy_protein_theory();
  const auto dc = DeductiveClosure::compute(toy);
  const auto cfg = toy_train_config(kind, regime, seed);
  auto trained = train(toy, cfg, &dc);
  ToyRun run{regime, std::move(trained.model), std::move(trained.log), 0.0, {}};
  run.final_positive_loss = positive_loss(run.model, toy.axioms());
  run.checks = toy_assertions(run.model, toy);
  return run;
}

std::string concepts_csv(const GeometricModel& m, const Signature& sig) {
  std::ostringstream out;
  out << std::setprecision(10);
  const std::size_t n = m.dim();
  out << "concept";
  for (std::size_t i = 0; i < n; ++i) out << ",c" << i;
  if (m.kind() == ModelKind::kElem) {
    out << ",radius";
  } else {
    for (std::size_t i = 0; i < n; ++i) out << ",o" << i;
  }
  out << '\n';
  for (ConceptId c = 0; c < m.concept_count(); ++c) {
    out << '"' << sig.concepts.name(c) << '"';
    for (double x : m.center(c)) out << ',' << x;
    if (m.kind() == ModelKind::kElem) {
      out << ',' << m.radius(c);
    } else {
      for (double x : m.offset(c)) out << ',' << x;
    }
    out << '\n';
  }
  return out.str();
}

std::string roles_csv(const GeometricModel& m, const Signature& sig) {
  std::ostringstream out;
  out << std::setprecision(10);
  const std::size_t n = m.dim();
  out << "role";
  if (m.kind() == ModelKind::kBox2El) {
    for (const char* part : {"head_c", "head_o", "tail_c", "tail_o"}) {
      for (std::size_t i = 0; i < n; ++i) out << ',' << part << i;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out << ",v" << i;
  }
  out << '\n';
  for (RoleId r = 0; r < m.role_count(); ++r) {
    out << '"' << sig.roles.name(r) << '"';
    if (m.kind() == ModelKind::kBox2El) {
      for (const auto& b : {m.head(r), m.tail(r)}) {
        for (double x : b.center) out << ',' << x;
        for (double x : b.offset) out << ',' << x;
      }
    } else {
      for (double x : m.role_vector(r)) out << ',' << x;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace elkbc
