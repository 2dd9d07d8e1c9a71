#include "elkbc/trainer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace elkbc {

namespace {

constexpr char kMagic[8] = {'E', 'L', 'K', 'B', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

// Adam over the flattened parameter blocks.
class Adam {
 public:
  explicit Adam(const ParameterSet& shape) : m_(shape.zeros_like()), v_(shape.zeros_like()) {}

  void step(ParameterSet& params, const ParameterSet& grad, double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    auto p = params.blocks();
    auto g = grad.blocks();
    auto m = m_.blocks();
    auto v = v_.blocks();
    for (std::size_t b = 0; b < p.size(); ++b) {
      auto& pb = *p[b].second;
      const auto& gb = *g[b].second;
      auto& mb = *m[b].second;
      auto& vb = *v[b].second;
      for (std::size_t i = 0; i < pb.size(); ++i) {
        mb[i] = kBeta1 * mb[i] + (1.0 - kBeta1) * gb[i];
        vb[i] = kBeta2 * vb[i] + (1.0 - kBeta2) * gb[i] * gb[i];
        pb[i] -= lr * (mb[i] / c1) / (std::sqrt(vb[i] / c2) + kEps);
      }
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  ParameterSet m_;
  ParameterSet v_;
  std::uint64_t t_ = 0;
};

void check_finite(const ParameterSet& grad) {
  for (const auto& [name, block] : grad.blocks()) {
    for (double x : *block) {
      if (!std::isfinite(x)) throw std::runtime_error("non-finite gradient in block " + std::string(name));
    }
  }
}

std::vector<LossRequest> positives_of(std::span<const NormalizedAxiom> axioms) {
  std::vector<LossRequest> out;
  for (const auto& ax : axioms) {
    if (is_gci(ax.variant)) out.push_back({ax, Polarity::kPositive});
  }
  return out;
}

nlohmann::json hyper_json(const Hyperparameters& h) {
  return {{"dim", h.dim}, {"gamma", h.gamma}, {"epsilon", h.epsilon}, {"delta", h.delta}, {"lambda", h.lambda}};
}

Hyperparameters hyper_from(const nlohmann::json& j) {
  Hyperparameters h;
  h.dim = j.at("dim").get<std::size_t>();
  h.gamma = j.at("gamma").get<double>();
  h.epsilon = j.at("epsilon").get<double>();
  h.delta = j.at("delta").get<double>();
  h.lambda = j.at("lambda").get<double>();
  return h;
}

void put_doubles(std::ostream& out, const std::vector<double>& xs) {
  for (double x : xs) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes), 8);
  }
}

void get_doubles(std::istream& in, std::vector<double>& xs) {
  for (auto& x : xs) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw std::runtime_error("checkpoint is truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    x = std::bit_cast<double>(bits);
  }
}

void put_u64(std::ostream& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(std::istream& in, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    const int c = in.get();
    if (c == EOF) throw std::runtime_error("checkpoint is truncated");
    v |= static_cast<std::uint64_t>(c) << (8 * i);
  }
  return v;
}

}  // namespace

std::string_view negative_scope_tag(NegativeScope s) {
  return s == NegativeScope::kGci2Only ? "gci2-only" : "all-forms";
}

std::optional<NegativeScope> parse_negative_scope(std::string_view tag) {
  if (tag == "gci2-only") return NegativeScope::kGci2Only;
  if (tag == "all-forms") return NegativeScope::kAllForms;
  return std::nullopt;
}

TrainConfig TrainConfig::defaults(ModelKind kind) {
  TrainConfig c;
  c.model = kind;
  c.hyper = Hyperparameters::defaults(kind);
  switch (kind) {
    case ModelKind::kElem: c.learning_rate = 1e-4; break;
    case ModelKind::kElbe: c.learning_rate = 1e-2; break;
    case ModelKind::kBox2El: c.learning_rate = 1e-3; break;
  }
  return c;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs ≥ 1 required");
  if (batch_size < 1) throw std::invalid_argument("batch size ≥ 1 required");
  if (hyper.dim < 2) throw std::invalid_argument("dimension ≥ 2 required");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (negatives_per_positive < 1) throw std::invalid_argument("negatives per positive ≥ 1 required");
  if (!(lr_factor > 0.0 && lr_factor <= 1.0)) throw std::invalid_argument("lr factor must lie in (0, 1]");
  sampler.validate();
}

GeometricModel init_model(const Signature& sig, const TrainConfig& cfg, std::uint64_t seed) {
  GeometricModel m(cfg.model, sig.concept_count(), sig.role_count(), cfg.hyper);
  Rng rng(seed);
  m.initialize(rng);
  return m;
}

double positive_loss(const GeometricModel& m, std::span<const NormalizedAxiom> axioms) {
  const auto reqs = positives_of(axioms);
  return total_loss(m, reqs);
}

TrainResult train(const Theory& t, const TrainConfig& cfg, const DeductiveClosure* dc,
                  std::span<const NormalizedAxiom> validation) {
  cfg.validate();
  const auto positives = positives_of(t.axioms());
  if (positives.empty()) throw std::invalid_argument("theory has no concept inclusions to train on");

  TrainResult result{init_model(t.signature(), cfg, cfg.seed), {}};
  GeometricModel& model = result.model;
  TrainLog& log = result.log;
  log.monitored_validation = !validation.empty();

  const NegativeSampler sampler(cfg.sampler, t.signature().concept_count(), dc);
  std::vector<NormalizedAxiom> corruptible;
  for (const auto& req : positives) {
    if (cfg.scope == NegativeScope::kAllForms || req.axiom.variant == Variant::kGci2) {
      corruptible.push_back(req.axiom);
    }
  }

  Adam adam(model.params());
  double lr = cfg.learning_rate;
  std::size_t since_best = 0;
  std::size_t since_lr = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto negatives = sample_batch(corruptible, cfg.negatives_per_positive, sampler,
                                        derive_seed(cfg.sampler.seed, epoch));

    // Requests grouped by variant, each group shuffled and cut into batches.
    std::array<std::vector<LossRequest>, kVariantCount> groups;
    for (const auto& req : positives) groups[variant_index(req.axiom.variant)].push_back(req);
    for (const auto& ax : negatives.negatives) {
      groups[variant_index(ax.variant)].push_back({ax, Polarity::kNegative});
    }
    Rng order(derive_seed(cfg.seed, epoch));
    for (auto& g : groups) shuffle(g.begin(), g.end(), order);

    double loss_sum = 0.0;
    std::size_t steps = 0;
    std::array<std::size_t, kVariantCount> cursor{};
    for (bool any = true; any;) {
      any = false;
      for (std::size_t v = 0; v < kVariantCount; ++v) {
        const auto& g = groups[v];
        if (cursor[v] >= g.size()) continue;
        any = true;
        const std::size_t end = std::min(g.size(), cursor[v] + cfg.batch_size);
        const std::span<const LossRequest> batch(g.data() + cursor[v], end - cursor[v]);
        cursor[v] = end;

        ParameterSet grad = model.params().zeros_like();
        const double loss = total_loss(model, batch, &grad);
        if (!std::isfinite(loss)) {
          throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch));
        }
        check_finite(grad);
        adam.step(model.params(), grad, lr);
        model.clamp();
        loss_sum += loss;
        ++steps;
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = steps ? loss_sum / static_cast<double>(steps) : 0.0;
    entry.monitored_loss = validation.empty() ? entry.train_loss : positive_loss(model, validation);
    entry.learning_rate = lr;
    entry.negatives = negatives.negatives.size();
    entry.skipped_negatives = negatives.skipped;
    log.epochs.push_back(entry);

    if (entry.monitored_loss < log.best_loss * (1.0 - cfg.improvement) ||
        (std::isinf(log.best_loss) && std::isfinite(entry.monitored_loss))) {
      log.best_loss = entry.monitored_loss;
      log.best_epoch = epoch;
      since_best = 0;
      since_lr = 0;
    } else {
      ++since_best;
      ++since_lr;
      if (since_lr >= cfg.patience) {
        lr = std::max(lr * cfg.lr_factor, std::min(cfg.lr_floor, lr));
        since_lr = 0;
      }
      if (since_best >= cfg.early_stop) {
        log.early_stopped = true;
        break;
      }
    }
  }
  return result;
}

std::uint64_t signature_hash(const Signature& sig) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
    h ^= 0xFF;
    h *= 0x100000001B3ULL;
  };
  for (const auto& n : sig.concepts.names()) mix(n);
  mix("\x01roles");
  for (const auto& n : sig.roles.names()) mix(n);
  return h;
}

void save_checkpoint(const std::string& path, const GeometricModel& m, const CheckpointHeader& header) {
  nlohmann::json j;
  j["model"] = std::string(model_tag(m.kind()));
  j["hyper"] = hyper_json(m.hyper());
  j["concepts"] = m.concept_count();
  j["roles"] = m.role_count();
  j["signature_hash"] = header.signature_hash;
  j["config"] = nlohmann::json::parse(header.config_json.empty() ? "{}" : header.config_json);
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& [name, block] : m.params().blocks()) {
    blocks.push_back({{"name", std::string(name)}, {"length", block->size()}});
  }
  j["blocks"] = blocks;
  const std::string text = j.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out.write(kMagic, sizeof kMagic);
  put_u64(out, kVersion, 4);
  put_u64(out, text.size(), 8);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, block] : m.params().blocks()) put_doubles(out, *block);
  if (!out) throw std::runtime_error("failed writing checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw std::runtime_error(path + " is not a checkpoint");
  }
  const auto version = get_u64(in, 4);
  if (version != kVersion) throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  const auto length = get_u64(in, 8);
  if (length > (1u << 30)) throw std::runtime_error("checkpoint header is implausibly large");
  std::string text(length, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(length))) {
    throw std::runtime_error("checkpoint is truncated");
  }

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad checkpoint header: ") + e.what());
  }
  Checkpoint ck;
  try {
    const auto kind = parse_model_kind(j.at("model").get<std::string>());
    if (!kind) throw std::runtime_error("unknown model tag in checkpoint");
    ck.header.model = *kind;
    ck.header.hyper = hyper_from(j.at("hyper"));
    ck.header.concepts = j.at("concepts").get<std::size_t>();
    ck.header.roles = j.at("roles").get<std::size_t>();
    ck.header.signature_hash = j.at("signature_hash").get<std::uint64_t>();
    ck.header.config_json = j.at("config").dump();
    ck.model = GeometricModel(ck.header.model, ck.header.concepts, ck.header.roles, ck.header.hyper);
    auto blocks = ck.model.params().blocks();
    const auto& listed = j.at("blocks");
    if (listed.size() != blocks.size()) throw std::runtime_error("checkpoint block list does not match");
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (listed[b].at("name").get<std::string>() != blocks[b].first ||
          listed[b].at("length").get<std::size_t>() != blocks[b].second->size()) {
        throw std::runtime_error("checkpoint block " + std::string(blocks[b].first) + " has the wrong shape");
      }
      get_doubles(in, *blocks[b].second);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad checkpoint header: ") + e.what());
  }
  return ck;
}

}  // namespace elkbc
