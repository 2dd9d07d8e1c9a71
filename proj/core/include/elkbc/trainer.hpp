#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elkbc/losses.hpp"
#include "elkbc/sampler.hpp"

namespace elkbc {

enum class NegativeScope : std::uint8_t { kGci2Only, kAllForms };

std::string_view negative_scope_tag(NegativeScope s);  // "gci2-only", "all-forms"
std::optional<NegativeScope> parse_negative_scope(std::string_view tag);

struct TrainConfig {
  ModelKind model = ModelKind::kElem;
  Hyperparameters hyper = Hyperparameters::defaults(ModelKind::kElem);
  double learning_rate = 1e-4;
  std::size_t epochs = 2000;
  std::size_t batch_size = 32768;
  std::uint64_t seed = 42;
  NegativeScope scope = NegativeScope::kAllForms;
  SamplerConfig sampler;
  std::size_t negatives_per_positive = 1;
  /// Epochs without improvement before the learning rate is multiplied by
  /// `lr_factor`.
  std::size_t patience = 10;
  /// Epochs without improvement before training stops.
  std::size_t early_stop = 20;
  double lr_factor = 0.1;
  double lr_floor = 1e-6;
  /// Relative decrease the monitored loss must show to count as improvement.
  double improvement = 1e-4;

  /// Defaults for one model: dimension, γ, ε, δ, λ and learning rate.
  static TrainConfig defaults(ModelKind kind);

  /// Throws std::invalid_argument on epochs = 0, batch size = 0, dimension
  /// below 2 or an invalid sampler configuration.
  void validate() const;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;       // mean step loss over the epoch
  double monitored_loss = 0.0;   // the quantity the scheduler watches
  double learning_rate = 0.0;
  std::size_t negatives = 0;
  std::size_t skipped_negatives = 0;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  std::size_t best_epoch = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  bool early_stopped = false;
  /// True when validation axioms were given; otherwise the scheduler watches
  /// the training loss.
  bool monitored_validation = false;
};

struct TrainResult {
  GeometricModel model;
  TrainLog log;
};

/// Randomly initialized model sized for the signature.
GeometricModel init_model(const Signature& sig, const TrainConfig& cfg, std::uint64_t seed);

/// Total loss over the positive requests of `axioms` only (RI axioms are
/// skipped).
double positive_loss(const GeometricModel& m, std::span<const NormalizedAxiom> axioms);

/// Adam (β₁ = 0.9, β₂ = 0.999, eps = 1e-8) over per-variant batches with
/// sampled negatives. Radii and offsets are clamped to ≥ 0 after every step.
/// `dc` is required for filtered and biased sampling. The model returned is
/// the one after the last epoch. Throws std::invalid_argument on an empty
/// theory or invalid config and std::runtime_error on a non-finite loss.
TrainResult train(const Theory& t, const TrainConfig& cfg, const DeductiveClosure* dc = nullptr,
                  std::span<const NormalizedAxiom> validation = {});

/// FNV-1a over the concept and role names, in id order.
std::uint64_t signature_hash(const Signature& sig);

struct CheckpointHeader {
  ModelKind model = ModelKind::kElem;
  Hyperparameters hyper;
  std::size_t concepts = 0;
  std::size_t roles = 0;
  std::uint64_t signature_hash = 0;
  /// Free-form JSON object (the run configuration), stored verbatim.
  std::string config_json = "{}";
};

/// Layout: 8-byte magic "ELKBCKPT", u32 version (1), u64 header length,
/// a JSON header of that length, then every parameter block in the fixed
/// block order as little-endian IEEE-754 doubles. The header lists each
/// block's length. Throws std::runtime_error on I/O failure.
void save_checkpoint(const std::string& path, const GeometricModel& m, const CheckpointHeader& header);

struct Checkpoint {
  CheckpointHeader header;
  GeometricModel model;
};

/// Throws std::runtime_error on a missing file, bad magic, unsupported
/// version or truncated data.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace elkbc
