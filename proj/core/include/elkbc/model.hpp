#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elkbc/axiom.hpp"
#include "elkbc/geometry.hpp"
#include "elkbc/rng.hpp"

namespace elkbc {

enum class ModelKind : std::uint8_t { kElem, kElbe, kBox2El };

std::string_view model_tag(ModelKind k);  // "ELEM", "ELBE", "BOX2EL"
std::optional<ModelKind> parse_model_kind(std::string_view tag);

struct Hyperparameters {
  std::size_t dim = 50;
  double gamma = 0.0;     // margin; may be negative
  double epsilon = 0.01;  // minimum radius / offset norm for non-empty classes
  double delta = 2.0;     // target distance in the Box²EL GCI2/GCI3 negatives
  double lambda = 0.05;   // Box²EL bump regularization weight

  /// Defaults for each model taken from the published tuning runs.
  static Hyperparameters defaults(ModelKind k);
};

/// Flat parameter blocks, row-major with `dim` columns. Blocks a model does
/// not use stay empty. The same shape doubles as a gradient accumulator.
struct ParameterSet {
  std::size_t dim = 0;
  std::vector<double> center;       // concepts x dim
  std::vector<double> radius;       // concepts (ELEm)
  std::vector<double> offset;       // concepts x dim (ELBE, Box²EL)
  std::vector<double> bump;         // concepts x dim (Box²EL)
  std::vector<double> role;         // roles x dim (ELEm, ELBE)
  std::vector<double> head_center;  // roles x dim (Box²EL)
  std::vector<double> head_offset;
  std::vector<double> tail_center;
  std::vector<double> tail_offset;

  /// Named views over every block, in a fixed order.
  std::vector<std::pair<std::string_view, std::vector<double>*>> blocks();
  std::vector<std::pair<std::string_view, const std::vector<double>*>> blocks() const;

  std::size_t size() const;
  /// Same shape, all zeros.
  ParameterSet zeros_like() const;
  void fill(double v);
};

class GeometricModel {
 public:
  GeometricModel() = default;
  GeometricModel(ModelKind kind, std::size_t concepts, std::size_t roles, Hyperparameters hp);

  ModelKind kind() const { return kind_; }
  std::size_t dim() const { return hp_.dim; }
  std::size_t concept_count() const { return concepts_; }
  std::size_t role_count() const { return roles_; }
  const Hyperparameters& hyper() const { return hp_; }
  Hyperparameters& hyper() { return hp_; }
  const ParameterSet& params() const { return params_; }
  ParameterSet& params() { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  /// Random initialization: centers U[-0.5, 0.5] (projected to the unit
  /// sphere for ELEm), radii/offsets U[0.05, 0.3], bumps U[-0.1, 0.1].
  void initialize(Rng& rng);
  /// Keeps radii and offsets non-negative.
  void clamp();

  std::span<const double> center(ConceptId c) const { return row(params_.center, c); }
  std::span<const double> offset(ConceptId c) const { return row(params_.offset, c); }
  std::span<const double> bump(ConceptId c) const { return row(params_.bump, c); }
  std::span<const double> role_vector(RoleId r) const { return row(params_.role, r); }
  double radius(ConceptId c) const { return params_.radius.at(c); }

  Ball ball(ConceptId c) const;
  AABox box(ConceptId c) const;
  AABox head(RoleId r) const;
  AABox tail(RoleId r) const;

 private:
  std::span<const double> row(const std::vector<double>& block, std::size_t i) const;

  ModelKind kind_ = ModelKind::kElem;
  std::size_t concepts_ = 0;
  std::size_t roles_ = 0;
  Hyperparameters hp_;
  ParameterSet params_;
};

}  // namespace elkbc
