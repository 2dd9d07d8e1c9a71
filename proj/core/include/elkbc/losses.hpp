#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "elkbc/axiom.hpp"
#include "elkbc/model.hpp"

namespace elkbc {

enum class Polarity : std::uint8_t { kPositive, kNegative };

struct LossRequest {
  NormalizedAxiom axiom;
  Polarity polarity = Polarity::kPositive;
};

/// Loss of a single request under the model's own family. When `grad` is
/// given, `scale` times the (sub)gradient is added into it; kinks of max(0, .)
/// and of the norms take the zero subgradient.
///
/// Throws std::invalid_argument for RI axioms and std::out_of_range for ids
/// outside the model.
double axiom_loss(const GeometricModel& m, const LossRequest& req, ParameterSet* grad = nullptr,
                  double scale = 1.0);

/// Family-specific entry points; they throw std::invalid_argument when the
/// model is of another kind.
double elem_loss(const GeometricModel& m, const LossRequest& req, ParameterSet* grad = nullptr,
                 double scale = 1.0);
double elbe_loss(const GeometricModel& m, const LossRequest& req, ParameterSet* grad = nullptr,
                 double scale = 1.0);
double box2el_loss(const GeometricModel& m, const LossRequest& req, ParameterSet* grad = nullptr,
                   double scale = 1.0);

/// λ times the mean bump norm over all concepts (zero for other models).
double bump_regularizer(const GeometricModel& m, ParameterSet* grad = nullptr, double scale = 1.0);

struct LossBreakdown {
  /// Mean loss per (variant, polarity) group; groups with no requests are 0.
  std::array<std::array<double, 2>, kVariantCount> group_mean{};
  std::array<std::array<std::size_t, 2>, kVariantCount> group_size{};
  double regularizer = 0.0;
  double total = 0.0;
};

/// Mean within each (variant, polarity) group, summed over groups, plus the
/// bump regularizer for Box²EL.
double total_loss(const GeometricModel& m, std::span<const LossRequest> batch,
                  ParameterSet* grad = nullptr, LossBreakdown* breakdown = nullptr);

}  // namespace elkbc
