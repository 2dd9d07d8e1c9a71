#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace elkbc {

/// n-ball: center and non-negative radius.
struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

/// Axis-aligned box given by its center and per-coordinate half-widths.
/// Offsets of a parameter box are kept non-negative; an intersection may
/// come back with negative offsets, which marks it as empty.
struct AABox {
  std::vector<double> center;
  std::vector<double> offset;

  std::size_t dim() const { return center.size(); }
  bool empty() const;
};

/// Lower corner is the max of the lowers, upper corner the min of the uppers.
/// Throws std::invalid_argument on a dimension mismatch.
AABox box_intersection(const AABox& a, const AABox& b);

/// Element-wise |c_a - c_b| - (o_a + o_b); negative where the boxes overlap.
std::vector<double> box_distance(const AABox& a, const AABox& b);

/// ‖max(0, |c_in - c_out| + o_in - o_out)‖, zero iff inner ⊆ outer.
double containment_measure_mu(const AABox& inner, const AABox& outer);

/// Box moved by +t (sign = 1) or -t (sign = -1); offsets unchanged.
AABox translated(const AABox& b, std::span<const double> t, double sign = 1.0);

double l2_norm(std::span<const double> x);

}  // namespace elkbc
