#include "elkbc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elkbc {

namespace {

void check_same(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void check_box(const AABox& b) { check_same(b.center.size(), b.offset.size()); }

}  // namespace

bool AABox::empty() const {
  return std::any_of(offset.begin(), offset.end(), [](double o) { return o < 0.0; });
}

double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

AABox box_intersection(const AABox& a, const AABox& b) {
  check_box(a);
  check_box(b);
  check_same(a.dim(), b.dim());
  AABox out{std::vector<double>(a.dim()), std::vector<double>(a.dim())};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double lower = std::max(a.center[i] - a.offset[i], b.center[i] - b.offset[i]);
    const double upper = std::min(a.center[i] + a.offset[i], b.center[i] + b.offset[i]);
    out.center[i] = 0.5 * (lower + upper);
    out.offset[i] = 0.5 * (upper - lower);
  }
  return out;
}

std::vector<double> box_distance(const AABox& a, const AABox& b) {
  check_box(a);
  check_box(b);
  check_same(a.dim(), b.dim());
  std::vector<double> d(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    d[i] = std::abs(a.center[i] - b.center[i]) - (a.offset[i] + b.offset[i]);
  }
  return d;
}

double containment_measure_mu(const AABox& inner, const AABox& outer) {
  check_box(inner);
  check_box(outer);
  check_same(inner.dim(), outer.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < inner.dim(); ++i) {
    const double z = std::abs(inner.center[i] - outer.center[i]) + inner.offset[i] - outer.offset[i];
    if (z > 0.0) s += z * z;
  }
  return std::sqrt(s);
}

AABox translated(const AABox& b, std::span<const double> t, double sign) {
  check_box(b);
  check_same(b.dim(), t.size());
  AABox out = b;
  for (std::size_t i = 0; i < b.dim(); ++i) out.center[i] += sign * t[i];
  return out;
}

}  // namespace elkbc
