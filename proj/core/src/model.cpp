#include "elkbc/model.hpp"

#include <cmath>
#include <stdexcept>

namespace elkbc {

std::string_view model_tag(ModelKind k) {
  switch (k) {
    case ModelKind::kElem: return "ELEM";
    case ModelKind::kElbe: return "ELBE";
    case ModelKind::kBox2El: return "BOX2EL";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view tag) {
  std::string up;
  for (char c : tag) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "ELEM" || up == "ELEMBEDDINGS") return ModelKind::kElem;
  if (up == "ELBE") return ModelKind::kElbe;
  if (up == "BOX2EL" || up == "BOXSQEL") return ModelKind::kBox2El;
  return std::nullopt;
}

Hyperparameters Hyperparameters::defaults(ModelKind k) {
  Hyperparameters h;
  switch (k) {
    case ModelKind::kElem:
      h.dim = 50;
      h.gamma = 0.0;
      h.epsilon = 0.01;
      break;
    case ModelKind::kElbe:
      h.dim = 200;
      h.gamma = 0.0;
      h.epsilon = 0.001;
      break;
    case ModelKind::kBox2El:
      h.dim = 200;
      h.gamma = 0.01;
      h.epsilon = 0.01;
      h.delta = 2.0;
      h.lambda = 0.05;
      break;
  }
  return h;
}

std::vector<std::pair<std::string_view, std::vector<double>*>> ParameterSet::blocks() {
  return {{"center", &center},           {"radius", &radius},
          {"offset", &offset},           {"bump", &bump},
          {"role", &role},               {"head_center", &head_center},
          {"head_offset", &head_offset}, {"tail_center", &tail_center},
          {"tail_offset", &tail_offset}};
}

std::vector<std::pair<std::string_view, const std::vector<double>*>> ParameterSet::blocks() const {
  std::vector<std::pair<std::string_view, const std::vector<double>*>> out;
  for (auto [name, ptr] : const_cast<ParameterSet*>(this)->blocks()) out.push_back({name, ptr});
  return out;
}

std::size_t ParameterSet::size() const {
  std::size_t n = 0;
  for (auto [name, ptr] : blocks()) n += ptr->size();
  return n;
}

ParameterSet ParameterSet::zeros_like() const {
  ParameterSet z;
  z.dim = dim;
  auto src = blocks();
  auto dst = z.blocks();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i].second->assign(src[i].second->size(), 0.0);
  return z;
}

void ParameterSet::fill(double v) {
  for (auto [name, ptr] : blocks()) std::fill(ptr->begin(), ptr->end(), v);
}

GeometricModel::GeometricModel(ModelKind kind, std::size_t concepts, std::size_t roles,
                               Hyperparameters hp)
    : kind_(kind), concepts_(concepts), roles_(roles), hp_(hp) {
  if (hp_.dim == 0) throw std::invalid_argument("embedding dimension must be positive");
  const std::size_t n = hp_.dim;
  params_.dim = n;
  params_.center.assign(concepts * n, 0.0);
  switch (kind) {
    case ModelKind::kElem:
      params_.radius.assign(concepts, 0.0);
      params_.role.assign(roles * n, 0.0);
      break;
    case ModelKind::kElbe:
      params_.offset.assign(concepts * n, 0.0);
      params_.role.assign(roles * n, 0.0);
      break;
    case ModelKind::kBox2El:
      params_.offset.assign(concepts * n, 0.0);
      params_.bump.assign(concepts * n, 0.0);
      params_.head_center.assign(roles * n, 0.0);
      params_.head_offset.assign(roles * n, 0.0);
      params_.tail_center.assign(roles * n, 0.0);
      params_.tail_offset.assign(roles * n, 0.0);
      break;
  }
}

void GeometricModel::initialize(Rng& rng) {
  auto fill = [&](std::vector<double>& v, double lo, double hi) {
    for (auto& x : v) x = uniform_real(rng, lo, hi);
  };
  fill(params_.center, -0.5, 0.5);
  fill(params_.radius, 0.05, 0.3);
  fill(params_.offset, 0.05, 0.3);
  fill(params_.bump, -0.1, 0.1);
  fill(params_.role, -0.5, 0.5);
  fill(params_.head_center, -0.5, 0.5);
  fill(params_.head_offset, 0.05, 0.3);
  fill(params_.tail_center, -0.5, 0.5);
  fill(params_.tail_offset, 0.05, 0.3);
  if (kind_ == ModelKind::kElem) {
    const std::size_t n = hp_.dim;
    for (std::size_t c = 0; c < concepts_; ++c) {
      double* x = params_.center.data() + c * n;
      const double norm = l2_norm({x, n});
      if (norm > 0.0) {
        for (std::size_t i = 0; i < n; ++i) x[i] /= norm;
      }
    }
  }
}

void GeometricModel::clamp() {
  for (auto* block : {&params_.radius, &params_.offset, &params_.head_offset, &params_.tail_offset}) {
    for (auto& x : *block) x = std::max(x, 0.0);
  }
}

std::span<const double> GeometricModel::row(const std::vector<double>& block, std::size_t i) const {
  const std::size_t n = hp_.dim;
  if (block.empty()) throw std::logic_error("parameter block not used by this model");
  if ((i + 1) * n > block.size()) throw std::out_of_range("unknown id " + std::to_string(i));
  return {block.data() + i * n, n};
}

Ball GeometricModel::ball(ConceptId c) const {
  auto x = center(c);
  return {{x.begin(), x.end()}, radius(c)};
}

AABox GeometricModel::box(ConceptId c) const {
  auto x = center(c);
  auto o = offset(c);
  return {{x.begin(), x.end()}, {o.begin(), o.end()}};
}

AABox GeometricModel::head(RoleId r) const {
  auto x = row(params_.head_center, r);
  auto o = row(params_.head_offset, r);
  return {{x.begin(), x.end()}, {o.begin(), o.end()}};
}

AABox GeometricModel::tail(RoleId r) const {
  auto x = row(params_.tail_center, r);
  auto o = row(params_.tail_offset, r);
  return {{x.begin(), x.end()}, {o.begin(), o.end()}};
}

}  // namespace elkbc
