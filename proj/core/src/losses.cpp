#include "elkbc/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace elkbc {

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }
double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Pointer access to parameter rows plus the matching gradient rows.
class Rows {
 public:
  Rows(const GeometricModel& m, ParameterSet* grad) : m_(m), g_(grad), n_(m.dim()) {}

  std::size_t n() const { return n_; }
  bool grad() const { return g_ != nullptr; }

  const double* center(ConceptId c) const { return m_.params().center.data() + c * n_; }
  const double* offset(ConceptId c) const { return m_.params().offset.data() + c * n_; }
  const double* bump(ConceptId c) const { return m_.params().bump.data() + c * n_; }
  const double* role(RoleId r) const { return m_.params().role.data() + r * n_; }
  const double* head_c(RoleId r) const { return m_.params().head_center.data() + r * n_; }
  const double* head_o(RoleId r) const { return m_.params().head_offset.data() + r * n_; }
  const double* tail_c(RoleId r) const { return m_.params().tail_center.data() + r * n_; }
  const double* tail_o(RoleId r) const { return m_.params().tail_offset.data() + r * n_; }
  double radius(ConceptId c) const { return m_.params().radius[c]; }

  double* g_center(ConceptId c) const { return g_ ? g_->center.data() + c * n_ : nullptr; }
  double* g_offset(ConceptId c) const { return g_ ? g_->offset.data() + c * n_ : nullptr; }
  double* g_bump(ConceptId c) const { return g_ ? g_->bump.data() + c * n_ : nullptr; }
  double* g_role(RoleId r) const { return g_ ? g_->role.data() + r * n_ : nullptr; }
  double* g_head_c(RoleId r) const { return g_ ? g_->head_center.data() + r * n_ : nullptr; }
  double* g_head_o(RoleId r) const { return g_ ? g_->head_offset.data() + r * n_ : nullptr; }
  double* g_tail_c(RoleId r) const { return g_ ? g_->tail_center.data() + r * n_ : nullptr; }
  double* g_tail_o(RoleId r) const { return g_ ? g_->tail_offset.data() + r * n_ : nullptr; }
  void add_radius(ConceptId c, double v) const {
    if (g_) g_->radius[c] += v;
  }

  const Hyperparameters& hp() const { return m_.hyper(); }

 private:
  const GeometricModel& m_;
  ParameterSet* g_;
  std::size_t n_;
};

// ---------------------------------------------------------------------------
// Balls

// |‖c‖ - 1|, pulling centers onto the unit sphere.
double unit_reg(const Rows& p, ConceptId c, double scale) {
  const double* x = p.center(c);
  double sq = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) sq += x[i] * x[i];
  const double norm = std::sqrt(sq);
  const double value = std::abs(norm - 1.0);
  if (p.grad() && norm > 0.0) {
    const double k = scale * sgn(norm - 1.0) / norm;
    double* g = p.g_center(c);
    for (std::size_t i = 0; i < p.n(); ++i) g[i] += k * x[i];
  }
  return value;
}

// ‖c_a + s·v_r - c_b‖ with s ∈ {-1, 0, 1}.
struct BallGap {
  ConceptId a;
  ConceptId b;
  int s = 0;
  RoleId r = 0;
};

double gap_norm(const Rows& p, const BallGap& d) {
  const double* ca = p.center(d.a);
  const double* cb = p.center(d.b);
  const double* v = d.s ? p.role(d.r) : nullptr;
  double sq = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double u = ca[i] - cb[i] + (v ? d.s * v[i] : 0.0);
    sq += u * u;
  }
  return std::sqrt(sq);
}

void gap_backward(const Rows& p, const BallGap& d, double norm, double up) {
  if (!p.grad() || norm <= 0.0 || up == 0.0) return;
  const double* ca = p.center(d.a);
  const double* cb = p.center(d.b);
  const double* v = d.s ? p.role(d.r) : nullptr;
  double* ga = p.g_center(d.a);
  double* gb = p.g_center(d.b);
  double* gv = d.s ? p.g_role(d.r) : nullptr;
  const double k = up / norm;
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double u = ca[i] - cb[i] + (v ? d.s * v[i] : 0.0);
    ga[i] += k * u;
    gb[i] -= k * u;
    if (gv) gv[i] += k * d.s * u;
  }
}

// max(0, α·gap + Σ β·radius + constant)
double ball_hinge(const Rows& p, const BallGap& d, double alpha,
                  std::initializer_list<std::pair<ConceptId, double>> radii, double constant,
                  double scale) {
  const double norm = gap_norm(p, d);
  double z = alpha * norm + constant;
  for (const auto& [c, beta] : radii) z += beta * p.radius(c);
  if (z <= 0.0) return 0.0;
  if (p.grad()) {
    gap_backward(p, d, norm, scale * alpha);
    for (const auto& [c, beta] : radii) p.add_radius(c, scale * beta);
  }
  return z;
}

double radius_floor(const Rows& p, ConceptId a, double scale) {
  const double z = p.hp().epsilon - p.radius(a);
  if (z <= 0.0) return 0.0;
  p.add_radius(a, -scale);
  return z;
}

double regs(const Rows& p, std::initializer_list<ConceptId> cs, double scale) {
  double s = 0.0;
  for (auto c : cs) s += unit_reg(p, c, scale);
  return s;
}

double elem_impl(const Rows& p, const LossRequest& req, double scale) {
  const auto& s = req.axiom.slots;
  const double g = p.hp().gamma;
  const bool pos = req.polarity == Polarity::kPositive;
  switch (req.axiom.variant) {
    case Variant::kGci0: {
      const BallGap d{s[0], s[1]};
      const double h = pos ? ball_hinge(p, d, 1.0, {{s[0], 1.0}, {s[1], -1.0}}, -g, scale)
                           : ball_hinge(p, d, -1.0, {{s[0], 1.0}, {s[1], 1.0}}, g, scale);
      return h + regs(p, {s[0], s[1]}, scale);
    }
    case Variant::kGci1: {
      const ConceptId a = s[0], b = s[1], e = s[2];
      double h;
      if (pos) {
        h = ball_hinge(p, {a, b}, 1.0, {{a, -1.0}, {b, -1.0}}, -g, scale) +
            ball_hinge(p, {a, e}, 1.0, {{a, -1.0}}, -g, scale) +
            ball_hinge(p, {b, e}, 1.0, {{b, -1.0}}, -g, scale);
      } else {
        h = ball_hinge(p, {a, b}, 1.0, {{a, -1.0}, {b, -1.0}}, -g, scale) +
            ball_hinge(p, {a, e}, -1.0, {{a, 1.0}}, g, scale) +
            ball_hinge(p, {b, e}, -1.0, {{b, 1.0}}, g, scale);
      }
      return h + regs(p, {a, b, e}, scale);
    }
    case Variant::kGci2: {
      const BallGap d{s[0], s[2], +1, s[1]};
      const double h = pos ? ball_hinge(p, d, 1.0, {{s[0], 1.0}, {s[2], -1.0}}, -g, scale)
                           : ball_hinge(p, d, -1.0, {{s[0], 1.0}, {s[2], 1.0}}, g, scale);
      return h + regs(p, {s[0], s[2]}, scale);
    }
    case Variant::kGci3: {
      const BallGap d{s[1], s[2], -1, s[0]};
      const double h = pos ? ball_hinge(p, d, 1.0, {{s[1], -1.0}, {s[2], -1.0}}, -g, scale)
                           : ball_hinge(p, d, -1.0, {{s[1], 1.0}, {s[2], 1.0}}, g, scale);
      return h + regs(p, {s[1], s[2]}, scale);
    }
    case Variant::kGci0Bot:
    case Variant::kGci3Bot: {
      const ConceptId a = req.axiom.variant == Variant::kGci0Bot ? s[0] : s[1];
      if (!pos) return radius_floor(p, a, scale);
      p.add_radius(a, scale);
      return p.radius(a) + regs(p, {a}, scale);
    }
    case Variant::kGci1Bot: {
      const BallGap d{s[0], s[1]};
      const double h = pos ? ball_hinge(p, d, -1.0, {{s[0], 1.0}, {s[1], 1.0}}, g, scale)
                           : ball_hinge(p, d, 1.0, {{s[0], -1.0}, {s[1], -1.0}}, -g, scale);
      return h + regs(p, {s[0], s[1]}, scale);
    }
    default: break;
  }
  throw std::invalid_argument("role inclusions carry no loss");
}

// ---------------------------------------------------------------------------
// Boxes

// One box with an optional translation: center c + ts·t, offsets o.
struct BoxSrc {
  const double* c = nullptr;
  const double* o = nullptr;
  double* gc = nullptr;
  double* go = nullptr;
  const double* t = nullptr;
  double* gt = nullptr;
  double ts = 0.0;

  double center(std::size_t i) const { return c[i] + (t ? ts * t[i] : 0.0); }
  void back(std::size_t i, double dc, double dof) const {
    if (gc) gc[i] += dc;
    if (go) go[i] += dof;
    if (gt) gt[i] += ts * dc;
  }
};

// A box, or the intersection of two boxes. With `clamp`, negative
// intersection offsets read as zero so that empty intersections have no
// extent.
struct BoxExpr {
  BoxSrc a;
  BoxSrc b;
  bool inter = false;
  bool clamp = false;

  void eval(std::size_t i, double& c, double& o) const {
    if (!inter) {
      c = a.center(i);
      o = a.o[i];
      return;
    }
    const double ca = a.center(i), cb = b.center(i);
    const double lo = std::max(ca - a.o[i], cb - b.o[i]);
    const double hi = std::min(ca + a.o[i], cb + b.o[i]);
    c = 0.5 * (lo + hi);
    o = 0.5 * (hi - lo);
    if (clamp && o < 0.0) o = 0.0;
  }

  void back(std::size_t i, double dc, double dof) const {
    if (!inter) {
      a.back(i, dc, dof);
      return;
    }
    const double ca = a.center(i), cb = b.center(i);
    const double la = ca - a.o[i], lb = cb - b.o[i];
    const double ua = ca + a.o[i], ub = cb + b.o[i];
    if (clamp && std::min(ua, ub) < std::max(la, lb)) dof = 0.0;
    const double dlo = 0.5 * dc - 0.5 * dof;
    const double dhi = 0.5 * dc + 0.5 * dof;
    if (la >= lb) {
      a.back(i, dlo, -dlo);
    } else {
      b.back(i, dlo, -dlo);
    }
    if (ua <= ub) {
      a.back(i, dhi, dhi);
    } else {
      b.back(i, dhi, dhi);
    }
  }
};

// ‖max(0, s_abs·|c_x - c_y| + s_x·o_x + s_y·o_y + m)‖
struct NormForm {
  double s_abs, s_x, s_y, m;
};

double form_value(std::size_t n, const BoxExpr& x, const BoxExpr& y, const NormForm& f) {
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double cx, ox, cy, oy;
    x.eval(i, cx, ox);
    y.eval(i, cy, oy);
    const double z = relu(f.s_abs * std::abs(cx - cy) + f.s_x * ox + f.s_y * oy + f.m);
    sq += z * z;
  }
  return std::sqrt(sq);
}

void form_backward(std::size_t n, const BoxExpr& x, const BoxExpr& y, const NormForm& f,
                   double value, double up) {
  if (value <= 0.0 || up == 0.0) return;
  for (std::size_t i = 0; i < n; ++i) {
    double cx, ox, cy, oy;
    x.eval(i, cx, ox);
    y.eval(i, cy, oy);
    const double z = f.s_abs * std::abs(cx - cy) + f.s_x * ox + f.s_y * oy + f.m;
    if (z <= 0.0) continue;
    const double gz = up * z / value;
    const double dcx = gz * f.s_abs * sgn(cx - cy);
    x.back(i, dcx, gz * f.s_x);
    y.back(i, -dcx, gz * f.s_y);
  }
}

double form(const Rows& p, const BoxExpr& x, const BoxExpr& y, const NormForm& f, double scale) {
  const double v = form_value(p.n(), x, y, f);
  if (p.grad()) form_backward(p.n(), x, y, f, v, scale);
  return v;
}

// (δ - form)²
double squared_gap(const Rows& p, const BoxExpr& x, const BoxExpr& y, const NormForm& f,
                   double scale) {
  const double v = form_value(p.n(), x, y, f);
  const double d = p.hp().delta - v;
  if (p.grad()) form_backward(p.n(), x, y, f, v, -2.0 * d * scale);
  return d * d;
}

double offset_norm(const Rows& p, const BoxExpr& x, double scale) {
  double sq = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    double c, o;
    x.eval(i, c, o);
    sq += o * o;
  }
  const double v = std::sqrt(sq);
  if (p.grad() && v > 0.0) {
    for (std::size_t i = 0; i < p.n(); ++i) {
      double c, o;
      x.eval(i, c, o);
      x.back(i, 0.0, scale * o / v);
    }
  }
  return v;
}

// max(0, ε - ‖o‖)
double offset_floor(const Rows& p, const BoxExpr& x, double scale) {
  const double v = offset_norm(p, x, 0.0);
  const double z = p.hp().epsilon - v;
  if (z <= 0.0) return 0.0;
  if (p.grad()) offset_norm(p, x, -scale);
  return z;
}

BoxExpr concept_box(const Rows& p, ConceptId c) {
  BoxExpr e;
  e.a = {p.center(c), p.offset(c), p.g_center(c), p.g_offset(c)};
  return e;
}

BoxExpr moved(BoxExpr e, const double* t, double* gt, double sign) {
  e.a.t = t;
  e.a.gt = gt;
  e.a.ts = sign;
  return e;
}

BoxExpr intersection(const Rows& p, ConceptId a, ConceptId b) {
  BoxExpr e;
  e.a = concept_box(p, a).a;
  e.b = concept_box(p, b).a;
  e.inter = true;
  e.clamp = true;
  return e;
}

BoxExpr head_box(const Rows& p, RoleId r) {
  BoxExpr e;
  e.a = {p.head_c(r), p.head_o(r), p.g_head_c(r), p.g_head_o(r)};
  return e;
}

BoxExpr tail_box(const Rows& p, RoleId r) {
  BoxExpr e;
  e.a = {p.tail_c(r), p.tail_o(r), p.g_tail_c(r), p.g_tail_o(r)};
  return e;
}


double elbe_impl(const Rows& p, const LossRequest& req, double scale) {
  const auto& s = req.axiom.slots;
  const double m = p.hp().gamma;
  const bool pos = req.polarity == Polarity::kPositive;
  const NormForm contain{1.0, 1.0, -1.0, m};
  const NormForm overlap{-1.0, 1.0, 1.0, m};
  const NormForm apart{1.0, -1.0, -1.0, m};
  switch (req.axiom.variant) {
    case Variant::kGci0:
      return form(p, concept_box(p, s[0]), concept_box(p, s[1]), pos ? contain : overlap, scale);
    case Variant::kGci1:
      return form(p, intersection(p, s[0], s[1]), concept_box(p, s[2]), pos ? contain : overlap, scale);
    case Variant::kGci2: {
      const auto a = moved(concept_box(p, s[0]), p.role(s[1]), p.g_role(s[1]), 1.0);
      return form(p, a, concept_box(p, s[2]), pos ? contain : overlap, scale);
    }
    case Variant::kGci3: {
      const auto a = moved(concept_box(p, s[1]), p.role(s[0]), p.g_role(s[0]), -1.0);
      return form(p, a, concept_box(p, s[2]), pos ? apart : overlap, scale);
    }
    case Variant::kGci0Bot:
    case Variant::kGci3Bot: {
      const auto a = concept_box(p, req.axiom.variant == Variant::kGci0Bot ? s[0] : s[1]);
      return pos ? offset_norm(p, a, scale) : offset_floor(p, a, scale);
    }
    case Variant::kGci1Bot:
      if (pos) return form(p, concept_box(p, s[0]), concept_box(p, s[1]), overlap, scale);
      return offset_floor(p, intersection(p, s[0], s[1]), scale);
    default: break;
  }
  throw std::invalid_argument("role inclusions carry no loss");
}

double box2el_impl(const Rows& p, const LossRequest& req, double scale) {
  const auto& s = req.axiom.slots;
  const double g = p.hp().gamma;
  const bool pos = req.polarity == Polarity::kPositive;
  const NormForm mu_margin{1.0, 1.0, -1.0, -g};
  const NormForm mu{1.0, 1.0, -1.0, 0.0};
  const NormForm neg_dist{-1.0, 1.0, 1.0, -g};  // ‖max(0, -(d + γ))‖
  switch (req.axiom.variant) {
    case Variant::kGci0:
      return form(p, concept_box(p, s[0]), concept_box(p, s[1]), pos ? mu_margin : neg_dist, scale);
    case Variant::kGci1:
      return form(p, intersection(p, s[0], s[1]), concept_box(p, s[2]), pos ? mu_margin : neg_dist,
                  scale);
    case Variant::kGci2: {
      const ConceptId a = s[0], b = s[2];
      const RoleId r = s[1];
      const auto a_bumped = moved(concept_box(p, a), p.bump(b), p.g_bump(b), 1.0);
      const auto b_bumped = moved(concept_box(p, b), p.bump(a), p.g_bump(a), 1.0);
      if (pos) {
        return form(p, a_bumped, head_box(p, r), mu_margin, scale) +
               form(p, b_bumped, tail_box(p, r), mu_margin, scale);
      }
      return squared_gap(p, a_bumped, head_box(p, r), mu, scale) +
             squared_gap(p, b_bumped, tail_box(p, r), mu, scale);
    }
    case Variant::kGci3: {
      const ConceptId a = s[1], b = s[2];
      const auto h = moved(head_box(p, s[0]), p.bump(a), p.g_bump(a), -1.0);
      if (pos) return form(p, h, concept_box(p, b), mu_margin, scale);
      return squared_gap(p, h, concept_box(p, b), mu, scale);
    }
    case Variant::kGci0Bot:
    case Variant::kGci3Bot: {
      const auto a = concept_box(p, req.axiom.variant == Variant::kGci0Bot ? s[0] : s[1]);
      return pos ? offset_norm(p, a, scale) : offset_floor(p, a, scale);
    }
    case Variant::kGci1Bot:
      if (pos) return form(p, concept_box(p, s[0]), concept_box(p, s[1]), neg_dist, scale);
      return offset_floor(p, intersection(p, s[0], s[1]), scale);
    default: break;
  }
  throw std::invalid_argument("role inclusions carry no loss");
}

void check_request(const GeometricModel& m, const LossRequest& req) {
  const auto v = req.axiom.variant;
  if (!is_gci(v)) throw std::invalid_argument("role inclusions carry no loss");
  for (std::size_t i = 0; i < variant_arity(v); ++i) {
    const bool is_role = slot_kind(v, i) == SlotKind::kRole;
    const std::size_t bound = is_role ? m.role_count() : m.concept_count();
    if (req.axiom.slots[i] >= bound) {
      throw std::out_of_range(std::string("unknown ") + (is_role ? "role" : "concept") + " id " +
                              std::to_string(req.axiom.slots[i]));
    }
  }
}

void check_kind(const GeometricModel& m, ModelKind expected) {
  if (m.kind() != expected) {
    throw std::invalid_argument("model is " + std::string(model_tag(m.kind())) + ", expected " +
                                std::string(model_tag(expected)));
  }
}

}  // namespace

double elem_loss(const GeometricModel& m, const LossRequest& req, ParameterSet* grad, double scale) {
  check_kind(m, ModelKind::kElem);
  check_request(m, req);
  return elem_impl(Rows(m, grad), req, scale);
}

double elbe_loss(const GeometricModel& m, const LossRequest& req, ParameterSet* grad, double scale) {
  check_kind(m, ModelKind::kElbe);
  check_request(m, req);
  return elbe_impl(Rows(m, grad), req, scale);
}

double box2el_loss(const GeometricModel& m, const LossRequest& req, ParameterSet* grad,
                   double scale) {
  check_kind(m, ModelKind::kBox2El);
  check_request(m, req);
  return box2el_impl(Rows(m, grad), req, scale);
}

double axiom_loss(const GeometricModel& m, const LossRequest& req, ParameterSet* grad, double scale) {
  switch (m.kind()) {
    case ModelKind::kElem: return elem_loss(m, req, grad, scale);
    case ModelKind::kElbe: return elbe_loss(m, req, grad, scale);
    case ModelKind::kBox2El: return box2el_loss(m, req, grad, scale);
  }
  return 0.0;
}

double bump_regularizer(const GeometricModel& m, ParameterSet* grad, double scale) {
  if (m.kind() != ModelKind::kBox2El || m.concept_count() == 0) return 0.0;
  const std::size_t n = m.dim();
  const double w = m.hyper().lambda / static_cast<double>(m.concept_count());
  const auto& bump = m.params().bump;
  double total = 0.0;
  for (std::size_t c = 0; c < m.concept_count(); ++c) {
    const double* b = bump.data() + c * n;
    const double norm = l2_norm({b, n});
    total += norm;
    if (grad && norm > 0.0) {
      double* g = grad->bump.data() + c * n;
      for (std::size_t i = 0; i < n; ++i) g[i] += scale * w * b[i] / norm;
    }
  }
  return w * total;
}

double total_loss(const GeometricModel& m, std::span<const LossRequest> batch, ParameterSet* grad,
                  LossBreakdown* breakdown) {
  LossBreakdown local;
  LossBreakdown& bd = breakdown ? *breakdown : local;
  bd = LossBreakdown{};
  for (const auto& req : batch) {
    check_request(m, req);
    ++bd.group_size[variant_index(req.axiom.variant)][static_cast<int>(req.polarity)];
  }
  for (const auto& req : batch) {
    const auto vi = variant_index(req.axiom.variant);
    const int pi = static_cast<int>(req.polarity);
    const double w = 1.0 / static_cast<double>(bd.group_size[vi][pi]);
    bd.group_mean[vi][pi] += w * axiom_loss(m, req, grad, w);
  }
  bd.regularizer = bump_regularizer(m, grad, 1.0);
  bd.total = bd.regularizer;
  for (const auto& g : bd.group_mean) bd.total += g[0] + g[1];
  return bd.total;
}

}  // namespace elkbc
