#include "setrisk/polyhedron.hpp"

#include <algorithm>

#include "setrisk/error.hpp"
#include "setrisk/linalg.hpp"

namespace setrisk {

namespace {

template <typename Scalar>
VectorX<Scalar> concat(const VectorX<Scalar>& a, const Scalar& b) {
  VectorX<Scalar> y(a.size() + 1);
  y.head(a.size()) = a;
  y[a.size()] = b;
  return y;
}

template <typename Scalar>
bool vec_less(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  return lex_compare(a, b) < 0;
}

template <typename Scalar>
void sort_unique(std::vector<VectorX<Scalar>>& v) {
  std::sort(v.begin(), v.end(), vec_less<Scalar>);
  v.erase(std::unique(v.begin(), v.end(), [](const auto& a, const auto& b) { return lex_compare(a, b) == 0; }),
          v.end());
}

}  // namespace

template <typename Scalar>
BasicPolyhedron<Scalar> BasicPolyhedron<Scalar>::from_halfspaces(Eigen::Index dim, std::vector<Constraint> inequalities,
                                                                 std::vector<Constraint> equalities) {
  for (const auto& h : inequalities)
    if (h.a.size() != dim) throw DimensionMismatch("inequality has size " + std::to_string(h.a.size()));
  for (const auto& h : equalities)
    if (h.a.size() != dim) throw DimensionMismatch("equality has size " + std::to_string(h.a.size()));
  auto s = std::make_shared<State>();
  s->dim = dim;
  s->input_h = true;
  s->raw_ineq = std::move(inequalities);
  s->raw_eq = std::move(equalities);
  return BasicPolyhedron(std::move(s));
}

template <typename Scalar>
BasicPolyhedron<Scalar> BasicPolyhedron<Scalar>::from_generators(Eigen::Index dim, std::vector<Vec> vertices,
                                                                 std::vector<Vec> rays, std::vector<Vec> lines) {
  for (const auto* group : {&vertices, &rays, &lines})
    for (const auto& v : *group)
      if (v.size() != dim) throw DimensionMismatch("generator has size " + std::to_string(v.size()));
  auto s = std::make_shared<State>();
  s->dim = dim;
  s->input_h = false;
  s->raw_vertices = std::move(vertices);
  s->raw_rays = std::move(rays);
  s->raw_lines = std::move(lines);
  return BasicPolyhedron(std::move(s));
}

template <typename Scalar>
BasicPolyhedron<Scalar> BasicPolyhedron<Scalar>::empty(Eigen::Index dim) {
  return from_generators(dim, {});
}

template <typename Scalar>
BasicPolyhedron<Scalar> BasicPolyhedron<Scalar>::universe(Eigen::Index dim) {
  return from_halfspaces(dim, {});
}

template <typename Scalar>
BasicPolyhedron<Scalar> BasicPolyhedron<Scalar>::point(const Vec& x) {
  return from_generators(x.size(), {x});
}

template <typename Scalar>
BasicPolyhedron<Scalar> BasicPolyhedron<Scalar>::orthant(Eigen::Index dim) {
  std::vector<Vec> rays;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1;
    rays.push_back(std::move(e));
  }
  return from_generators(dim, {Vec::Zero(dim)}, std::move(rays));
}

template <typename Scalar>
void BasicPolyhedron<Scalar>::canonicalize(const State& s) {
  const Eigen::Index n = s.dim;
  Generators<Scalar> gen;
  if (s.input_h) {
    gen = h_to_v<Scalar>(n, s.raw_ineq, s.raw_eq);
  } else {
    gen.vertices = s.raw_vertices;
    gen.rays = s.raw_rays;
    gen.lines = s.raw_lines;
  }

  if (gen.vertices.empty()) {
    s.empty = true;
    s.ineq = {Constraint{Vec::Zero(n), Scalar(1)}};
    return;
  }

  std::vector<Constraint> ineq, eq;
  v_to_h<Scalar>(n, gen, ineq, eq);
  if (!s.input_h) {
    // Re-derive the generators from the minimal constraints so redundant input
    // generators disappear.
    gen = h_to_v<Scalar>(n, ineq, eq);
  }

  // Equalities: RREF of [a|b] with pivots among the first n columns.
  std::vector<Vec> eq_rows;
  for (const auto& h : eq) eq_rows.push_back(concat(h.a, h.b));
  std::vector<Eigen::Index> eq_piv = rref(eq_rows, n);
  for (auto& r : eq_rows) ScalarTraits<Scalar>::make_primitive(r);
  for (const auto& r : eq_rows) s.eq.push_back({r.head(n), r[n]});

  std::vector<Vec> ineq_rows;
  for (const auto& h : ineq) {
    Vec r = concat(h.a, h.b);
    reduce_by_pivots(r, eq_rows, eq_piv);
    if (is_zero<Scalar>(Vec(r.head(n)))) continue;
    ScalarTraits<Scalar>::make_primitive(r);
    ineq_rows.push_back(std::move(r));
  }
  sort_unique(ineq_rows);
  for (const auto& r : ineq_rows) s.ineq.push_back({r.head(n), r[n]});

  std::vector<Vec> lines = gen.lines;
  std::vector<Eigen::Index> line_piv = rref(lines);
  for (auto& l : lines) ScalarTraits<Scalar>::make_primitive(l);
  for (auto& r : gen.rays) {
    reduce_by_pivots(r, lines, line_piv);
    ScalarTraits<Scalar>::make_primitive(r);
  }
  for (auto& v : gen.vertices) reduce_by_pivots(v, lines, line_piv);
  sort_unique(gen.rays);
  sort_unique(gen.vertices);
  s.lines = std::move(lines);
  s.rays = std::move(gen.rays);
  s.vertices = std::move(gen.vertices);
}

template <typename Scalar>
void BasicPolyhedron<Scalar>::ensure() const {
  const State& s = *state_;
  std::call_once(s.once, [&s] {
    canonicalize(s);
    s.done.store(true, std::memory_order_release);
  });
}

template <typename Scalar>
bool BasicPolyhedron<Scalar>::is_empty() const {
  ensure();
  return state_->empty;
}

template <typename Scalar>
bool BasicPolyhedron<Scalar>::has_hrep() const {
  return state_->input_h || state_->done.load(std::memory_order_acquire);
}

template <typename Scalar>
bool BasicPolyhedron<Scalar>::has_vrep() const {
  return !state_->input_h || state_->done.load(std::memory_order_acquire);
}

template <typename Scalar>
auto BasicPolyhedron<Scalar>::inequalities() const -> const std::vector<Constraint>& {
  ensure();
  return state_->ineq;
}

template <typename Scalar>
auto BasicPolyhedron<Scalar>::equalities() const -> const std::vector<Constraint>& {
  ensure();
  return state_->eq;
}

template <typename Scalar>
auto BasicPolyhedron<Scalar>::vertices() const -> const std::vector<Vec>& {
  ensure();
  return state_->vertices;
}

template <typename Scalar>
auto BasicPolyhedron<Scalar>::rays() const -> const std::vector<Vec>& {
  ensure();
  return state_->rays;
}

template <typename Scalar>
auto BasicPolyhedron<Scalar>::lines() const -> const std::vector<Vec>& {
  ensure();
  return state_->lines;
}

template <typename Scalar>
const BasicPolyhedron<Scalar>& BasicPolyhedron<Scalar>::convert() const {
  ensure();
  return *this;
}

template <typename Scalar>
bool BasicPolyhedron<Scalar>::is_cone() const {
  ensure();
  return !state_->empty && state_->vertices.size() == 1 && is_zero(state_->vertices.front());
}

template <typename Scalar>
bool BasicPolyhedron<Scalar>::is_bounded() const {
  ensure();
  return state_->rays.empty() && state_->lines.empty();
}

template class BasicPolyhedron<Rational>;

template <typename Scalar>
bool contains_point(const BasicPolyhedron<Scalar>& p, const VectorX<Scalar>& x) {
  if (x.size() != p.dim()) throw DimensionMismatch("point size");
  if (p.is_empty()) return false;
  for (const auto& h : p.equalities())
    if (h.a.dot(x) != h.b) return false;
  for (const auto& h : p.inequalities())
    if (h.a.dot(x) < h.b) return false;
  return true;
}

template <typename Scalar>
std::optional<SeparationCertificate<Scalar>> find_separation(const BasicPolyhedron<Scalar>& container,
                                                             const BasicPolyhedron<Scalar>& subset) {
  using Cert = SeparationCertificate<Scalar>;
  using Gen = typename Cert::Generator;
  if (container.dim() != subset.dim()) throw DimensionMismatch("containment operands");
  if (subset.is_empty()) return std::nullopt;
  if (container.is_empty()) {
    return Cert{container.inequalities().front(), false, Gen::Vertex, subset.vertices().front()};
  }
  auto check = [&](const HalfSpace<Scalar>& h, bool is_eq) -> std::optional<Cert> {
    for (const auto& v : subset.vertices()) {
      Scalar val = h.a.dot(v);
      if (val < h.b) return Cert{h, is_eq, Gen::Vertex, v};
      if (is_eq && val > h.b) return Cert{{-h.a, Scalar(-h.b)}, true, Gen::Vertex, v};
    }
    for (const auto& r : subset.rays()) {
      Scalar val = h.a.dot(r);
      if (val < 0) return Cert{h, is_eq, Gen::Ray, r};
      if (is_eq && val > 0) return Cert{{-h.a, Scalar(-h.b)}, true, Gen::Ray, r};
    }
    for (const auto& l : subset.lines()) {
      Scalar val = h.a.dot(l);
      if (val != 0) return Cert{h, is_eq, Gen::Line, l};
    }
    return std::nullopt;
  };
  for (const auto& h : container.equalities())
    if (auto c = check(h, true)) return c;
  for (const auto& h : container.inequalities())
    if (auto c = check(h, false)) return c;
  return std::nullopt;
}

template <typename Scalar>
bool contains_set(const BasicPolyhedron<Scalar>& container, const BasicPolyhedron<Scalar>& subset) {
  return !find_separation(container, subset).has_value();
}

template <typename Scalar>
bool set_equal(const BasicPolyhedron<Scalar>& a, const BasicPolyhedron<Scalar>& b) {
  return contains_set(a, b) && contains_set(b, a);
}

template <typename Scalar>
BasicPolyhedron<Scalar> minkowski_sum(const BasicPolyhedron<Scalar>& a, const BasicPolyhedron<Scalar>& b) {
  using P = BasicPolyhedron<Scalar>;
  if (a.dim() != b.dim()) throw DimensionMismatch("minkowski_sum operands");
  if (a.is_empty() || b.is_empty()) return P::empty(a.dim());
  std::vector<VectorX<Scalar>> vertices;
  for (const auto& u : a.vertices())
    for (const auto& v : b.vertices()) vertices.push_back(u + v);
  std::vector<VectorX<Scalar>> rays = a.rays();
  rays.insert(rays.end(), b.rays().begin(), b.rays().end());
  std::vector<VectorX<Scalar>> lines = a.lines();
  lines.insert(lines.end(), b.lines().begin(), b.lines().end());
  return P::from_generators(a.dim(), std::move(vertices), std::move(rays), std::move(lines));
}

template <typename Scalar>
BasicPolyhedron<Scalar> intersect(const BasicPolyhedron<Scalar>& a, const BasicPolyhedron<Scalar>& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("intersect operands");
  auto ineq = a.inequalities();
  ineq.insert(ineq.end(), b.inequalities().begin(), b.inequalities().end());
  auto eq = a.equalities();
  eq.insert(eq.end(), b.equalities().begin(), b.equalities().end());
  return BasicPolyhedron<Scalar>::from_halfspaces(a.dim(), std::move(ineq), std::move(eq));
}

template <typename Scalar>
BasicPolyhedron<Scalar> linear_image(const BasicPolyhedron<Scalar>& p, const MatrixX<Scalar>& m,
                                     const VectorX<Scalar>& shift) {
  using P = BasicPolyhedron<Scalar>;
  if (m.cols() != p.dim() || shift.size() != m.rows()) throw DimensionMismatch("linear_image map");
  if (p.is_empty()) return P::empty(m.rows());
  std::vector<VectorX<Scalar>> vertices, rays, lines;
  for (const auto& v : p.vertices()) vertices.push_back(m * v + shift);
  for (const auto& r : p.rays()) {
    VectorX<Scalar> y = m * r;
    if (!is_zero(y)) rays.push_back(std::move(y));
  }
  for (const auto& l : p.lines()) {
    VectorX<Scalar> y = m * l;
    if (!is_zero(y)) lines.push_back(std::move(y));
  }
  return P::from_generators(m.rows(), std::move(vertices), std::move(rays), std::move(lines));
}

template <typename Scalar>
BasicPolyhedron<Scalar> project(const BasicPolyhedron<Scalar>& p, const std::vector<Eigen::Index>& coords) {
  if (coords.empty()) throw InvalidInput("projection onto an empty coordinate set");
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(static_cast<Eigen::Index>(coords.size()), p.dim());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= p.dim()) throw InvalidInput("projection coordinate out of range");
    m(static_cast<Eigen::Index>(i), coords[i]) = 1;
  }
  return linear_image(p, m, VectorX<Scalar>(VectorX<Scalar>::Zero(m.rows())));
}

template <typename Scalar>
BasicPolyhedron<Scalar> product(const BasicPolyhedron<Scalar>& a, const BasicPolyhedron<Scalar>& b) {
  using P = BasicPolyhedron<Scalar>;
  const Eigen::Index n = a.dim(), k = b.dim();
  if (a.is_empty() || b.is_empty()) return P::empty(n + k);
  std::vector<HalfSpace<Scalar>> ineq, eq;
  auto lift = [&](const HalfSpace<Scalar>& h, Eigen::Index offset) {
    VectorX<Scalar> y = VectorX<Scalar>::Zero(n + k);
    y.segment(offset, h.a.size()) = h.a;
    return HalfSpace<Scalar>{y, h.b};
  };
  for (const auto& h : a.inequalities()) ineq.push_back(lift(h, 0));
  for (const auto& h : b.inequalities()) ineq.push_back(lift(h, n));
  for (const auto& h : a.equalities()) eq.push_back(lift(h, 0));
  for (const auto& h : b.equalities()) eq.push_back(lift(h, n));
  return P::from_halfspaces(n + k, std::move(ineq), std::move(eq));
}

template <typename Scalar>
BasicPolyhedron<Scalar> affine_preimage(const BasicPolyhedron<Scalar>& p, const MatrixX<Scalar>& m,
                                        const VectorX<Scalar>& shift) {
  using P = BasicPolyhedron<Scalar>;
  if (m.rows() != p.dim() || shift.size() != m.rows()) throw DimensionMismatch("affine_preimage map");
  if (p.is_empty()) return P::empty(m.cols());
  auto pull = [&](const HalfSpace<Scalar>& h) {
    return HalfSpace<Scalar>{VectorX<Scalar>(m.transpose() * h.a), Scalar(h.b - h.a.dot(shift))};
  };
  std::vector<HalfSpace<Scalar>> ineq, eq;
  for (const auto& h : p.inequalities()) ineq.push_back(pull(h));
  for (const auto& h : p.equalities()) eq.push_back(pull(h));
  return P::from_halfspaces(m.cols(), std::move(ineq), std::move(eq));
}

template <typename Scalar>
BasicPolyhedron<Scalar> translate(const BasicPolyhedron<Scalar>& p, const VectorX<Scalar>& shift) {
  using P = BasicPolyhedron<Scalar>;
  if (shift.size() != p.dim()) throw DimensionMismatch("translate");
  if (p.is_empty()) return p;
  std::vector<VectorX<Scalar>> vertices;
  for (const auto& v : p.vertices()) vertices.push_back(v + shift);
  return P::from_generators(p.dim(), std::move(vertices), p.rays(), p.lines());
}

template <typename Scalar>
BasicPolyhedron<Scalar> scale(const BasicPolyhedron<Scalar>& p, const Scalar& k) {
  using P = BasicPolyhedron<Scalar>;
  if (k <= 0) throw InvalidInput("scale factor must be positive");
  if (p.is_empty()) return p;
  std::vector<VectorX<Scalar>> vertices;
  for (const auto& v : p.vertices()) vertices.push_back(v * k);
  return P::from_generators(p.dim(), std::move(vertices), p.rays(), p.lines());
}

template <typename Scalar>
ExtendedRational support_value(const BasicPolyhedron<Scalar>& p, const VectorX<Scalar>& direction) {
  if (direction.size() != p.dim()) throw DimensionMismatch("support direction");
  if (p.is_empty()) throw PreconditionViolation("support value of an empty polyhedron");
  // Both representations are canonical, so the infimum is read off the
  // generators; an LP over a large H-rep is far slower.
  for (const auto& l : p.lines())
    if (direction.dot(l) != 0) return ExtendedRational::neg_inf();
  for (const auto& r : p.rays())
    if (direction.dot(r) < 0) return ExtendedRational::neg_inf();
  const auto& vs = p.vertices();
  Scalar best = direction.dot(vs.front());
  for (std::size_t k = 1; k < vs.size(); ++k) best = std::min(best, Scalar(direction.dot(vs[k])));
  return ExtendedRational(Rational(best));
}

template <typename Scalar>
BasicPolyhedron<Scalar> recession_cone(const BasicPolyhedron<Scalar>& p) {
  if (p.is_empty()) throw PreconditionViolation("recession cone of an empty polyhedron");
  std::vector<HalfSpace<Scalar>> ineq, eq;
  for (const auto& h : p.inequalities()) ineq.push_back({h.a, Scalar(0)});
  for (const auto& h : p.equalities()) eq.push_back({h.a, Scalar(0)});
  return BasicPolyhedron<Scalar>::from_halfspaces(p.dim(), std::move(ineq), std::move(eq));
}

template <typename Scalar>
BasicPolyhedron<Scalar> positive_dual_cone(const BasicPolyhedron<Scalar>& c) {
  if (!c.is_cone()) throw PreconditionViolation("positive dual cone of a set that is not a cone at 0");
  std::vector<HalfSpace<Scalar>> ineq, eq;
  for (const auto& r : c.rays()) ineq.push_back({r, Scalar(0)});
  for (const auto& l : c.lines()) eq.push_back({l, Scalar(0)});
  return BasicPolyhedron<Scalar>::from_halfspaces(c.dim(), std::move(ineq), std::move(eq));
}

template bool contains_point(const Polyhedron&, const Vector&);
template std::optional<SeparationCertificate<Rational>> find_separation(const Polyhedron&, const Polyhedron&);
template bool contains_set(const Polyhedron&, const Polyhedron&);
template bool set_equal(const Polyhedron&, const Polyhedron&);
template Polyhedron minkowski_sum(const Polyhedron&, const Polyhedron&);
template Polyhedron intersect(const Polyhedron&, const Polyhedron&);
template Polyhedron project(const Polyhedron&, const std::vector<Eigen::Index>&);
template Polyhedron product(const Polyhedron&, const Polyhedron&);
template Polyhedron linear_image(const Polyhedron&, const Matrix&, const Vector&);
template Polyhedron affine_preimage(const Polyhedron&, const Matrix&, const Vector&);
template Polyhedron translate(const Polyhedron&, const Vector&);
template Polyhedron scale(const Polyhedron&, const Rational&);
template ExtendedRational support_value(const Polyhedron&, const Vector&);
template Polyhedron recession_cone(const Polyhedron&);
template Polyhedron positive_dual_cone(const Polyhedron&);

}  // namespace setrisk
