#ifndef SETRISK_POLYHEDRON_HPP
#define SETRISK_POLYHEDRON_HPP

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "setrisk/double_description.hpp"
#include "setrisk/lp.hpp"
#include "setrisk/rational.hpp"

namespace setrisk {

/// Closed convex polyhedron in R^n over an exact ordered field.
///
/// Either representation may be supplied; the other is derived on first use
/// and cached. Canonical forms are unique per set:
///  - equalities: RREF rows of [a|b], primitive integer, positive pivot;
///  - inequalities: reduced modulo the equality pivots, primitive, sorted;
///  - lines: RREF, primitive; rays and vertices reduced modulo the line
///    pivots, rays primitive, both sorted.
/// The empty set has the single inequality 0.x >= 1 and no generators.
///
/// Values are immutable. Copies share the cached state, and the lazy
/// canonicalization is guarded so concurrent readers see one result.
template <typename Scalar>
class BasicPolyhedron {
 public:
  using Vec = VectorX<Scalar>;
  using Constraint = HalfSpace<Scalar>;

  /// {x : a.x >= b for inequalities, a.x == b for equalities}.
  static BasicPolyhedron from_halfspaces(Eigen::Index dim, std::vector<Constraint> inequalities,
                                         std::vector<Constraint> equalities = {});
  /// conv(vertices) + cone(rays) + lin(lines); no vertices means empty.
  static BasicPolyhedron from_generators(Eigen::Index dim, std::vector<Vec> vertices, std::vector<Vec> rays = {},
                                         std::vector<Vec> lines = {});

  static BasicPolyhedron empty(Eigen::Index dim);
  static BasicPolyhedron universe(Eigen::Index dim);
  static BasicPolyhedron point(const Vec& x);
  static BasicPolyhedron orthant(Eigen::Index dim);

  BasicPolyhedron() : BasicPolyhedron(universe(0)) {}

  Eigen::Index dim() const { return state_->dim; }
  bool is_empty() const;

  /// True when the constraint (resp. generator) list was supplied or derived.
  bool has_hrep() const;
  bool has_vrep() const;

  /// Canonical representations; forces conversion.
  const std::vector<Constraint>& inequalities() const;
  const std::vector<Constraint>& equalities() const;
  const std::vector<Vec>& vertices() const;
  const std::vector<Vec>& rays() const;
  const std::vector<Vec>& lines() const;

  /// Materializes both representations. Idempotent.
  const BasicPolyhedron& convert() const;

  bool is_cone() const;
  bool is_bounded() const;

 private:
  struct State {
    Eigen::Index dim = 0;
    bool input_h = false;
    std::vector<Constraint> raw_ineq, raw_eq;
    std::vector<Vec> raw_vertices, raw_rays, raw_lines;

    mutable std::once_flag once;
    mutable std::vector<Constraint> ineq, eq;
    mutable std::vector<Vec> vertices, rays, lines;
    mutable bool empty = false;
    mutable std::atomic<bool> done{false};
  };

  explicit BasicPolyhedron(std::shared_ptr<const State> s) : state_(std::move(s)) {}
  void ensure() const;
  static void canonicalize(const State& s);

  std::shared_ptr<const State> state_;
};

using Polyhedron = BasicPolyhedron<Rational>;
extern template class BasicPolyhedron<Rational>;

/// Witness that `container` does not contain `subset`: a constraint of the
/// container violated by a generator of the subset, so the support value of
/// the subset in direction constraint.a lies strictly below constraint.b.
template <typename Scalar>
struct SeparationCertificate {
  HalfSpace<Scalar> constraint;
  bool from_equality = false;
  enum class Generator { Vertex, Ray, Line } generator = Generator::Vertex;
  VectorX<Scalar> witness;
};

template <typename Scalar>
bool contains_point(const BasicPolyhedron<Scalar>& p, const VectorX<Scalar>& x);
template <typename Scalar>
std::optional<SeparationCertificate<Scalar>> find_separation(const BasicPolyhedron<Scalar>& container,
                                                             const BasicPolyhedron<Scalar>& subset);
template <typename Scalar>
bool contains_set(const BasicPolyhedron<Scalar>& container, const BasicPolyhedron<Scalar>& subset);
template <typename Scalar>
bool set_equal(const BasicPolyhedron<Scalar>& a, const BasicPolyhedron<Scalar>& b);

template <typename Scalar>
BasicPolyhedron<Scalar> minkowski_sum(const BasicPolyhedron<Scalar>& a, const BasicPolyhedron<Scalar>& b);
template <typename Scalar>
BasicPolyhedron<Scalar> intersect(const BasicPolyhedron<Scalar>& a, const BasicPolyhedron<Scalar>& b);
/// Image under the coordinate map x -> (x[coords[0]], x[coords[1]], ...).
template <typename Scalar>
BasicPolyhedron<Scalar> project(const BasicPolyhedron<Scalar>& p, const std::vector<Eigen::Index>& coords);
/// P x Q in R^(n+k).
template <typename Scalar>
BasicPolyhedron<Scalar> product(const BasicPolyhedron<Scalar>& a, const BasicPolyhedron<Scalar>& b);
/// {M x + t : x in P}.
template <typename Scalar>
BasicPolyhedron<Scalar> linear_image(const BasicPolyhedron<Scalar>& p, const MatrixX<Scalar>& m,
                                     const VectorX<Scalar>& shift);
/// {x : M x + t in P}.
template <typename Scalar>
BasicPolyhedron<Scalar> affine_preimage(const BasicPolyhedron<Scalar>& p, const MatrixX<Scalar>& m,
                                        const VectorX<Scalar>& shift);
template <typename Scalar>
BasicPolyhedron<Scalar> translate(const BasicPolyhedron<Scalar>& p, const VectorX<Scalar>& shift);
/// k * P for k > 0.
template <typename Scalar>
BasicPolyhedron<Scalar> scale(const BasicPolyhedron<Scalar>& p, const Scalar& k);

/// inf { a.x : x in P }. Throws PreconditionViolation on empty P.
template <typename Scalar>
ExtendedRational support_value(const BasicPolyhedron<Scalar>& p, const VectorX<Scalar>& direction);

/// {r : x + t r in P for all t >= 0}. Throws PreconditionViolation on empty P.
template <typename Scalar>
BasicPolyhedron<Scalar> recession_cone(const BasicPolyhedron<Scalar>& p);
/// C^+ = {y : y.c >= 0 for all c in C}. Throws PreconditionViolation if C is
/// not a cone with apex 0.
template <typename Scalar>
BasicPolyhedron<Scalar> positive_dual_cone(const BasicPolyhedron<Scalar>& c);

extern template bool contains_point(const Polyhedron&, const Vector&);
extern template std::optional<SeparationCertificate<Rational>> find_separation(const Polyhedron&, const Polyhedron&);
extern template bool contains_set(const Polyhedron&, const Polyhedron&);
extern template bool set_equal(const Polyhedron&, const Polyhedron&);
extern template Polyhedron minkowski_sum(const Polyhedron&, const Polyhedron&);
extern template Polyhedron intersect(const Polyhedron&, const Polyhedron&);
extern template Polyhedron project(const Polyhedron&, const std::vector<Eigen::Index>&);
extern template Polyhedron product(const Polyhedron&, const Polyhedron&);
extern template Polyhedron linear_image(const Polyhedron&, const Matrix&, const Vector&);
extern template Polyhedron affine_preimage(const Polyhedron&, const Matrix&, const Vector&);
extern template Polyhedron translate(const Polyhedron&, const Vector&);
extern template Polyhedron scale(const Polyhedron&, const Rational&);
extern template ExtendedRational support_value(const Polyhedron&, const Vector&);
extern template Polyhedron recession_cone(const Polyhedron&);
extern template Polyhedron positive_dual_cone(const Polyhedron&);

}  // namespace setrisk

#endif  // SETRISK_POLYHEDRON_HPP
