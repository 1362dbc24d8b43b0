#pragma once

#include "nmlab/cone.hpp"
#include "nmlab/core.hpp"

#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace nmlab
{

struct Orthant
{
  Eigen::Index n = 0;
};

/// {x : a x <= b}. Rows are nonzero; at most 32 of them.
struct Polyhedron
{
  Mat a;
  Vec b;
  Vec feasible_point;  // cached at construction; used to warm-start projection

  static constexpr Eigen::Index kMaxRows = 32;
};

/// {(s, t) in R^{n-1} x R : |s|_2 <= t}
struct SecondOrderCone
{
  Eigen::Index n = 0;
};

/// {(s, t) in R^{n-1} x R : |s|_p <= t}, p in [1, inf].
struct POrderCone
{
  Eigen::Index n = 0;
  double p = 2.0;

  bool is_inf() const { return p == std::numeric_limits<double>::infinity(); }
};

/// Symmetric d x d PSD matrices in R^{d(d+1)/2}; off-diagonal entries scaled by sqrt(2).
struct PsdCone
{
  Eigen::Index d = 0;
};

/// offset + span(basis); the basis is stored orthonormalized (columns).
struct AffineSubspace
{
  Mat basis;
  Vec offset;
};

class ConvexSet;

struct Product
{
  std::vector<ConvexSet> factors;
};

class ConvexSet
{
public:
  using Variant =
    std::variant<Orthant, Polyhedron, SecondOrderCone, POrderCone, PsdCone, AffineSubspace, Product>;

  static ConvexSet orthant(Eigen::Index n);
  /// Validates rows and finds a feasible point (throws InfeasibleSet).
  static ConvexSet polyhedron(Mat a, Vec b);
  /// As above with a known feasible point; skips the feasibility LP.
  static ConvexSet polyhedron(Mat a, Vec b, Vec feasible_point);
  static ConvexSet box(const Vec& lo, const Vec& hi);
  static ConvexSet unit_cube(Eigen::Index n);
  static ConvexSet soc(Eigen::Index n);
  static ConvexSet porder(Eigen::Index n, double p);
  static ConvexSet psd(Eigen::Index d);
  static ConvexSet affine(const Mat& basis, Vec offset);
  static ConvexSet product(std::vector<ConvexSet> factors);

  const Variant& spec() const { return spec_; }
  Eigen::Index dim() const;

  template <class T>
  const T* as() const
  {
    return std::get_if<T>(&spec_);
  }

private:
  explicit ConvexSet(Variant v) : spec_(std::move(v)) {}
  Variant spec_;
};

/// Max-norm of constraint violations of x (0 when x is in the set).
double violation(const ConvexSet& set, const Vec& x);
bool contains(const ConvexSet& set, const Vec& x, double tol = kMembershipTol);

/// Metric projection.
Vec project(const ConvexSet& set, const Vec& z);

/// Independent reference projection for polyhedra: exhaustive enumeration of
/// active subsets of at most n linearly independent rows with KKT sign checks.
Vec project_polyhedron_enumerate(const Polyhedron& poly, const Vec& z);

ConeRep normal_cone(const ConvexSet& set, const Vec& x);
ConeRep tangent_cone(const ConvexSet& set, const Vec& x);
int normal_cone_dim(const ConvexSet& set, const Vec& x);

/// True for sets whose projection is piecewise affine and whose cones are
/// finitely generated (orthant, polyhedron, affine subspace, products of those).
bool is_polyhedral(const ConvexSet& set);

/// Exact directional derivative of the projection for polyhedral sets:
/// projection of d onto the critical cone T(x) intersected with (z - x)^perp.
std::optional<Vec> projection_derivative(const ConvexSet& set, const Vec& z, const Vec& d);

/// Scaled symmetric vectorization (lower triangle, column-major).
Vec svec(const Mat& m);
Mat smat(const Vec& v, Eigen::Index d);

/// p-norm with p in [1, inf].
double p_norm(const Vec& v, double p);
/// Hoelder conjugate exponent.
double conjugate_exponent(double p);

}  // namespace nmlab
