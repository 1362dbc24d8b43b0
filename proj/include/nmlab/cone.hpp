#pragma once

#include "nmlab/core.hpp"

#include <vector>

namespace nmlab
{

/// Finitely generated closed convex cone: cone(generators) + span(lineality).
struct ConeRep
{
  Eigen::Index ambient = 0;
  std::vector<Vec> generators;       // unit length, pairwise distinct
  std::vector<Vec> lineality_basis;  // orthonormal
  int dim = 0;                       // dimension of the linear span

  /// Normalizes and deduplicates generators, orthonormalizes the lineality
  /// space, drops generators lying inside it, and fills in `dim`.
  static ConeRep make(Eigen::Index ambient, std::vector<Vec> generators,
                      std::vector<Vec> lineality = {});

  Mat generator_matrix() const;
  Mat lineality_matrix() const;
  /// Columns spanning the linear hull of the cone.
  Mat span_matrix() const;
  bool is_trivial() const { return generators.empty() && lineality_basis.empty(); }
};

/// H-representation {d : rows * d <= 0, eq_rows * d = 0} converted to a ConeRep.
ConeRep halfspace_cone(Eigen::Index ambient, const Mat& rows, const Mat& eq_rows = Mat());

/// Polar cone {d : <d, u> <= 0 for all u in cone}.
ConeRep polar(const ConeRep& cone);

bool in_span(const ConeRep& cone, const Vec& u, double tol = 1e-9);
bool cone_contains(const ConeRep& cone, const Vec& u, double tol = 1e-9);
/// Euclidean projection of u onto the cone.
Vec cone_project(const ConeRep& cone, const Vec& u);
double cone_distance(const ConeRep& cone, const Vec& u);

/// u in ri(cone): some conic combination of every generator (plus a lineality
/// component) reproduces u/|u| with all coefficients >= kRelIntEps. The LP
/// maximizes the smallest coefficient. Throws NotInSpan when u leaves the
/// linear hull.
bool in_relative_interior(const ConeRep& cone, const Vec& u);

/// rb membership: in span, in cone, not in ri.
bool in_relative_boundary(const ConeRep& cone, const Vec& u);

/// Smallest face of the cone containing u (u must belong to the cone).
ConeRep smallest_face_containing(const ConeRep& cone, const Vec& u);

}  // namespace nmlab
