#pragma once

#include "nmlab/cone.hpp"
#include "nmlab/convex_sets.hpp"
#include "nmlab/parallel.hpp"
#include "nmlab/rng.hpp"

#include <cstdint>
#include <vector>

namespace nmlab
{

struct Face
{
  std::uint32_t active = 0;  // bitmask of constraint rows tight on the whole face
  int dim = 0;
  Vec witness;               // point in the relative interior
  ConeRep normal_cone;       // cone generated by the active rows
};

struct FaceLattice
{
  ConvexSet set;             // the polytope (a Polyhedron)
  std::vector<Face> faces;   // sorted by decreasing dimension, then by mask
  int top = 0;               // index of the polytope itself

  const Polyhedron& poly() const { return *set.as<Polyhedron>(); }
  /// faces[i] is contained in faces[j].
  bool is_subface(std::size_t i, std::size_t j) const
  {
    return (faces[i].active & faces[j].active) == faces[j].active;
  }
  /// Number of faces of each dimension 0..dim.
  std::vector<int> f_vector() const;
  /// Index of the face whose relative interior contains x (x must lie in the polytope).
  std::size_t face_of_point(const Vec& x) const;
  /// Index of the exposed face argmax <u, .>, i.e. N^{-1}(u).
  std::size_t exposed_face(const Vec& u) const;
};

/// Enumerates all nonempty faces of a bounded polyhedron with n <= 4.
FaceLattice face_lattice(const ConvexSet& polytope, Exec exec = Exec::Serial);

/// Smallest face of N_K(ri N^{-1}(u)) containing u.
ConeRep touching_cone(const FaceLattice& lattice, const Vec& u);

struct NormalClass
{
  bool is_r_extreme = false;
  bool is_r_exposed = false;
  int touching_dim = 0;
  int exposed_normal_dim = 0;
};

NormalClass classify_normal(const FaceLattice& lattice, const Vec& u, int r);

struct DimlemWitness
{
  std::vector<Vec> x_seq;
  std::vector<Vec> u_seq;
  std::vector<int> dims;
  int base_dim = 0;          // dim N_K(x0)
  std::size_t face = 0;      // lattice index of the face walked into
};

DimlemWitness dimlem_audit(const FaceLattice& lattice, const Vec& x0, const Vec& u0);

struct AsplundResult
{
  Vec u_prime;
  double distance = 0.0;     // distance from u to the closed set of r-exposed normals
  std::size_t face = 0;      // face whose normal cone realizes it
};

AsplundResult asplund_audit(const FaceLattice& lattice, const Vec& u, int r, double eps);

/// Intersection of m halfspaces with unit normals uniform on the sphere and
/// offsets in [0.5, 2]; unbounded draws are rejected. m is drawn from
/// [m_lo, m_hi].
ConvexSet random_polytope(Rng& rng, Eigen::Index n, int m_lo = 6, int m_hi = 14);

/// True when the polyhedron is bounded.
bool is_bounded(const Polyhedron& poly);

}  // namespace nmlab
