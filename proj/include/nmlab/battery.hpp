#pragma once

#include "nmlab/normal_map.hpp"
#include "nmlab/rng.hpp"
#include "nmlab/smooth_fn.hpp"

#include <string>
#include <vector>

namespace nmlab
{

/// A matrix-form normal map together with the base point x0 in K (z0 = x0).
struct MatrixInstance
{
  std::string id;
  NormalMap map;
  Vec x0;
};

/// Random matrix with A + A^T >= 2 * floor * I (Gaussian entries times `scale`).
Mat random_positive_part(Rng& rng, Eigen::Index n, double floor = 0.5, double scale = 1.0);

/// Well-conditioned random matrix I + 0.3 G, redrawn until cond <= 10.
Mat random_well_conditioned(Rng& rng, Eigen::Index n);

/// Random point of K that is on the boundary with probability ~3/4
/// (vertices, edges and faces for boxes; apex or rays for cones).
Vec random_base_point(Rng& rng, const ConvexSet& k);

/// Random element of N_K(x) (possibly zero), built from the cone generators;
/// second-order cones are handled in closed form, including the apex.
Vec random_normal(Rng& rng, const ConvexSet& k, const Vec& x, double scale = 0.5);

/// Sets used by the matrix-form battery: R^2_+, R^3_+, SOC(3), unit cube in R^3.
std::vector<ConvexSet> matrix_battery_sets();

/// N = B (Ahat (z - Pi) + Pi) with Ahat + Ahat^T > 0 and B well conditioned.
std::vector<MatrixInstance> injective_matrix_battery(std::uint64_t seed, int count);

/// Constructed failures: folded orthants, zero blocks, folded cube vertex, folded SOC apex.
std::vector<MatrixInstance> constructed_failures();

/// Gaussian A with B = I at boundary points, kept only when A N_K(x0) meets int T_K(x0).
std::vector<MatrixInstance> ant_violating_battery(std::uint64_t seed, int count);

/// Ahat with Ahat + Ahat^T > 0 and B = I at boundary points (ANT holds).
std::vector<MatrixInstance> ant_satisfying_battery(std::uint64_t seed, int count);

/// phi = M x + c with M + M^T > 0 over R^2_+, R^3_+ and SOC(3) (or R^d_+ and
/// SOC(d) when `dim` > 0); y0 = phi(x0) + u0 with u0 in N_S(x0).
std::vector<GeneralizedEquation> monotone_battery(std::uint64_t seed, int count, int dim = 0);

/// phi = identity and phi = -identity over R_+ at (0, 0).
std::vector<GeneralizedEquation> hand_instances();

struct HomotopyInstance
{
  std::string id;
  Map map;
  Perturbation g;
  Vec x0;
};

/// Maps with a known index paired with strictly stationary perturbations
/// (radial cubic terms and centered quadratics).
std::vector<HomotopyInstance> homotopy_battery(std::uint64_t seed, int count);

/// Centered quadratic g_k(x) = (x - x0)^T Q_k (x - x0) as a SmoothFn.
SmoothFn centered_quadratic(const std::vector<Mat>& q, const Vec& x0);

}  // namespace nmlab
