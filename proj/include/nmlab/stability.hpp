#pragma once

#include "nmlab/degree.hpp"
#include "nmlab/normal_map.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nmlab
{

enum class AubinVerdict
{
  BoundedEvidence,
  BlowupEvidence,
  EmptyValueDetected,
  Indeterminate,  // grew by more than x2 at the last radius, but not beyond x10 overall
};

enum class SrVerdict
{
  Verified,
  Refuted,
  Inconclusive,
};

std::string_view to_string(AubinVerdict v);
std::string_view to_string(SrVerdict v);

struct AubinOptions
{
  std::vector<double> radii{0.1, 0.05, 0.025};
  int targets = 200;          // consecutive targets form the sampled pairs (cyclically)
  double window_factor = 10;  // solutions are localized to ball(x0, window_factor * r)
  LocalSolveOptions solve;
  Exec exec = Exec::Parallel;
  std::uint64_t seed = 0;
};

struct AubinEstimate
{
  std::vector<double> radii;
  std::vector<double> moduli;
  std::vector<int> empty_targets;  // per radius
  AubinVerdict verdict = AubinVerdict::Indeterminate;
};

/// Empirical Lipschitz-like modulus of the solution map y -> {x : y in Phi(x)}
/// around (y0, x0), with solutions read off zeros of N(z) - y. Verdicts:
/// EmptyValueDetected if any target has no localized solution, BlowupEvidence
/// if the last modulus exceeds 10x the first, BoundedEvidence if the last
/// modulus is at most 2x the previous one, Indeterminate otherwise.
AubinEstimate aubin_estimate(const GeneralizedEquation& ge, const AubinOptions& opts = {});

struct AntResult
{
  bool disjoint = true;
  std::optional<Vec> witness;  // u in N_K(x0) with A u in int T_K(x0)
};

/// Decides whether A N_K(x0) meets int T_K(x0) for polyhedral K through the
/// LP  lambda >= 0,  <g_k, A sum_i lambda_i g_i> <= -1  for every normal-cone
/// generator g_k.
AntResult ant_check(const Mat& a, const ConvexSet& k, const Vec& x0);

struct SrOptions
{
  double initial_radius = 0.1;
  int max_radii = 6;
  int targets = 500;
  double window_factor = 10;
  int block = 50;  // targets per parallel block; a radius stops after its first failing block
  LocalSolveOptions solve;
  Exec exec = Exec::Parallel;
  std::uint64_t seed = 0;
};

struct SrLevel
{
  double radius = 0.0;
  int evaluated = 0;
  int empty = 0;
  int multiple = 0;
  double lipschitz = 0.0;
  bool passed = false;
};

struct StrongRegularity
{
  SrVerdict verdict = SrVerdict::Inconclusive;
  double neighborhood_radius = 0.0;
  double inverse_lipschitz = 0.0;
  std::vector<SrLevel> levels;
};

/// Halving schedule from initial_radius; a radius passes when every sampled
/// target near f(z0) has exactly one solution in ball(z0, window_factor * r).
/// Verified after two consecutive passing radii, Refuted after two consecutive
/// failing ones, Inconclusive when the schedule runs out.
StrongRegularity strong_regularity_check(const Map& f, const Vec& z0, const SrOptions& opts = {});

struct PipelineOptions
{
  double discreteness_radius = 0.1;
  AubinOptions aubin;
  SrOptions sr;
  IndexOptions index;
  Exec exec = Exec::Parallel;
  std::uint64_t seed = 0;
};

struct StabilityReport
{
  std::string id;
  Vec x0, y0, z0;
  bool discrete = false;
  std::optional<Vec> discreteness_witness;
  bool ant_applicable = false;
  std::string ant_note;
  AntResult ant;
  std::optional<int> index;
  std::string index_error;
  AubinEstimate aubin;
  StrongRegularity strong_regularity;
  std::vector<std::string> tensions;
  std::map<std::string, double> runtimes;  // seconds per stage
};

/// Full pipeline: canonical point, normal map, discreteness, Aubin estimate,
/// index, ANT (when the linearization is a matrix form at a boundary point of a
/// polyhedral set), strong regularity, then the implication checks. Each
/// violated implication is recorded in `tensions`.
StabilityReport equivalence_experiment(const GeneralizedEquation& ge, const PipelineOptions& opts = {});

/// Implication checks on a finished report.
std::vector<std::string> theorem_tensions(const StabilityReport& r);

/// Local reduction x -> h(x) of S near x_hat onto a closed convex cone C.
struct Reduction
{
  std::string kind;  // "polyhedral", "polyhedral-tangent", "soc-boundary", "cone-identity", "interior"
  Vec x_hat;
  double radius = 0.0;  // U = ball(x_hat, radius)
  ConvexSet cone;
  std::function<Vec(const Vec&)> h;
  std::function<Vec(const Vec&)> h_inv;
  std::function<Mat(const Vec&)> jacobian;  // Jacobian of h (rows = components)
};

/// Throws UnsupportedSet for sets other than polyhedra, orthants and second-order cones.
Reduction make_reduction(const ConvexSet& s, const Vec& x_hat);

struct ReductionReport
{
  std::string kind;
  int samples = 0;
  int membership_mismatches = 0;
  double max_roundtrip_error = 0.0;  // max of |h(h^-1(y)) - y| and |h^-1(h(x)) - x|
  double max_commute_error = 0.0;    // max |Pi_C(g(x)) - h(Pi_S(x))|
  bool passed = false;
};

/// Sampled verification on U: membership transfer, h o h^-1 = id, and
/// Pi_C(g(x)) = h(Pi_S(x)) with g(x) = [grad h(Pi_S x)]^{-1}(x - Pi_S x) + h(Pi_S x),
/// where grad h is the transposed Jacobian. Tolerance 1e-8.
ReductionReport reduction_demo(const ConvexSet& s, const Vec& x_hat, int samples = 1000, std::uint64_t seed = 0);

}  // namespace nmlab
