#pragma once

#include "nmlab/parallel.hpp"
#include "nmlab/roots.hpp"
#include "nmlab/smooth_fn.hpp"

#include <string>
#include <vector>

namespace nmlab
{

enum class DegreeMethod
{
  RegularSum,
  Winding2D,
  SignChange1D,
  Auto,
};

std::string_view to_string(DegreeMethod m);

struct Preimage
{
  Vec x;
  int sign = 0;
};

struct DegreeResult
{
  int value = 0;
  DegreeMethod method = DegreeMethod::RegularSum;
  Vec perturbed_target;
  double boundary_margin = 0.0;
  std::vector<Preimage> preimages;  // RegularSum only; sorted lexicographically
  int retries = 0;
};

struct DegreeOptions
{
  DegreeMethod method = DegreeMethod::Auto;
  int boundary_samples = 10000;
  int max_retries = 10;
  Exec exec = Exec::Parallel;
  std::uint64_t seed = 0;
};

/// Smallest |f(x) - y| over a dense boundary sample of the domain.
double boundary_margin(const Map& f, const Domain& dom, const Vec& y, int samples, Exec exec, std::uint64_t seed);

/// deg(f, dom, y).
///   RegularSum: signed count of preimages of a target perturbed by at most
///     min(1e-6, margin/10), with multistart densities 11, 21, 31 per axis
///     (total capped at the 3-D sizes for n = 4) until two densities agree.
///   Winding2D: winding number of f - y along the boundary polyline.
///   SignChange1D: (sgn(f(b) - y) - sgn(f(a) - y)) / 2.
DegreeResult degree(const Map& f, const Domain& dom, const Vec& y, const DegreeOptions& opts = {});

struct IndexOptions
{
  double initial_radius = 0.1;
  double min_radius = 1e-3;
  int max_radii = 6;
  bool translation_check = true;
  DegreeOptions degree;
};

struct IndexResult
{
  int value = 0;
  double radius = 0.0;               // radius at which the value was accepted
  std::vector<double> radii;         // degree radii tried
  std::vector<int> values;           // degree at each radius
  DegreeResult degree;               // certificate at the accepted radius
  bool translation_checked = false;
  bool translation_ok = true;
  int translation_value = 0;
};

/// ind(f, x0): degree over ball(x0, r) at f(x0), halving r until two
/// consecutive radii agree. Throws NotIsolated when the discreteness search
/// keeps finding other solutions down to min_radius.
IndexResult index(const Map& f, const Vec& x0, const IndexOptions& opts = {});

struct AubinSurrogate
{
  std::vector<double> radii;
  std::vector<double> moduli;
  bool empty_preimage = false;
  bool passed = false;
};

/// Metric-regularity sampling for f^{-1} around (f(x0), x0): targets at
/// distance r from f(x0) (coordinate directions and random ones) must have
/// preimages in ball(x0, 10 r), and the ratio dist(x0, f^{-1}(y)) / |y - f(x0)|
/// must not grow by more than a factor 2 across the radii.
AubinSurrogate aubin_surrogate(const Map& f, const Vec& x0, const std::vector<double>& radii = {1e-2, 5e-3},
                               int random_targets = 20, Exec exec = Exec::Parallel, std::uint64_t seed = 0);

struct HomotopyCheck
{
  bool precondition_ok = false;
  std::string reason;
  StationarityCertificate certificate;
  AubinSurrogate aubin;
  int index_map = 0;
  int index_perturbed = 0;
  bool equal = false;
};

/// Compares ind(f, x0) with ind(f + g, x0) for a strictly stationary g. The
/// indices are only computed when both preconditions hold.
HomotopyCheck homotopy_index_check(const Map& f, const Perturbation& g, const Vec& x0, const IndexOptions& opts = {});

}  // namespace nmlab
