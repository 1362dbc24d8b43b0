#pragma once

#include "nmlab/convex_sets.hpp"
#include "nmlab/parallel.hpp"
#include "nmlab/smooth_fn.hpp"

#include <optional>
#include <string>

namespace nmlab
{

/// Single-valued reformulations of generalized equations over a convex set S,
/// written with x = Pi_S(z) and u = z - x:
///   Matrix:   A u + B x
///   Robinson: phi(x) + u
///   Inverse:  phi(u) + x
///   Function: f(u) + g(x)
class NormalMap
{
public:
  enum class Form
  {
    Matrix,
    Robinson,
    Inverse,
    Function,
  };

  static NormalMap matrix(Mat a, Mat b, ConvexSet k);
  static NormalMap robinson(SmoothFn phi, ConvexSet s);
  static NormalMap inverse(SmoothFn phi, ConvexSet s);
  static NormalMap function(SmoothFn f, SmoothFn g, ConvexSet s);

  Form form() const { return form_; }
  Eigen::Index dim() const { return set_.dim(); }
  const ConvexSet& set() const { return set_; }
  const Mat& a() const { return a_; }
  const Mat& b() const { return b_; }
  /// phi for Robinson/Inverse, f for Function.
  const SmoothFn& f() const { return f_; }
  const SmoothFn& g() const { return g_; }

  Vec eval(const Vec& z) const;
  Map as_map() const;

private:
  NormalMap(Form form, ConvexSet set) : form_(form), set_(std::move(set)) {}

  Form form_;
  ConvexSet set_;
  Mat a_, b_;
  SmoothFn f_, g_;
};

/// Exact one-sided derivative N'(z; d) from the piecewise-linear projection
/// derivative; nullopt when the set is not polyhedral.
std::optional<Vec> exact_directional_derivative(const NormalMap& map, const Vec& z, const Vec& d);

/// Richardson-extrapolated forward differences over steps 1e-3, 5e-4, 2.5e-4.
/// Throws NonConvergent when the two extrapolants differ by more than 1e-4.
Vec richardson_directional_derivative(const Map& f, const Vec& z, const Vec& d);

/// N'(z; d) for unit d. Uses the exact path when available and cross-checks it
/// against the extrapolated one (NonConvergent on a mismatch above 1e-5).
Vec directional_derivative(const NormalMap& map, const Vec& z, const Vec& d);

enum class GeForm
{
  Normal,   // y in phi(x) + N_S(x)
  Inverse,  // y in phi(x) + N_S^{-1}(x)
};

class GeneralizedEquation
{
public:
  /// Validates y0 in Phi(x0) to 1e-8; throws InvalidInput otherwise.
  GeneralizedEquation(SmoothFn phi, ConvexSet set, GeForm form, Vec x0, Vec y0, std::string id = {});

  const SmoothFn& phi() const { return phi_; }
  const ConvexSet& set() const { return set_; }
  GeForm form() const { return form_; }
  const Vec& x0() const { return x0_; }
  const Vec& y0() const { return y0_; }
  const std::string& id() const { return id_; }
  Eigen::Index dim() const { return x0_.size(); }

  /// Robinson map for the normal form, inverse-form map otherwise.
  NormalMap normal_map() const;
  /// Solution of the equation that corresponds to a zero z of N - y.
  Vec x_of_z(const Vec& z) const;

private:
  SmoothFn phi_;
  ConvexSet set_;
  GeForm form_;
  Vec x0_, y0_;
  std::string id_;
};

/// z0 = x0 + y0 - phi(x0), checked against the conjugacy relations to 1e-8
/// (ConjugacyViolation otherwise).
Vec canonical_point(const GeneralizedEquation& ge);

struct DiscretenessResult
{
  bool isolated = true;
  std::optional<Vec> nearest_other;
  std::size_t roots_found = 0;
};

/// Multistart search for other solutions of f(z) = f(z0) in ball(z0, radius).
DiscretenessResult discreteness_check(const Map& f, const Vec& z0, double radius, Exec exec = Exec::Parallel,
                                      std::uint64_t seed = 0);

}  // namespace nmlab
