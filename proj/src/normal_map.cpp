#include "nmlab/normal_map.hpp"

#include "nmlab/roots.hpp"

#include <cmath>

namespace nmlab
{

namespace
{

void require_square(const Mat& m, Eigen::Index n, const char* what)
{
  if (m.rows() != n || m.cols() != n)
  {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected " + std::to_string(n) + "x" +
                                                std::to_string(n));
  }
}

void require_fn(const SmoothFn& f, Eigen::Index n, const char* what)
{
  f.validate();
  require_square(f.m, n, what);
}

}  // namespace

NormalMap NormalMap::matrix(Mat a, Mat b, ConvexSet k)
{
  NormalMap map(Form::Matrix, std::move(k));
  require_square(a, map.dim(), "normal map A");
  require_square(b, map.dim(), "normal map B");
  map.a_ = std::move(a);
  map.b_ = std::move(b);
  return map;
}

NormalMap NormalMap::robinson(SmoothFn phi, ConvexSet s)
{
  NormalMap map(Form::Robinson, std::move(s));
  require_fn(phi, map.dim(), "normal map phi");
  map.f_ = std::move(phi);
  return map;
}

NormalMap NormalMap::inverse(SmoothFn phi, ConvexSet s)
{
  NormalMap map(Form::Inverse, std::move(s));
  require_fn(phi, map.dim(), "normal map phi");
  map.f_ = std::move(phi);
  return map;
}

NormalMap NormalMap::function(SmoothFn f, SmoothFn g, ConvexSet s)
{
  NormalMap map(Form::Function, std::move(s));
  require_fn(f, map.dim(), "normal map f");
  require_fn(g, map.dim(), "normal map g");
  map.f_ = std::move(f);
  map.g_ = std::move(g);
  return map;
}

Vec NormalMap::eval(const Vec& z) const
{
  require_dim(z, dim(), "normal map argument");
  const Vec x = project(set_, z);
  const Vec u = z - x;
  switch (form_)
  {
    case Form::Matrix:
      return a_ * u + b_ * x;
    case Form::Robinson:
      return f_.eval(x) + u;
    case Form::Inverse:
      return f_.eval(u) + x;
    case Form::Function:
      return f_.eval(u) + g_.eval(x);
  }
  return {};
}

Map NormalMap::as_map() const
{
  return Map{dim(), [self = *this](const Vec& z) { return self.eval(z); }};
}

std::optional<Vec> exact_directional_derivative(const NormalMap& map, const Vec& z, const Vec& d)
{
  require_dim(z, map.dim(), "derivative point");
  require_dim(d, map.dim(), "derivative direction");
  const std::optional<Vec> p = projection_derivative(map.set(), z, d);
  if (!p)
  {
    return std::nullopt;
  }
  const Vec x = project(map.set(), z);
  const Vec u = z - x;
  const Vec q = d - *p;
  switch (map.form())
  {
    case NormalMap::Form::Matrix:
      return Vec(map.a() * q + map.b() * *p);
    case NormalMap::Form::Robinson:
      return Vec(map.f().jacobian(x) * *p + q);
    case NormalMap::Form::Inverse:
      return Vec(map.f().jacobian(u) * q + *p);
    case NormalMap::Form::Function:
      return Vec(map.f().jacobian(u) * q + map.g().jacobian(x) * *p);
  }
  return std::nullopt;
}

Vec richardson_directional_derivative(const Map& f, const Vec& z, const Vec& d)
{
  const Vec fz = f(z);
  auto quotient = [&](double h) { return Vec((f(z + h * d) - fz) / h); };
  const Vec d1 = quotient(1e-3);
  const Vec d2 = quotient(5e-4);
  const Vec d3 = quotient(2.5e-4);
  const Vec r1 = 2.0 * d2 - d1;
  const Vec r2 = 2.0 * d3 - d2;
  if ((r1 - r2).norm() > 1e-4)
  {
    throw Error(ErrorCode::NonConvergent, "extrapolated difference quotients disagree; point is near a kink");
  }
  return r2;
}

Vec directional_derivative(const NormalMap& map, const Vec& z, const Vec& d)
{
  require_dim(d, map.dim(), "derivative direction");
  if (std::abs(d.norm() - 1.0) > 1e-9)
  {
    throw Error(ErrorCode::InvalidInput, "direction must have unit length");
  }
  const std::optional<Vec> exact = exact_directional_derivative(map, z, d);
  const Vec approx = richardson_directional_derivative(map.as_map(), z, d);
  if (!exact)
  {
    return approx;
  }
  if ((*exact - approx).norm() > 1e-5)
  {
    throw Error(ErrorCode::NonConvergent, "exact and extrapolated derivatives disagree; point is near a kink");
  }
  return *exact;
}

GeneralizedEquation::GeneralizedEquation(SmoothFn phi, ConvexSet set, GeForm form, Vec x0, Vec y0, std::string id)
  : phi_(std::move(phi)), set_(std::move(set)), form_(form), x0_(std::move(x0)), y0_(std::move(y0)),
    id_(std::move(id))
{
  const Eigen::Index n = set_.dim();
  require_fn(phi_, n, "phi");
  require_dim(x0_, n, "x0");
  require_dim(y0_, n, "y0");
  constexpr double tol = 1e-8;
  const Vec w = y0_ - phi_.eval(x0_);
  if (form_ == GeForm::Normal)
  {
    // w in N_S(x0)  <=>  x0 in S and Pi_S(x0 + w) = x0
    if (!contains(set_, x0_, tol) || (project(set_, x0_ + w) - x0_).norm() > tol)
    {
      throw Error(ErrorCode::InvalidInput, "y0 - phi(x0) is not a normal vector to S at x0");
    }
  }
  else
  {
    if (!contains(set_, w, tol) || (project(set_, w + x0_) - w).norm() > tol)
    {
      throw Error(ErrorCode::InvalidInput, "x0 is not a normal vector to S at y0 - phi(x0)");
    }
  }
}

NormalMap GeneralizedEquation::normal_map() const
{
  return form_ == GeForm::Normal ? NormalMap::robinson(phi_, set_) : NormalMap::inverse(phi_, set_);
}

Vec GeneralizedEquation::x_of_z(const Vec& z) const
{
  const Vec p = project(set_, z);
  return form_ == GeForm::Normal ? p : Vec(z - p);
}

Vec canonical_point(const GeneralizedEquation& ge)
{
  constexpr double tol = 1e-8;
  const Vec z0 = ge.x0() + ge.y0() - ge.phi().eval(ge.x0());
  if ((ge.x_of_z(z0) - ge.x0()).norm() > tol)
  {
    throw Error(ErrorCode::ConjugacyViolation, "z0 does not map back to x0");
  }
  if ((ge.normal_map().eval(z0) - ge.y0()).norm() > tol)
  {
    throw Error(ErrorCode::ConjugacyViolation, "N(z0) differs from y0");
  }
  return z0;
}

DiscretenessResult discreteness_check(const Map& f, const Vec& z0, double radius, Exec exec, std::uint64_t seed)
{
  if (!(radius > 0.0))
  {
    throw Error(ErrorCode::InvalidInput, "region radius must be positive");
  }
  const Domain dom = Domain::ball(z0, radius);
  Rng rng(seed);
  std::vector<Vec> starts = grid_starts(dom, per_axis_for_budget(z0.size(), 21), rng);
  starts.push_back(z0);
  const std::vector<Vec> roots = find_roots(f, f(z0), dom, starts, exec);
  DiscretenessResult out;
  out.roots_found = roots.size();
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& r : roots)
  {
    const double dist = (r - z0).norm();
    if (dist > 1e-6 && dist < best)
    {
      best = dist;
      out.nearest_other = r;
    }
  }
  out.isolated = !out.nearest_other.has_value();
  return out;
}

}  // namespace nmlab
