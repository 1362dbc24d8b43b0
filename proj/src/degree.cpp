#include "nmlab/degree.hpp"

#include "nmlab/normal_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nmlab
{

std::string_view to_string(DegreeMethod m)
{
  switch (m)
  {
    case DegreeMethod::RegularSum:
      return "RegularSum";
    case DegreeMethod::Winding2D:
      return "Winding2D";
    case DegreeMethod::SignChange1D:
      return "SignChange1D";
    case DegreeMethod::Auto:
      return "Auto";
  }
  return "?";
}

namespace
{

constexpr double kMinMargin = 1e-9;

Vec boundary_point(const Domain& dom, Rng& rng)
{
  const Eigen::Index n = dom.dim();
  if (dom.kind == Domain::Kind::Ball)
  {
    return dom.center + dom.radius * rng.unit_vec(n);
  }
  Vec x(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    x(i) = rng.uniform(dom.lo(i), dom.hi(i));
  }
  const int face = rng.uniform_int(0, static_cast<int>(2 * n) - 1);
  const Eigen::Index axis = face / 2;
  x(axis) = face % 2 ? dom.hi(axis) : dom.lo(axis);
  return x;
}

/// Closed counterclockwise boundary curve of a planar domain, t in [0, 1].
Vec boundary_curve(const Domain& dom, double t)
{
  if (dom.kind == Domain::Kind::Ball)
  {
    const double a = 2.0 * std::numbers::pi * t;
    return dom.center + dom.radius * Vec((Vec(2) << std::cos(a), std::sin(a)).finished());
  }
  const double s = 4.0 * t;
  const int edge = std::min(3, static_cast<int>(s));
  const double w = s - edge;
  const double x0 = dom.lo(0), x1 = dom.hi(0), y0 = dom.lo(1), y1 = dom.hi(1);
  Vec p(2);
  switch (edge)
  {
    case 0:
      p << x0 + w * (x1 - x0), y0;
      break;
    case 1:
      p << x1, y0 + w * (y1 - y0);
      break;
    case 2:
      p << x1 - w * (x1 - x0), y1;
      break;
    default:
      p << x0, y1 - w * (y1 - y0);
      break;
  }
  return p;
}

int sgn(double v)
{
  return (v > 0.0) - (v < 0.0);
}

bool same_root_set(const std::vector<Vec>& a, const std::vector<Vec>& b, double tol)
{
  if (a.size() != b.size())
  {
    return false;
  }
  std::vector<bool> used(b.size(), false);
  for (const Vec& x : a)
  {
    bool matched = false;
    for (std::size_t j = 0; j < b.size() && !matched; ++j)
    {
      if (!used[j] && (x - b[j]).norm() <= tol)
      {
        used[j] = true;
        matched = true;
      }
    }
    if (!matched)
    {
      return false;
    }
  }
  return true;
}

DegreeResult degree_sign_change(const Map& f, const Domain& dom, const Vec& y)
{
  const Vec a = dom.lo, b = dom.hi;
  const double fa = f(a)(0) - y(0), fb = f(b)(0) - y(0);
  DegreeResult out;
  out.method = DegreeMethod::SignChange1D;
  out.perturbed_target = y;
  out.boundary_margin = std::min(std::abs(fa), std::abs(fb));
  if (out.boundary_margin < kMinMargin)
  {
    throw Error(ErrorCode::BoundaryProximity, "target is attained on the boundary");
  }
  out.value = (sgn(fb) - sgn(fa)) / 2;
  return out;
}

DegreeResult degree_winding(const Map& f, const Domain& dom, const Vec& y, double sampled_margin)
{
  struct Node
  {
    double t;
    Vec v;
  };
  auto value = [&](double t) { return Vec(f(boundary_curve(dom, t)) - y); };
  constexpr int initial = 256;
  double margin = sampled_margin;
  double total = 0.0;
  std::vector<std::pair<Node, Node>> stack;
  Node prev{0.0, value(0.0)};
  const Node first = prev;
  for (int k = 1; k <= initial; ++k)
  {
    const double t = static_cast<double>(k) / initial;
    Node cur = k == initial ? Node{1.0, first.v} : Node{t, value(t)};
    stack.emplace_back(prev, cur);
    prev = cur;
  }
  std::reverse(stack.begin(), stack.end());
  while (!stack.empty())
  {
    auto [a, b] = stack.back();
    stack.pop_back();
    margin = std::min({margin, a.v.norm(), b.v.norm()});
    if (margin < kMinMargin)
    {
      throw Error(ErrorCode::BoundaryProximity, "boundary curve passes through the target");
    }
    const double cross = a.v(0) * b.v(1) - a.v(1) * b.v(0);
    const double dot = a.v.dot(b.v);
    const double dtheta = std::atan2(cross, dot);
    if (std::abs(dtheta) < std::numbers::pi / 4.0)
    {
      total += dtheta;
      continue;
    }
    if (b.t - a.t < 1e-13)
    {
      throw Error(ErrorCode::NonConvergent, "winding refinement hit the resolution limit");
    }
    const double tm = 0.5 * (a.t + b.t);
    Node mid{tm, value(tm)};
    stack.emplace_back(mid, b);
    stack.emplace_back(a, mid);
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.1)
  {
    throw Error(ErrorCode::NonConvergent, "winding sum is not close to an integer");
  }
  DegreeResult out;
  out.method = DegreeMethod::Winding2D;
  out.value = static_cast<int>(rounded);
  out.perturbed_target = y;
  out.boundary_margin = margin;
  return out;
}

DegreeResult degree_regular_sum(const Map& f, const Domain& dom, const Vec& y, double margin,
                                const DegreeOptions& opts)
{
  const Eigen::Index n = dom.dim();
  if (n > 4)
  {
    throw Error(ErrorCode::TooLarge, "RegularSum supports dimension at most 4");
  }
  const Rng root(opts.seed, 7);
  const int densities[] = {11, 21, 31};
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt)
  {
    Rng rng = root.split(static_cast<std::uint64_t>(attempt));
    const double step = std::min(1e-6, margin / 10.0);
    const Vec target = y + step * rng.unit_vec(n);

    std::vector<Vec> previous;
    bool stable = false;
    for (int level = 0; level < 3 && !stable; ++level)
    {
      Rng grid_rng = rng.split(static_cast<std::uint64_t>(level + 1));
      const auto starts = grid_starts(dom, per_axis_for_budget(n, densities[level]), grid_rng);
      std::vector<Vec> roots = find_roots(f, target, dom, starts, opts.exec);
      stable = level > 0 && same_root_set(previous, roots, 1e-6);
      previous = std::move(roots);
    }
    if (!stable)
    {
      throw Error(ErrorCode::PreimageSearchIncomplete, "preimage set did not stabilize across grid densities");
    }

    DegreeResult out;
    out.method = DegreeMethod::RegularSum;
    out.perturbed_target = target;
    out.boundary_margin = margin;
    out.retries = attempt;
    bool degenerate = false;
    for (const Vec& x : previous)
    {
      const double dc = central_jacobian(f, x, 1e-7).determinant();
      const double df = fd_jacobian(f, x, 1e-7).determinant();
      if (std::abs(dc) <= 1e-8 || sgn(dc) != sgn(df))
      {
        degenerate = true;
        break;
      }
      out.preimages.push_back({x, sgn(dc)});
      out.value += sgn(dc);
    }
    if (!degenerate)
    {
      return out;
    }
  }
  throw Error(ErrorCode::DegenerateJacobian, "singular Jacobian at a preimage after every target perturbation");
}

}  // namespace

double boundary_margin(const Map& f, const Domain& dom, const Vec& y, int samples, Exec exec, std::uint64_t seed)
{
  require_dim(y, dom.dim(), "degree target");
  if (dom.dim() == 1)
  {
    return std::min((f(dom.lo) - y).norm(), (f(dom.hi) - y).norm());
  }
  const Rng root(seed, 3);
  std::vector<double> dist(static_cast<std::size_t>(samples));
  parallel_for(exec, dist.size(), [&](std::size_t k) {
    Rng rng = root.split(k);
    dist[k] = (f(boundary_point(dom, rng)) - y).norm();
  });
  return *std::min_element(dist.begin(), dist.end());
}

DegreeResult degree(const Map& f, const Domain& dom, const Vec& y, const DegreeOptions& opts)
{
  const Eigen::Index n = dom.dim();
  require_dim(y, n, "degree target");
  DegreeMethod method = opts.method;
  if (method == DegreeMethod::Auto)
  {
    method = n == 1 ? DegreeMethod::SignChange1D : (n == 2 ? DegreeMethod::Winding2D : DegreeMethod::RegularSum);
  }
  if (method == DegreeMethod::SignChange1D)
  {
    if (n != 1)
    {
      throw Error(ErrorCode::DimensionMismatch, "sign-change degree needs n = 1");
    }
    return degree_sign_change(f, dom, y);
  }
  if (method == DegreeMethod::Winding2D && n != 2)
  {
    throw Error(ErrorCode::DimensionMismatch, "winding degree needs n = 2");
  }
  const double margin = boundary_margin(f, dom, y, std::max(opts.boundary_samples, 1), opts.exec, opts.seed);
  if (margin < kMinMargin)
  {
    throw Error(ErrorCode::BoundaryProximity, "target lies within 1e-9 of the boundary image");
  }
  if (method == DegreeMethod::Winding2D)
  {
    return degree_winding(f, dom, y, margin);
  }
  return degree_regular_sum(f, dom, y, margin, opts);
}

IndexResult index(const Map& f, const Vec& x0, const IndexOptions& opts)
{
  double r = opts.initial_radius;
  for (;;)
  {
    const DiscretenessResult disc = discreteness_check(f, x0, r, opts.degree.exec, opts.degree.seed);
    if (disc.isolated)
    {
      break;
    }
    r = 0.5 * (*disc.nearest_other - x0).norm();
    if (r < opts.min_radius)
    {
      throw Error(ErrorCode::NotIsolated, "other solutions accumulate at the point");
    }
  }

  const Vec y0 = f(x0);
  IndexResult out;
  bool settled = false;
  for (int k = 0; k < opts.max_radii && !settled; ++k)
  {
    DegreeOptions dopts = opts.degree;
    dopts.seed = splitmix64(opts.degree.seed + static_cast<std::uint64_t>(k));
    DegreeResult d = degree(f, Domain::ball(x0, r), y0, dopts);
    out.radii.push_back(r);
    out.values.push_back(d.value);
    settled = k > 0 && out.values[static_cast<std::size_t>(k)] == out.values[static_cast<std::size_t>(k - 1)];
    out.value = d.value;
    out.radius = r;
    out.degree = std::move(d);
    r *= 0.5;
  }
  if (!settled)
  {
    throw Error(ErrorCode::NonConvergent, "degree did not settle over the radius schedule");
  }

  if (opts.translation_check)
  {
    Rng rng(opts.degree.seed, 11);
    const Vec xs = 0.5 * rng.normal_vec(x0.size());
    const Vec ys = 0.5 * rng.normal_vec(x0.size());
    const Map shifted{f.dim, [f, xs, ys](const Vec& x) { return Vec(f(x + xs) + ys); }};
    const Vec at = x0 - xs;
    DegreeOptions dopts = opts.degree;
    dopts.seed = splitmix64(opts.degree.seed ^ 0x5bd1e995ULL);
    out.translation_checked = true;
    out.translation_value = degree(shifted, Domain::ball(at, out.radius), shifted(at), dopts).value;
    out.translation_ok = out.translation_value == out.value;
  }
  return out;
}

AubinSurrogate aubin_surrogate(const Map& f, const Vec& x0, const std::vector<double>& radii, int random_targets,
                               Exec exec, std::uint64_t seed)
{
  const Eigen::Index n = x0.size();
  const Vec y0 = f(x0);
  AubinSurrogate out;
  out.radii = radii;
  const Rng root(seed, 13);
  for (std::size_t k = 0; k < radii.size(); ++k)
  {
    const double r = radii[k];
    Rng dir_rng = root.split(2 * k);
    std::vector<Vec> targets;
    for (Eigen::Index i = 0; i < n; ++i)
    {
      targets.push_back(y0 + r * Vec::Unit(n, i));
      targets.push_back(y0 - r * Vec::Unit(n, i));
    }
    for (int j = 0; j < random_targets; ++j)
    {
      targets.push_back(y0 + r * dir_rng.unit_vec(n));
    }
    const Domain window = Domain::ball(x0, 10.0 * r);
    const Rng solve_rng = root.split(2 * k + 1);
    std::vector<double> ratio(targets.size(), 0.0);
    std::vector<char> empty(targets.size(), 0);
    parallel_for(exec, targets.size(), [&](std::size_t t) {
      const auto roots = solve_local(f, targets[t], window, {x0}, solve_rng.split(t));
      if (roots.empty())
      {
        empty[t] = 1;
        return;
      }
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& x : roots)
      {
        best = std::min(best, (x - x0).norm());
      }
      ratio[t] = best / r;
    });
    out.empty_preimage = out.empty_preimage || std::any_of(empty.begin(), empty.end(), [](char e) { return e; });
    out.moduli.push_back(*std::max_element(ratio.begin(), ratio.end()));
  }
  out.passed = !out.empty_preimage && !out.moduli.empty() && out.moduli.back() <= 2.0 * out.moduli.front() + 1e-12;
  return out;
}

HomotopyCheck homotopy_index_check(const Map& f, const Perturbation& g, const Vec& x0, const IndexOptions& opts)
{
  HomotopyCheck out;
  const Map gm{f.dim, [g](const Vec& x) { return g.eval(x); }};
  out.certificate = strict_stationarity_certificate(gm, x0, g.derivative_lipschitz(), {1e-1, 1e-2, 1e-3}, 1000,
                                                    opts.degree.seed);
  if (!out.certificate.passed)
  {
    out.reason = "perturbation is not certified strictly stationary";
    return out;
  }
  out.aubin = aubin_surrogate(f, x0, {1e-2, 5e-3}, 20, opts.degree.exec, opts.degree.seed);
  if (!out.aubin.passed)
  {
    out.reason = out.aubin.empty_preimage ? "inverse has empty values near the base point"
                                          : "inverse modulus grows as the radius shrinks";
    return out;
  }
  out.precondition_ok = true;
  const Map sum{f.dim, [f, g](const Vec& x) { return Vec(f(x) + g.eval(x)); }};
  out.index_map = index(f, x0, opts).value;
  out.index_perturbed = index(sum, x0, opts).value;
  out.equal = out.index_map == out.index_perturbed;
  return out;
}

}  // namespace nmlab
