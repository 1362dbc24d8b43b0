#include "nmlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace nmlab
{

Domain Domain::box(Vec lo, Vec hi)
{
  if (lo.size() != hi.size() || lo.size() == 0)
  {
    throw Error(ErrorCode::DimensionMismatch, "box bounds disagree");
  }
  if ((hi.array() <= lo.array()).any())
  {
    throw Error(ErrorCode::InvalidInput, "box needs lo < hi in every coordinate");
  }
  Domain d;
  d.kind = Kind::Box;
  d.center = 0.5 * (lo + hi);
  d.radius = 0.5 * (hi - lo).maxCoeff();
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  return d;
}

Domain Domain::ball(Vec center, double radius)
{
  if (!(radius > 0.0) || center.size() == 0)
  {
    throw Error(ErrorCode::InvalidInput, "ball needs a positive radius");
  }
  Domain d;
  d.kind = Kind::Ball;
  d.lo = center.array() - radius;
  d.hi = center.array() + radius;
  d.center = std::move(center);
  d.radius = radius;
  return d;
}

bool Domain::contains(const Vec& x, double slack) const
{
  return inner_margin(x) >= -slack;
}

double Domain::inner_margin(const Vec& x) const
{
  if (kind == Kind::Ball)
  {
    return radius - (x - center).norm();
  }
  return std::min((x - lo).minCoeff(), (hi - x).minCoeff());
}

LmResult lm_solve(const Map& f, const Vec& y, Vec z, const LmOptions& opts)
{
  const Eigen::Index n = z.size();
  Vec r = f(z) - y;
  double rn = r.norm();
  double mu = 1e-6;
  LmResult out;
  int it = 0;
  // Keep iterating past tiny residuals while steps are still large: at a
  // degenerate root (x^3 = 0) the residual drops long before z settles.
  double last_step = std::numeric_limits<double>::infinity();
  for (; it < opts.max_iter && rn > 0.0; ++it)
  {
    if (rn < 1e-13 && last_step <= 1e-10 * std::max(1.0, z.norm()))
    {
      break;
    }
    Mat j(r.size(), n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
      const double h = opts.fd_step * std::max(1.0, std::abs(z(i)));
      Vec zp = z;
      zp(i) += h;
      j.col(i) = (f(zp) - y - r) / h;
    }
    const Mat jtj = j.transpose() * j;
    const Vec g = j.transpose() * r;
    // damping relative to the current curvature scale, so tiny Jacobians near
    // degenerate roots are not swamped
    const double scale = jtj.diagonal().maxCoeff() + 1e-300;
    bool accepted = false;
    for (int inner = 0; inner < 12 && !accepted; ++inner)
    {
      Mat sys = jtj;
      sys.diagonal().array() += mu * scale;
      const Vec step = -sys.ldlt().solve(g);
      if (!step.allFinite())
      {
        mu *= 4.0;
        continue;
      }
      const Vec zt = z + step;
      const Vec rt = f(zt) - y;
      const double rtn = rt.norm();
      if (rtn < rn)
      {
        last_step = step.norm();
        z = zt;
        r = rt;
        rn = rtn;
        mu = std::max(mu / 3.0, 1e-16);
        accepted = true;
      }
      else
      {
        mu *= 4.0;
      }
    }
    if (!accepted)
    {
      break;
    }
  }
  out.z = std::move(z);
  out.residual = rn;
  out.iterations = it;
  out.converged = rn < opts.accept_residual;
  return out;
}

int per_axis_for_budget(Eigen::Index n, int per_axis_3d)
{
  if (n <= 3)
  {
    return per_axis_3d;
  }
  const double total = std::pow(static_cast<double>(per_axis_3d), 3.0);
  return std::max(2, static_cast<int>(std::lround(std::pow(total, 1.0 / static_cast<double>(n)))));
}

std::vector<Vec> grid_starts(const Domain& dom, int per_axis, Rng& rng)
{
  const Eigen::Index n = dom.dim();
  const Vec cell = (dom.hi - dom.lo) / per_axis;
  std::size_t total = 1;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    total *= static_cast<std::size_t>(per_axis);
  }
  std::vector<Vec> out;
  out.reserve(total);
  Vec x(n);
  for (std::size_t k = 0; k < total; ++k)
  {
    std::size_t rest = k;
    for (Eigen::Index i = 0; i < n; ++i)
    {
      const auto idx = static_cast<double>(rest % static_cast<std::size_t>(per_axis));
      rest /= static_cast<std::size_t>(per_axis);
      x(i) = dom.lo(i) + (idx + 0.5 + rng.uniform(-0.25, 0.25)) * cell(i);
    }
    if (dom.kind == Domain::Kind::Ball && (x - dom.center).norm() > dom.radius)
    {
      continue;
    }
    out.push_back(x);
  }
  return out;
}

bool lex_less(const Vec& a, const Vec& b)
{
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i)
  {
    if (a(i) != b(i))
    {
      return a(i) < b(i);
    }
  }
  return a.size() < b.size();
}

std::vector<Vec> dedup_sorted(const std::vector<Vec>& roots, double radius)
{
  std::vector<Vec> kept;
  for (const Vec& r : roots)
  {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Vec& k) { return (k - r).norm() <= radius; });
    if (!dup)
    {
      kept.push_back(r);
    }
  }
  std::sort(kept.begin(), kept.end(), lex_less);
  return kept;
}

std::vector<Vec> find_roots(const Map& f, const Vec& y, const Domain& dom, const std::vector<Vec>& starts,
                            Exec exec, double dedup, const LmOptions& opts)
{
  std::vector<std::optional<Vec>> found(starts.size());
  parallel_for(exec, starts.size(), [&](std::size_t i) {
    LmResult res = lm_solve(f, y, starts[i], opts);
    if (res.converged && dom.contains(res.z))
    {
      found[i] = std::move(res.z);
    }
  });
  std::vector<Vec> roots;
  for (auto& r : found)
  {
    if (r)
    {
      roots.push_back(std::move(*r));
    }
  }
  return dedup_sorted(roots, dedup);
}

std::vector<Vec> solve_local(const Map& f, const Vec& y, const Domain& dom, const std::vector<Vec>& seeds, Rng rng,
                             const LocalSolveOptions& opts)
{
  std::vector<Vec> starts = seeds;
  const std::vector<Vec> grid = grid_starts(dom, per_axis_for_budget(dom.dim(), opts.sparse_per_axis), rng);
  starts.insert(starts.end(), grid.begin(), grid.end());
  std::vector<Vec> roots = find_roots(f, y, dom, starts, Exec::Serial, opts.dedup);
  if (roots.size() == 1)
  {
    return roots;
  }
  std::vector<Vec> dense = grid_starts(dom, per_axis_for_budget(dom.dim(), opts.dense_per_axis), rng);
  dense.insert(dense.end(), roots.begin(), roots.end());
  return find_roots(f, y, dom, dense, Exec::Serial, opts.dedup);
}

}  // namespace nmlab
