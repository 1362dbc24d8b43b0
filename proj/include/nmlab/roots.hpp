#pragma once

#include "nmlab/parallel.hpp"
#include "nmlab/rng.hpp"
#include "nmlab/smooth_fn.hpp"

#include <vector>

namespace nmlab
{

/// Bounded search region: an axis-aligned box or a Euclidean ball.
struct Domain
{
  enum class Kind
  {
    Box,
    Ball,
  };
  Kind kind = Kind::Box;
  Vec lo, hi;       // box bounds (also the bounding box of a ball)
  Vec center;
  double radius = 0.0;

  static Domain box(Vec lo, Vec hi);
  static Domain ball(Vec center, double radius);

  Eigen::Index dim() const { return lo.size(); }
  bool contains(const Vec& x, double slack = 0.0) const;
  /// Signed distance to the boundary, positive inside.
  double inner_margin(const Vec& x) const;
};

struct LmOptions
{
  int max_iter = 50;
  double accept_residual = 1e-10;
  double fd_step = 1e-7;
};

struct LmResult
{
  Vec z;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt on |f(z) - y|^2 with forward-difference Jacobians.
/// Converged means the final residual is below opts.accept_residual.
LmResult lm_solve(const Map& f, const Vec& y, Vec z, const LmOptions& opts = {});

/// Jittered tensor grid with `per_axis` cells per coordinate over the domain's
/// bounding box; ball domains drop cells that miss the ball. Jitter stays within
/// a quarter cell.
std::vector<Vec> grid_starts(const Domain& dom, int per_axis, Rng& rng);

/// Cells per axis in dimension n so that the grid holds about
/// per_axis_3d^min(n,3) points.
int per_axis_for_budget(Eigen::Index n, int per_axis_3d);

/// Runs LM from every start, keeps converged roots inside the domain, merges
/// roots closer than `dedup` (first by start order), and returns them sorted
/// lexicographically. Serial and parallel runs give identical output.
std::vector<Vec> find_roots(const Map& f, const Vec& y, const Domain& dom, const std::vector<Vec>& starts,
                            Exec exec, double dedup = 1e-6, const LmOptions& opts = {});

/// Greedy merge within `radius`, then lexicographic sort.
std::vector<Vec> dedup_sorted(const std::vector<Vec>& roots, double radius = 1e-6);

bool lex_less(const Vec& a, const Vec& b);

/// Per-target solve used by sampling estimators: a sparse jittered grid plus
/// the supplied seeds; escalates to a dense grid whenever the sparse pass does
/// not find exactly one root. The work items run serially; callers parallelize
/// across targets.
struct LocalSolveOptions
{
  int sparse_per_axis = 4;
  int dense_per_axis = 8;
  double dedup = 1e-6;
};

std::vector<Vec> solve_local(const Map& f, const Vec& y, const Domain& dom, const std::vector<Vec>& seeds,
                             Rng rng, const LocalSolveOptions& opts = {});

}  // namespace nmlab
