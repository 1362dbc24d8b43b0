#pragma once

#include "nmlab/core.hpp"

#include <vector>

namespace nmlab
{

enum class LpStatus
{
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
};

/// minimize cost.x  s.t.  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0 unless free.
struct LinearProgram
{
  Vec cost;
  Mat a_ub;
  Vec b_ub;
  Mat a_eq;
  Vec b_eq;
  std::vector<bool> free_vars;  // empty: every variable is sign-constrained
};

struct LpSolution
{
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double objective = 0.0;
};

/// Dense two-phase tableau simplex with Bland's rule. Intended for the small
/// feasibility programs in this library (tens of rows and columns).
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-9);

struct NnlsResult
{
  Vec coeffs;
  double residual = 0.0;  // ||g * coeffs - target||
};

/// Lawson-Hanson non-negative least squares: min ||g c - target||, c >= 0.
NnlsResult nnls(const Mat& g, const Vec& target);

}  // namespace nmlab
