#pragma once

#include "nmlab/core.hpp"
#include "nmlab/rng.hpp"

#include <initializer_list>

namespace testing_helpers
{

inline nmlab::Vec v(std::initializer_list<double> xs)
{
  nmlab::Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const double x : xs)
  {
    out(i++) = x;
  }
  return out;
}

inline nmlab::Mat m1(double a)
{
  return nmlab::Mat::Constant(1, 1, a);
}

/// Random matrix with A + A^T >= 2 * floor * I.
inline nmlab::Mat positive_definite_part(nmlab::Rng& rng, Eigen::Index n, double floor = 0.5)
{
  nmlab::Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      a(i, j) = rng.normal();
    }
  }
  const nmlab::Mat sym = 0.5 * (a + a.transpose());
  const double lo = Eigen::SelfAdjointEigenSolver<nmlab::Mat>(sym).eigenvalues()(0);
  a.diagonal().array() += floor - std::min(lo, 0.0);
  return a;
}

}  // namespace testing_helpers
