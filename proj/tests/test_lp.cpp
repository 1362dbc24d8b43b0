#include "doctest.h"

#include "nmlab/lp.hpp"
#include "nmlab/rng.hpp"

using namespace nmlab;

namespace
{

LinearProgram empty_lp(Eigen::Index n)
{
  LinearProgram lp;
  lp.cost = Vec::Zero(n);
  lp.a_ub.resize(0, n);
  lp.b_ub.resize(0);
  lp.a_eq.resize(0, n);
  lp.b_eq.resize(0);
  return lp;
}

}  // namespace

TEST_CASE("textbook LP optimum")
{
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), value 36
  LinearProgram lp = empty_lp(2);
  lp.cost << -3, -5;
  lp.a_ub.resize(3, 2);
  lp.a_ub << 1, 0, 0, 2, 3, 2;
  lp.b_ub.resize(3);
  lp.b_ub << 4, 12, 18;
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x(0) == doctest::Approx(2.0));
  CHECK(s.x(1) == doctest::Approx(6.0));
  CHECK(s.objective == doctest::Approx(-36.0));
}

TEST_CASE("infeasible and unbounded programs are reported")
{
  LinearProgram inf = empty_lp(1);
  inf.a_ub.resize(1, 1);
  inf.a_ub << 1;
  inf.b_ub.resize(1);
  inf.b_ub << -1;  // x <= -1 with x >= 0
  CHECK(solve_lp(inf).status == LpStatus::Infeasible);

  LinearProgram unb = empty_lp(2);
  unb.cost << -1, 0;
  unb.a_ub.resize(1, 2);
  unb.a_ub << 0, 1;
  unb.b_ub.resize(1);
  unb.b_ub << 1;
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);
}

TEST_CASE("free variables and equality rows")
{
  // min x + y, x - y = -3, 0 <= y <= 1, x free -> x = -3, y = 0
  LinearProgram lp = empty_lp(2);
  lp.cost << 1, 1;
  lp.a_eq.resize(1, 2);
  lp.a_eq << 1, -1;
  lp.b_eq.resize(1);
  lp.b_eq << -3;
  lp.a_ub.resize(1, 2);
  lp.a_ub << 0, 1;
  lp.b_ub.resize(1);
  lp.b_ub << 1;
  lp.free_vars = {true, false};
  const LpSolution first = solve_lp(lp);
  REQUIRE(first.status == LpStatus::Optimal);
  CHECK(first.x(0) == doctest::Approx(-3.0));
  CHECK(first.x(1) == doctest::Approx(0.0));
  lp.cost << 1, -1;  // objective constant -3 on the feasible line
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-3.0));
}

TEST_CASE("redundant equality rows")
{
  LinearProgram lp = empty_lp(2);
  lp.cost << 1, 2;
  lp.a_eq.resize(2, 2);
  lp.a_eq << 1, 1, 2, 2;
  lp.b_eq.resize(2);
  lp.b_eq << 1, 2;
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x(0) == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("NNLS agrees with passive-set enumeration")
{
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial)
  {
    const Eigen::Index m = 5, k = 4;
    Mat g(m, k);
    for (Eigen::Index j = 0; j < k; ++j)
    {
      g.col(j) = rng.normal_vec(m);
    }
    const Vec t = rng.normal_vec(m);
    double best = t.norm();
    for (int mask = 1; mask < (1 << k); ++mask)
    {
      std::vector<Eigen::Index> cols;
      for (Eigen::Index j = 0; j < k; ++j)
      {
        if (mask & (1 << j))
        {
          cols.push_back(j);
        }
      }
      Mat gp(m, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c)
      {
        gp.col(static_cast<Eigen::Index>(c)) = g.col(cols[c]);
      }
      const Vec c = gp.colPivHouseholderQr().solve(t);
      if (c.minCoeff() >= 0.0)
      {
        best = std::min(best, (gp * c - t).norm());
      }
    }
    const NnlsResult r = nnls(g, t);
    CHECK(r.coeffs.minCoeff() >= 0.0);
    CHECK(r.residual == doctest::Approx(best).epsilon(1e-9));
  }
}
