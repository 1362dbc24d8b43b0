#include "doctest.h"

#include "nmlab/battery.hpp"
#include "nmlab/stability.hpp"

using namespace nmlab;

TEST_CASE("random positive part has the requested symmetric floor")
{
  Rng rng(3);
  for (int i = 0; i < 50; ++i)
  {
    const Mat a = random_positive_part(rng, 1 + i % 4, 0.7, 1.5);
    const Mat sym = 0.5 * (a + a.transpose());
    CHECK(Eigen::SelfAdjointEigenSolver<Mat>(sym).eigenvalues()(0) >= 0.7 - 1e-12);
  }
}

TEST_CASE("random normals lie in the normal cone")
{
  Rng rng(5);
  for (const ConvexSet& k : matrix_battery_sets())
  {
    for (int i = 0; i < 200; ++i)
    {
      const Vec x = random_base_point(rng, k);
      REQUIRE(contains(k, x, 1e-12));
      const Vec u = random_normal(rng, k, x);
      // u in N_K(x)  <=>  Pi_K(x + u) = x
      CHECK((project(k, x + u) - x).norm() <= 1e-9);
    }
  }
}

TEST_CASE("battery generators are deterministic in the seed")
{
  const auto a = injective_matrix_battery(11, 8);
  const auto b = injective_matrix_battery(11, 8);
  REQUIRE(a.size() == 8);
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].map.a() == b[i].map.a());
    CHECK(a[i].x0 == b[i].x0);
  }
  const auto c = injective_matrix_battery(12, 8);
  CHECK(c[0].map.a() != a[0].map.a());
}

TEST_CASE("ANT batteries are classified as labelled")
{
  for (const MatrixInstance& inst : ant_violating_battery(21, 12))
  {
    CHECK(!ant_check(inst.map.a(), inst.map.set(), inst.x0).disjoint);
    CHECK(!normal_cone(inst.map.set(), inst.x0).is_trivial());
  }
  for (const MatrixInstance& inst : ant_satisfying_battery(22, 12))
  {
    CHECK(ant_check(inst.map.a(), inst.map.set(), inst.x0).disjoint);
  }
}

TEST_CASE("monotone battery instances are consistent generalized equations")
{
  const auto ges = monotone_battery(31, 12);
  REQUIRE(ges.size() == 12);
  for (const GeneralizedEquation& ge : ges)
  {
    const Vec z0 = canonical_point(ge);
    CHECK((ge.normal_map().eval(z0) - ge.y0()).norm() <= 1e-9);
    CHECK((ge.x_of_z(z0) - ge.x0()).norm() <= 1e-9);
  }
}

TEST_CASE("centered quadratic vanishes to second order at the center")
{
  Rng rng(9);
  const Vec x0 = rng.normal_vec(3);
  std::vector<Mat> q;
  for (int k = 0; k < 3; ++k)
  {
    q.push_back(Mat::Random(3, 3));
  }
  const SmoothFn g = centered_quadratic(q, x0);
  CHECK(g.eval(x0).norm() <= 1e-12);
  CHECK(g.jacobian(x0).norm() <= 1e-12);
  const Vec d = rng.normal_vec(3);
  const Vec gd = g.eval(x0 + d);
  for (int k = 0; k < 3; ++k)
  {
    CHECK(gd(k) == doctest::Approx(d.dot(q[static_cast<std::size_t>(k)] * d)).epsilon(1e-10));
  }
}

TEST_CASE("homotopy battery pairs carry passing stationarity certificates")
{
  for (const HomotopyInstance& h : homotopy_battery(41, 8))
  {
    const Map g{h.x0.size(), [&h](const Vec& x) { return h.g.eval(x); }};
    const StationarityCertificate cert = strict_stationarity_certificate(g, h.x0, h.g.derivative_lipschitz(), {1e-1, 1e-2, 1e-3}, 200, 1);
    CHECK(cert.passed);
  }
}
