#include "doctest.h"

#include "helpers.hpp"
#include "nmlab/normal_map.hpp"
#include "nmlab/roots.hpp"

#include <cmath>

using namespace nmlab;
using testing_helpers::m1;
using testing_helpers::v;

namespace
{

SmoothFn random_smooth(Rng& rng, Eigen::Index n)
{
  SmoothFn f = SmoothFn::affine(Mat::Random(n, n), rng.normal_vec(n));
  for (Eigen::Index k = 0; k < n; ++k)
  {
    f.quad.push_back(0.3 * Mat::Random(n, n));
  }
  f.sines.push_back({0, n - 1, 0.5, 2.0, 0.3});
  f.sines.push_back({n - 1, 0, -0.2, 3.0, 1.0});
  f.validate();
  return f;
}

}  // namespace

TEST_CASE("LM and multistart root finding")
{
  const Map cubic{1, [](const Vec& x) { return Vec(x.array().cube() - x.array()); }};
  const Domain dom = Domain::box(v({-2}), v({2}));
  Rng rng(3);
  const auto starts = grid_starts(dom, 21, rng);
  CHECK(starts.size() == 21);
  const auto roots = find_roots(cubic, v({0}), dom, starts, Exec::Serial);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0](0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(roots[1](0)) < 1e-9);
  CHECK(roots[2](0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(find_roots(cubic, v({0}), dom, starts, Exec::Parallel) == roots);

  const Map lin{2, [](const Vec& x) { return Vec(Mat{{2, 1}, {1, 3}} * x); }};
  const LmResult r = lm_solve(lin, v({1, 2}), v({5, -5}));
  CHECK(r.converged);
  CHECK((Mat{{2, 1}, {1, 3}} * r.z - v({1, 2})).norm() < 1e-10);

  const Domain ball = Domain::ball(v({0, 0}), 1.0);
  Rng rng2(4);
  for (const Vec& s : grid_starts(ball, 9, rng2))
  {
    CHECK(ball.contains(s));
  }
  CHECK_THROWS_AS(Domain::ball(v({0}), 0.0), Error);
  CHECK_THROWS_AS(Domain::box(v({0, 1}), v({1, 1})), Error);
}

TEST_CASE("smooth function Jacobian matches central differences")
{
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial)
  {
    const Eigen::Index n = 1 + trial % 4;
    const SmoothFn f = random_smooth(rng, n);
    const Vec x = rng.normal_vec(n);
    const Mat exact = f.jacobian(x);
    const Mat fd = central_jacobian(as_map(f), x, 1e-6);
    CHECK((exact - fd).norm() <= 1e-6 * std::max(1.0, exact.norm()));
  }
  SmoothFn bad = SmoothFn::identity(2);
  bad.sines.push_back({0, 2, 1.0, 1.0, 0.0});
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("Jacobian Lipschitz bound holds on random pairs")
{
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial)
  {
    const Eigen::Index n = 1 + trial % 3;
    const SmoothFn f = random_smooth(rng, n);
    const double l2 = f.jacobian_lipschitz();
    const Vec a = rng.normal_vec(n), b = rng.normal_vec(n);
    const double lhs = (f.jacobian(a) - f.jacobian(b)).jacobiSvd().singularValues()(0);
    CHECK(lhs <= l2 * (a - b).norm() * (1 + 1e-12));
  }
}

TEST_CASE("normal map evaluation examples")
{
  CHECK(NormalMap::matrix(m1(-1), m1(1), ConvexSet::orthant(1)).eval(v({-2}))(0) == doctest::Approx(2.0));
  const Vec n2 = NormalMap::matrix(-Mat::Identity(2, 2), Mat::Identity(2, 2), ConvexSet::orthant(2)).eval(v({-1, 3}));
  CHECK((n2 - v({1, 3})).norm() < 1e-15);
  CHECK(NormalMap::robinson(SmoothFn::identity(1), ConvexSet::orthant(1)).eval(v({-0.5}))(0) ==
        doctest::Approx(-0.5));
  CHECK_THROWS_AS(NormalMap::matrix(Mat::Identity(2, 2), Mat::Identity(3, 3), ConvexSet::orthant(2)), Error);
  CHECK_THROWS_AS(NormalMap::matrix(m1(1), m1(1), ConvexSet::orthant(1)).eval(v({1, 2})), Error);

  // Inverse and function forms on R_+ with explicit formulas.
  const NormalMap inv = NormalMap::inverse(SmoothFn::affine(m1(2), v({1})), ConvexSet::orthant(1));
  CHECK(inv.eval(v({-3}))(0) == doctest::Approx(2 * -3 + 1));
  CHECK(inv.eval(v({3}))(0) == doctest::Approx(1 + 3));
  const NormalMap fn = NormalMap::function(SmoothFn::linear(m1(5)), SmoothFn::affine(m1(7), v({1})),
                                           ConvexSet::orthant(1));
  CHECK(fn.eval(v({-2}))(0) == doctest::Approx(-10 + 1));
  CHECK(fn.eval(v({2}))(0) == doctest::Approx(15));
}

TEST_CASE("matrix-form map is affine on the preimage of a relatively open face")
{
  Rng rng(21);
  const ConvexSet cube = ConvexSet::unit_cube(3);
  for (int trial = 0; trial < 50; ++trial)
  {
    const Mat a = Mat::Random(3, 3), b = Mat::Random(3, 3);
    const NormalMap map = NormalMap::matrix(a, b, cube);
    // face: fix a random subset of coordinates at 0 or 1
    Vec x(3), u(3);
    Mat proj = Mat::Zero(3, 3);
    std::vector<int> fixed(3);
    for (int i = 0; i < 3; ++i)
    {
      fixed[static_cast<std::size_t>(i)] = rng.uniform_int(-1, 1);
    }
    auto sample = [&](Vec& xs, Vec& us) {
      for (int i = 0; i < 3; ++i)
      {
        const int f = fixed[static_cast<std::size_t>(i)];
        xs(i) = f == 0 ? rng.uniform(0.1, 0.9) : (f > 0 ? 1.0 : 0.0);
        us(i) = f == 0 ? 0.0 : f * rng.uniform(0.1, 2.0);
      }
    };
    for (int i = 0; i < 3; ++i)
    {
      proj(i, i) = fixed[static_cast<std::size_t>(i)] == 0 ? 1.0 : 0.0;
    }
    Vec x2(3), u2(3);
    sample(x, u);
    sample(x2, u2);
    const Vec z1 = x + u, z2 = x2 + u2;
    const Mat lin = a - a * proj + b * proj;
    CHECK((map.eval(z1) - map.eval(z2) - lin * (z1 - z2)).norm() < 1e-12);
  }
}

TEST_CASE("Robinson map on the graph of the normal cone")
{
  Rng rng(22);
  const std::vector<ConvexSet> sets = {ConvexSet::soc(3), ConvexSet::unit_cube(3), ConvexSet::orthant(3),
                                       ConvexSet::porder(3, 3.0)};
  for (const ConvexSet& s : sets)
  {
    const SmoothFn phi = random_smooth(rng, 3);
    const NormalMap map = NormalMap::robinson(phi, s);
    for (int trial = 0; trial < 40; ++trial)
    {
      const Vec x = project(s, 2.0 * rng.normal_vec(3));
      ConeRep nc;
      try
      {
        nc = normal_cone(s, x);
      }
      catch (const Error&)
      {
        continue;  // cone apex with a curved boundary
      }
      Vec u = Vec::Zero(3);
      for (const Vec& gen : nc.generators)
      {
        u += rng.uniform(0.0, 1.5) * gen;
      }
      for (const Vec& l : nc.lineality_basis)
      {
        u += rng.normal() * l;
      }
      CHECK((map.eval(x + u) - phi.eval(x) - u).norm() < 1e-9);
    }
  }
}

TEST_CASE("generalized equation validation and canonical point")
{
  const GeneralizedEquation id(SmoothFn::identity(1), ConvexSet::orthant(1), GeForm::Normal, v({0}), v({0}));
  CHECK(canonical_point(id).norm() == 0.0);
  const GeneralizedEquation neg(SmoothFn::linear(m1(-1)), ConvexSet::orthant(1), GeForm::Normal, v({0}), v({0}));
  CHECK(canonical_point(neg).norm() == 0.0);
  const NormalMap nm = neg.normal_map();
  for (const double z : {-1.5, -0.2, 0.3, 2.0})
  {
    CHECK(nm.eval(v({z}))(0) == doctest::Approx(z - 2 * std::max(z, 0.0)));
  }

  // y0 - phi(x0) = -1 is normal to R_+ at 0; +1 is not.
  CHECK_NOTHROW(GeneralizedEquation(SmoothFn::identity(1), ConvexSet::orthant(1), GeForm::Normal, v({0}), v({-1})));
  CHECK_THROWS_AS(GeneralizedEquation(SmoothFn::identity(1), ConvexSet::orthant(1), GeForm::Normal, v({0}), v({1})),
                  Error);
  CHECK_THROWS_AS(GeneralizedEquation(SmoothFn::identity(1), ConvexSet::orthant(1), GeForm::Normal, v({-1}), v({-1})),
                  Error);

  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial)
  {
    const Eigen::Index n = 2 + trial % 3;
    const SmoothFn phi = SmoothFn::affine(Mat::Random(n, n), rng.normal_vec(n));
    const ConvexSet s = trial % 2 ? ConvexSet::soc(n) : ConvexSet::unit_cube(n);
    Vec x0 = trial % 2 ? Vec(Vec::Unit(n, n - 1) * 2.0 + 0.3 * rng.in_ball(n, 1.0))
                       : Vec(Vec::Constant(n, 0.5) + 0.3 * rng.in_ball(n, 1.0));
    if (trial % 2)
    {
      x0(n - 1) = 2.0;
      x0.head(n - 1) *= 0.5;
    }
    REQUIRE(contains(s, x0));
    const GeneralizedEquation ge(phi, s, GeForm::Normal, x0, phi.eval(x0));
    const Vec z0 = canonical_point(ge);
    CHECK((z0 - x0).norm() < 1e-12);
  }

  // Inverse form: x0 in N_S(w) with w = y0 - phi(x0) on the boundary.
  const ConvexSet soc = ConvexSet::soc(3);
  const Vec w = v({0.6, 0.8, 1.0});
  const Vec x0 = 0.7 * v({0.6, 0.8, -1.0});
  const SmoothFn phi = SmoothFn::affine(Mat::Random(3, 3), v({0.1, 0.2, 0.3}));
  const GeneralizedEquation inv(phi, soc, GeForm::Inverse, x0, Vec(w + phi.eval(x0)));
  const Vec z0 = canonical_point(inv);
  CHECK((inv.x_of_z(z0) - x0).norm() < 1e-10);
  CHECK((inv.normal_map().eval(z0) - inv.y0()).norm() < 1e-10);
  CHECK_THROWS_AS(GeneralizedEquation(phi, soc, GeForm::Inverse, Vec(-x0), Vec(w + phi.eval(-x0))), Error);
}

TEST_CASE("directional derivative examples")
{
  for (const double a : {-2.0, 0.5, 3.0})
  {
    const NormalMap map = NormalMap::matrix(m1(a), m1(1), ConvexSet::orthant(1));
    CHECK(directional_derivative(map, v({0}), v({-1}))(0) == doctest::Approx(-a));
    CHECK(directional_derivative(map, v({0}), v({1}))(0) == doctest::Approx(1.0));
  }
  // N(-t) = -a t, so the slope on z < 0 is a and N'(0; -1) = -a.
  const NormalMap map = NormalMap::matrix(m1(2.0), m1(1), ConvexSet::orthant(1));
  CHECK_THROWS_AS(directional_derivative(map, v({0}), v({2})), Error);

  // SOC boundary: compare with a small-step one-sided quotient.
  Rng rng(41);
  const ConvexSet soc = ConvexSet::soc(3);
  const SmoothFn phi = random_smooth(rng, 3);
  const NormalMap rob = NormalMap::robinson(phi, soc);
  for (int trial = 0; trial < 20; ++trial)
  {
    const Vec s = rng.unit_vec(2);
    const Vec z = v({s(0), s(1), 1.0}) * rng.uniform(0.5, 2.0);
    const Vec d = rng.unit_vec(3);
    const Vec dd = directional_derivative(rob, z, d);
    const double h = 1e-7;
    const Vec fd = (rob.eval(z + h * d) - rob.eval(z)) / h;
    CHECK((dd - fd).norm() < 1e-5);
  }
}

TEST_CASE("exact polyhedral derivative agrees with extrapolation at generic points")
{
  Rng rng(42);
  const ConvexSet cube = ConvexSet::unit_cube(3);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial)
  {
    const NormalMap map = NormalMap::function(random_smooth(rng, 3), random_smooth(rng, 3), cube);
    const Vec z = rng.uniform_vec(3, -1.0, 2.0);
    const Vec d = rng.unit_vec(3);
    const auto exact = exact_directional_derivative(map, z, d);
    REQUIRE(exact.has_value());
    try
    {
      const Vec approx = richardson_directional_derivative(map.as_map(), z, d);
      CHECK((*exact - approx).norm() < 1e-5);
      ++compared;
    }
    catch (const Error& e)
    {
      CHECK(e.code() == ErrorCode::NonConvergent);
    }
  }
  CHECK(compared >= 50);
  CHECK_FALSE(exact_directional_derivative(NormalMap::matrix(Mat::Identity(3, 3), Mat::Identity(3, 3),
                                                             ConvexSet::soc(3)),
                                           v({1, 0, 1}), v({1, 0, 0}))
                .has_value());
}

TEST_CASE("Richardson extrapolation flags a nearby kink")
{
  const NormalMap map = NormalMap::matrix(m1(-1), m1(1), ConvexSet::orthant(1));
  CHECK_THROWS_AS(richardson_directional_derivative(map.as_map(), v({-3e-4}), v({1})), Error);
}

TEST_CASE("discreteness examples")
{
  const NormalMap fold = NormalMap::matrix(m1(1), m1(-1), ConvexSet::orthant(1));  // z - 2 Pi(z)
  const DiscretenessResult a = discreteness_check(fold.as_map(), v({0}), 1.0);
  CHECK(a.isolated);

  const NormalMap flat = NormalMap::matrix(m1(0), m1(1), ConvexSet::orthant(1));
  const DiscretenessResult b = discreteness_check(flat.as_map(), v({0}), 1.0);
  CHECK_FALSE(b.isolated);
  REQUIRE(b.nearest_other.has_value());
  CHECK((*b.nearest_other)(0) < 0.0);
  CHECK(std::abs(flat.eval(*b.nearest_other)(0)) < 1e-10);

  // B * Ahat with Ahat + Ahat^T positive definite is injective, so every point is isolated.
  Rng rng(51);
  for (int trial = 0; trial < 5; ++trial)
  {
    const Mat ahat = testing_helpers::positive_definite_part(rng, 3);
    const Mat b = Mat::Identity(3, 3) + 0.3 * Mat::Random(3, 3);
    const NormalMap map = NormalMap::matrix(b * ahat, b, ConvexSet::soc(3));
    const Vec z0 = 0.3 * rng.normal_vec(3);
    const DiscretenessResult r = discreteness_check(map.as_map(), z0, 0.5, Exec::Parallel, trial);
    CHECK(r.isolated);
    CHECK(r.roots_found == 1);
    const DiscretenessResult s = discreteness_check(map.as_map(), z0, 0.5, Exec::Serial, trial);
    CHECK(s.roots_found == r.roots_found);
  }
  CHECK_THROWS_AS(discreteness_check(fold.as_map(), v({0}), 0.0), Error);
}

TEST_CASE("strict stationarity certificate")
{
  Rng rng(61);
  for (int trial = 0; trial < 5; ++trial)
  {
    const SmoothFn phi = random_smooth(rng, 3);
    const Vec x0 = rng.normal_vec(3);
    const Map psi = linearization_remainder(phi, x0);
    const StationarityCertificate cert = strict_stationarity_certificate(psi, x0, phi.jacobian_lipschitz());
    CHECK(cert.passed);
    CHECK(cert.ratios.size() == 3);
  }
  // A linear map is not strictly stationary.
  const Map lin = as_map(SmoothFn::linear(Mat::Identity(2, 2)));
  CHECK_FALSE(strict_stationarity_certificate(lin, Vec::Zero(2), 1.0).passed);
  // Radial cubic term: |d| d with derivative Lipschitz constant 2|s|.
  const Perturbation rad = Perturbation::radial(v({0.2, -0.1}), 0.7);
  const Map g{2, [rad](const Vec& x) { return rad.eval(x); }};
  CHECK(strict_stationarity_certificate(g, v({0.2, -0.1}), rad.derivative_lipschitz()).passed);
}
