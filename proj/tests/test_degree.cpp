#include "doctest.h"

#include "helpers.hpp"
#include "nmlab/degree.hpp"
#include "nmlab/normal_map.hpp"

#include <cmath>

using namespace nmlab;
using testing_helpers::m1;
using testing_helpers::v;

namespace
{

Map linear(const Mat& a)
{
  return Map{a.rows(), [a](const Vec& x) { return Vec(a * x); }};
}

const Map kSquare{2, [](const Vec& x) { return v({x(0) * x(0) - x(1) * x(1), 2 * x(0) * x(1)}); }};

DegreeOptions with(DegreeMethod m, std::uint64_t seed = 0)
{
  DegreeOptions o;
  o.method = m;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("degree of nonsingular linear maps is the sign of the determinant")
{
  Rng rng(101);
  for (int trial = 0; trial < 24; ++trial)
  {
    const Eigen::Index n = 1 + trial % 4;
    Mat a(n, n);
    for (Eigen::Index i = 0; i < n * n; ++i)
    {
      a.data()[i] = rng.normal();
    }
    if (std::abs(a.determinant()) < 1e-2)
    {
      continue;
    }
    const Domain box = Domain::box(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0));
    const int expect = a.determinant() > 0 ? 1 : -1;
    const DegreeResult r = degree(linear(a), box, Vec::Zero(n), with(DegreeMethod::RegularSum, trial));
    CHECK(r.value == expect);
    REQUIRE(r.preimages.size() == 1);
    CHECK(r.preimages[0].sign == expect);
    CHECK((a * r.preimages[0].x - r.perturbed_target).norm() < 1e-10);
    CHECK(r.boundary_margin > 0.0);
    CHECK((r.perturbed_target).norm() <= std::min(1e-6, r.boundary_margin / 10) * (1 + 1e-12));
    CHECK(degree(linear(a), box, Vec::Zero(n)).value == expect);
  }
}

TEST_CASE("complex squaring has index 2")
{
  const IndexResult ind = index(kSquare, v({0, 0}));
  CHECK(ind.value == 2);
  CHECK(ind.translation_ok);
  const DegreeResult rs = degree(kSquare, Domain::ball(v({0, 0}), 1.0), v({0, 0}), with(DegreeMethod::RegularSum));
  CHECK(rs.value == 2);
  CHECK(rs.preimages.size() == 2);
}

TEST_CASE("folded orthant map: four preimages with alternating signs")
{
  const NormalMap n = NormalMap::matrix(-Mat::Identity(2, 2), Mat::Identity(2, 2), ConvexSet::orthant(2));
  const Map f = n.as_map();
  const Domain box = Domain::box(v({-1, -1}), v({1, 1}));
  const Vec y = v({0.1, 0.1}) * 0.5;
  const DegreeResult r = degree(f, box, y, with(DegreeMethod::RegularSum));
  CHECK(r.value == 0);
  REQUIRE(r.preimages.size() == 4);
  // Oracle: on each closed orthant region the map is diag(s1, s2) z, so the
  // preimage with sign pattern (s1, s2) is (s1 y1, s2 y2) with Jacobian sign s1 s2.
  for (const Preimage& p : r.preimages)
  {
    const int s1 = p.x(0) > 0 ? 1 : -1, s2 = p.x(1) > 0 ? 1 : -1;
    CHECK(p.sign == s1 * s2);
    CHECK(std::abs(std::abs(p.x(0)) - r.perturbed_target(0)) < 1e-9);
  }
  CHECK(degree(f, box, y, with(DegreeMethod::Winding2D)).value == 0);
}

TEST_CASE("methods agree on shared cases")
{
  Rng rng(102);
  int cases = 0;
  // 2-D: RegularSum vs Winding2D.
  for (int trial = 0; trial < 12; ++trial)
  {
    Map f;
    if (trial % 3 == 0)
    {
      f = linear(Mat::Random(2, 2));
    }
    else if (trial % 3 == 1)
    {
      f = kSquare;
    }
    else
    {
      const NormalMap nm = NormalMap::matrix(Mat::Random(2, 2), Mat::Random(2, 2), ConvexSet::orthant(2));
      f = nm.as_map();
    }
    const Domain dom = trial % 2 ? Domain::ball(rng.normal_vec(2) * 0.2, 1.0)
                                 : Domain::box(v({-1, -0.8}), v({0.9, 1.1}));
    const Vec y = 0.3 * rng.normal_vec(2);
    const DegreeResult a = degree(f, dom, y, with(DegreeMethod::RegularSum, trial));
    const DegreeResult b = degree(f, dom, y, with(DegreeMethod::Winding2D, trial));
    CHECK(a.value == b.value);
    ++cases;
  }
  // 1-D: RegularSum vs SignChange1D.
  for (int trial = 0; trial < 8; ++trial)
  {
    const double c = rng.uniform(-0.5, 0.5);
    const Map f{1, [c](const Vec& x) { return Vec(x.array().cube() - 0.5 * x.array() + c); }};
    const Domain dom = Domain::box(v({rng.uniform(-1.5, -0.6)}), v({rng.uniform(0.6, 1.5)}));
    const DegreeResult a = degree(f, dom, v({0}), with(DegreeMethod::RegularSum, trial));
    const DegreeResult b = degree(f, dom, v({0}), with(DegreeMethod::SignChange1D));
    CHECK(a.value == b.value);
    ++cases;
  }
  CHECK(cases == 20);
}

TEST_CASE("degree is locally constant in the target")
{
  Rng rng(103);
  const Mat a = Mat::Random(3, 3);
  const NormalMap nm = NormalMap::matrix(a, Mat::Identity(3, 3) + 0.2 * Mat::Random(3, 3), ConvexSet::soc(3));
  const Map f = nm.as_map();
  const Domain dom = Domain::ball(Vec::Zero(3), 1.0);
  const Vec y = v({0.05, -0.02, 0.03});
  const double margin = boundary_margin(f, dom, y, 10000, Exec::Parallel, 1);
  REQUIRE(margin > 0.1);
  const int base = degree(f, dom, y).value;
  for (int k = 0; k < 10; ++k)
  {
    const Vec yk = y + rng.in_ball(3, margin / 4);
    CHECK(degree(f, dom, yk, with(DegreeMethod::RegularSum, k)).value == base);
  }
}

TEST_CASE("index examples")
{
  const Map cube{1, [](const Vec& x) { return Vec(x.array().cube()); }};
  CHECK(index(cube, v({0})).value == 1);

  const NormalMap fold = NormalMap::matrix(m1(1), m1(-1), ConvexSet::orthant(1));
  const IndexResult fi = index(fold.as_map(), v({0}));
  CHECK(fi.value == 0);
  // 1-D oracle: N(-e) = -e and N(e) = -e have the same sign.
  CHECK(fold.eval(v({-0.01}))(0) < 0);
  CHECK(fold.eval(v({0.01}))(0) < 0);

  const NormalMap ident = NormalMap::matrix(Mat::Identity(3, 3), Mat::Identity(3, 3), ConvexSet::soc(3));
  const IndexResult ii = index(ident.as_map(), v({0, 0, 0}));
  CHECK(ii.value == 1);
  CHECK(ii.translation_ok);
  CHECK(ii.degree.method == DegreeMethod::RegularSum);
  CHECK(ii.values.size() >= 2);

  const NormalMap flat = NormalMap::matrix(m1(0), m1(1), ConvexSet::orthant(1));
  CHECK_THROWS_AS(index(flat.as_map(), v({0})), Error);
  try
  {
    index(flat.as_map(), v({0}));
  }
  catch (const Error& e)
  {
    CHECK(e.code() == ErrorCode::NotIsolated);
  }
}

TEST_CASE("translation identity and known homeomorphisms")
{
  Rng rng(104);
  for (int trial = 0; trial < 6; ++trial)
  {
    const Eigen::Index n = 2 + trial % 2;
    const Mat ahat = testing_helpers::positive_definite_part(rng, n);
    const Mat b = Mat::Identity(n, n) + 0.3 * Mat::Random(n, n);
    // B * Ahat (z - Pi) + B Pi = B (Ahat u + x) is injective, hence a homeomorphism.
    const NormalMap nm = NormalMap::matrix(b * ahat, b, trial % 2 ? ConvexSet::soc(n) : ConvexSet::orthant(n));
    IndexOptions opts;
    opts.degree.seed = static_cast<std::uint64_t>(trial);
    const IndexResult r = index(nm.as_map(), Vec::Zero(n), opts);
    CHECK(std::abs(r.value) == 1);
    CHECK(r.value == (b.determinant() > 0 ? 1 : -1));
    CHECK(r.translation_checked);
    CHECK(r.translation_ok);
  }
}

TEST_CASE("interior linearity: index equals the sign of the piece determinant")
{
  Rng rng(105);
  const ConvexSet cube = ConvexSet::unit_cube(3);
  for (int trial = 0; trial < 4; ++trial)
  {
    const Mat a = Mat::Random(3, 3), b = Mat::Random(3, 3);
    if (std::abs(b.determinant()) < 0.05)
    {
      continue;
    }
    const Vec x0 = rng.uniform_vec(3, 0.3, 0.7);
    const NormalMap nm = NormalMap::matrix(a, b, cube);
    // P = I in the interior of the cube, so A - AP + BP = B.
    CHECK(index(nm.as_map(), x0).value == (b.determinant() > 0 ? 1 : -1));
  }
}

TEST_CASE("degree errors")
{
  const Map id = linear(Mat::Identity(2, 2));
  CHECK_THROWS_AS(degree(id, Domain::box(v({-1, -1}), v({1, 1})), v({1, 0})), Error);
  try
  {
    degree(id, Domain::box(v({-1, -1}), v({1, 1})), v({1, 0}), with(DegreeMethod::RegularSum));
  }
  catch (const Error& e)
  {
    CHECK(e.code() == ErrorCode::BoundaryProximity);
  }

  const Map tiny = linear(m1(2e-9));
  try
  {
    degree(tiny, Domain::box(v({-1}), v({1})), v({0}), with(DegreeMethod::RegularSum));
    FAIL("expected DegenerateJacobian");
  }
  catch (const Error& e)
  {
    CHECK(e.code() == ErrorCode::DegenerateJacobian);
  }

  const Map wiggle{1, [](const Vec& x) { return Vec(x.array().unaryExpr([](double t) { return std::sin(300 * t); })); }};
  try
  {
    degree(wiggle, Domain::box(v({-1}), v({1.003})), v({0.1}), with(DegreeMethod::RegularSum));
    FAIL("expected PreimageSearchIncomplete");
  }
  catch (const Error& e)
  {
    CHECK(e.code() == ErrorCode::PreimageSearchIncomplete);
  }
  CHECK_THROWS_AS(degree(id, Domain::box(v({-1, -1}), v({1, 1})), v({0, 0}), with(DegreeMethod::SignChange1D)),
                  Error);
}

TEST_CASE("serial and parallel degree certificates coincide")
{
  const NormalMap nm = NormalMap::matrix(Mat::Random(3, 3), Mat::Random(3, 3), ConvexSet::orthant(3));
  const Domain dom = Domain::box(Vec::Constant(3, -1.0), Vec::Constant(3, 1.0));
  const Vec y = v({0.1, -0.2, 0.05});
  DegreeOptions s = with(DegreeMethod::RegularSum, 9), p = s;
  s.exec = Exec::Serial;
  const DegreeResult a = degree(nm.as_map(), dom, y, s), b = degree(nm.as_map(), dom, y, p);
  CHECK(a.value == b.value);
  CHECK(a.boundary_margin == b.boundary_margin);
  REQUIRE(a.preimages.size() == b.preimages.size());
  for (std::size_t i = 0; i < a.preimages.size(); ++i)
  {
    CHECK(a.preimages[i].x == b.preimages[i].x);
  }
}

TEST_CASE("index is preserved by strictly stationary perturbations")
{
  const Map id2 = linear(Mat::Identity(2, 2));
  const HomotopyCheck a = homotopy_index_check(id2, Perturbation::radial(v({0, 0}), 1.0), v({0, 0}));
  CHECK(a.precondition_ok);
  CHECK(a.equal);
  CHECK(a.index_map == 1);
  CHECK(a.index_perturbed == 1);

  const NormalMap two = NormalMap::matrix(m1(2), m1(1), ConvexSet::orthant(1));
  SmoothFn q = SmoothFn::linear(m1(0));
  q.quad.push_back(m1(0.1));
  const HomotopyCheck b = homotopy_index_check(two.as_map(), Perturbation::smooth(q), v({0}));
  CHECK(b.precondition_ok);
  CHECK(b.equal);
  CHECK(b.index_map == 1);
  CHECK(b.certificate.passed);

  const NormalMap fold = NormalMap::matrix(m1(1), m1(-1), ConvexSet::orthant(1));
  const HomotopyCheck c = homotopy_index_check(fold.as_map(), Perturbation::smooth(q), v({0}));
  CHECK_FALSE(c.precondition_ok);
  CHECK(c.aubin.empty_preimage);

  // A perturbation with a nonzero linear part is rejected by the certificate.
  const HomotopyCheck d = homotopy_index_check(two.as_map(), Perturbation::smooth(SmoothFn::linear(m1(0.5))), v({0}));
  CHECK_FALSE(d.precondition_ok);
  CHECK_FALSE(d.certificate.passed);
}
