#include "nmlab/battery.hpp"

#include "nmlab/stability.hpp"

#include <cstdio>

namespace nmlab
{

namespace
{

std::string make_id(const char* prefix, int i)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%03d", prefix, i);
  return buf;
}

Mat gaussian(Rng& rng, Eigen::Index n, double scale = 1.0)
{
  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      a(i, j) = scale * rng.normal();
    }
  }
  return a;
}

Vec boundary_base_point(Rng& rng, const ConvexSet& k)
{
  for (;;)
  {
    const Vec x = random_base_point(rng, k);
    if (!normal_cone(k, x).is_trivial())
    {
      return x;
    }
  }
}

}  // namespace

Mat random_positive_part(Rng& rng, Eigen::Index n, double floor, double scale)
{
  Mat a = gaussian(rng, n, scale);
  const Mat sym = 0.5 * (a + a.transpose());
  const double lo = Eigen::SelfAdjointEigenSolver<Mat>(sym).eigenvalues()(0);
  a.diagonal().array() += floor - std::min(lo, 0.0);
  return a;
}

Mat random_well_conditioned(Rng& rng, Eigen::Index n)
{
  for (;;)
  {
    const Mat b = Mat::Identity(n, n) + 0.3 * gaussian(rng, n);
    const Vec sv = b.jacobiSvd().singularValues();
    if (sv(n - 1) > 0.0 && sv(0) / sv(n - 1) <= 10.0)
    {
      return b;
    }
  }
}

Vec random_base_point(Rng& rng, const ConvexSet& k)
{
  const Eigen::Index n = k.dim();
  if (k.as<Orthant>())
  {
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
      x(i) = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.2, 1.0);
    }
    if (rng.uniform() < 0.75)
    {
      x(rng.uniform_int(0, static_cast<int>(n) - 1)) = 0.0;
    }
    return x;
  }
  if (const auto* p = k.as<Polyhedron>())
  {
    const Eigen::Index m = p->a.rows();
    const bool is_box = m == 2 * n && p->a.topRows(n).isIdentity() && (-p->a.bottomRows(n)).isIdentity();
    if (is_box)
    {
      const Vec lo = -p->b.tail(n), hi = p->b.head(n);
      Vec x(n);
      for (Eigen::Index i = 0; i < n; ++i)
      {
        const double u = rng.uniform();
        x(i) = u < 0.25 ? lo(i) : (u < 0.5 ? hi(i) : lo(i) + (hi(i) - lo(i)) * rng.uniform(0.2, 0.8));
      }
      return x;
    }
    return project(k, p->feasible_point + 2.0 * rng.normal_vec(n));
  }
  if (k.as<SecondOrderCone>() && n >= 2)
  {
    const double u = rng.uniform();
    if (u < 1.0 / 3.0)
    {
      return Vec::Zero(n);
    }
    const Vec s = rng.unit_vec(n - 1) * rng.uniform(0.3, 1.0);
    Vec x(n);
    x.head(n - 1) = s;
    x(n - 1) = s.norm() + (u < 2.0 / 3.0 ? 0.0 : rng.uniform(0.2, 1.0));
    return x;
  }
  return project(k, rng.normal_vec(n));
}

Vec random_normal(Rng& rng, const ConvexSet& k, const Vec& x, double scale)
{
  const Eigen::Index n = k.dim();
  if (k.as<SecondOrderCone>() && n >= 2)
  {
    const Vec s = x.head(n - 1);
    const double t = x(n - 1);
    if (x.norm() < 1e-14)
    {
      // N_K(0) = K polar = -K
      return -scale * project(k, rng.normal_vec(n));
    }
    if (s.norm() < t - 1e-12)
    {
      return Vec::Zero(n);
    }
    Vec u(n);
    u.head(n - 1) = s / s.norm();
    u(n - 1) = -1.0;
    return rng.uniform(0.0, scale) * u;
  }
  const ConeRep nc = normal_cone(k, x);
  Vec u = Vec::Zero(n);
  for (const Vec& g : nc.generators)
  {
    if (rng.uniform() < 0.7)
    {
      u += rng.uniform(0.0, scale) * g;
    }
  }
  for (const Vec& l : nc.lineality_basis)
  {
    u += scale * rng.normal() * l;
  }
  return u;
}

std::vector<ConvexSet> matrix_battery_sets()
{
  return {ConvexSet::orthant(2), ConvexSet::orthant(3), ConvexSet::soc(3), ConvexSet::unit_cube(3)};
}

std::vector<MatrixInstance> injective_matrix_battery(std::uint64_t seed, int count)
{
  const std::vector<ConvexSet> sets = matrix_battery_sets();
  const Rng root(seed, 101);
  std::vector<MatrixInstance> out;
  for (int i = 0; i < count; ++i)
  {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    const ConvexSet& k = sets[static_cast<std::size_t>(i) % sets.size()];
    const Eigen::Index n = k.dim();
    const Mat ahat = random_positive_part(rng, n, 1.0, 0.5);
    const Mat b = random_well_conditioned(rng, n);
    out.push_back({make_id("inj", i), NormalMap::matrix(b * ahat, b, k), random_base_point(rng, k)});
  }
  return out;
}

std::vector<MatrixInstance> constructed_failures()
{
  std::vector<MatrixInstance> out;
  const Mat i2 = Mat::Identity(2, 2), i3 = Mat::Identity(3, 3);
  out.push_back({"fold-orthant2", NormalMap::matrix(-i2, i2, ConvexSet::orthant(2)), Vec::Zero(2)});
  out.push_back({"fold-orthant3", NormalMap::matrix(-i3, i3, ConvexSet::orthant(3)), Vec::Zero(3)});
  Mat zero_block = i2;
  zero_block(0, 0) = 0.0;
  out.push_back({"zero-block-orthant2", NormalMap::matrix(zero_block, i2, ConvexSet::orthant(2)), Vec::Zero(2)});
  out.push_back({"fold-cube-vertex", NormalMap::matrix(-i3, i3, ConvexSet::unit_cube(3)), Vec::Zero(3)});
  out.push_back({"fold-soc-apex", NormalMap::matrix(-i3, i3, ConvexSet::soc(3)), Vec::Zero(3)});
  return out;
}

std::vector<MatrixInstance> ant_violating_battery(std::uint64_t seed, int count)
{
  const std::vector<ConvexSet> sets = {ConvexSet::orthant(2), ConvexSet::orthant(3), ConvexSet::unit_cube(3)};
  const Rng root(seed, 102);
  std::vector<MatrixInstance> out;
  for (std::uint64_t draw = 0; static_cast<int>(out.size()) < count; ++draw)
  {
    Rng rng = root.split(draw);
    const ConvexSet& k = sets[out.size() % sets.size()];
    const Eigen::Index n = k.dim();
    const Vec x0 = boundary_base_point(rng, k);
    const Mat a = gaussian(rng, n);
    if (ant_check(a, k, x0).disjoint)
    {
      continue;
    }
    out.push_back({make_id("ant-violating", static_cast<int>(out.size())),
                   NormalMap::matrix(a, Mat::Identity(n, n), k), x0});
  }
  return out;
}

std::vector<MatrixInstance> ant_satisfying_battery(std::uint64_t seed, int count)
{
  const std::vector<ConvexSet> sets = {ConvexSet::orthant(2), ConvexSet::orthant(3), ConvexSet::unit_cube(3)};
  const Rng root(seed, 103);
  std::vector<MatrixInstance> out;
  for (int i = 0; i < count; ++i)
  {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    const ConvexSet& k = sets[static_cast<std::size_t>(i) % sets.size()];
    const Eigen::Index n = k.dim();
    const Vec x0 = boundary_base_point(rng, k);
    out.push_back({make_id("ant-satisfying", i),
                   NormalMap::matrix(random_positive_part(rng, n, 1.0, 0.5), Mat::Identity(n, n), k), x0});
  }
  return out;
}

std::vector<GeneralizedEquation> monotone_battery(std::uint64_t seed, int count, int dim)
{
  std::vector<ConvexSet> sets;
  if (dim > 0)
  {
    sets.push_back(ConvexSet::orthant(dim));
    if (dim >= 2)
    {
      sets.push_back(ConvexSet::soc(dim));
    }
  }
  else
  {
    sets = {ConvexSet::orthant(2), ConvexSet::orthant(3), ConvexSet::soc(3)};
  }
  const Rng root(seed, 104);
  std::vector<GeneralizedEquation> out;
  for (int i = 0; i < count; ++i)
  {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    const ConvexSet& s = sets[static_cast<std::size_t>(i) % sets.size()];
    const Eigen::Index n = s.dim();
    const SmoothFn phi = SmoothFn::affine(random_positive_part(rng, n, 1.0, 0.5), 0.5 * rng.normal_vec(n));
    const Vec x0 = random_base_point(rng, s);
    const Vec y0 = phi.eval(x0) + random_normal(rng, s, x0);
    out.emplace_back(phi, s, GeForm::Normal, x0, y0, make_id("mono", i));
  }
  return out;
}

std::vector<GeneralizedEquation> hand_instances()
{
  const Vec zero = Vec::Zero(1);
  return {GeneralizedEquation(SmoothFn::identity(1), ConvexSet::orthant(1), GeForm::Normal, zero, zero, "hand-identity"),
          GeneralizedEquation(SmoothFn::linear(-Mat::Identity(1, 1)), ConvexSet::orthant(1), GeForm::Normal, zero,
                              zero, "hand-negative")};
}

SmoothFn centered_quadratic(const std::vector<Mat>& q, const Vec& x0)
{
  const Eigen::Index n = x0.size();
  Mat m(n, n);
  Vec c(n);
  for (Eigen::Index k = 0; k < n; ++k)
  {
    const Mat& qk = q[static_cast<std::size_t>(k)];
    m.row(k) = -((qk + qk.transpose()) * x0).transpose();
    c(k) = x0.dot(qk * x0);
  }
  SmoothFn f = SmoothFn::affine(m, c);
  f.quad = q;
  f.validate();
  return f;
}

std::vector<HomotopyInstance> homotopy_battery(std::uint64_t seed, int count)
{
  const Rng root(seed, 105);
  std::vector<HomotopyInstance> out;
  for (int i = 0; i < count; ++i)
  {
    Rng rng = root.split(static_cast<std::uint64_t>(i));
    const int kind = i % 4;
    const ConvexSet k = kind == 0 ? ConvexSet::soc(3)
                                  : (kind == 1 ? ConvexSet::orthant(2)
                                               : (kind == 2 ? ConvexSet::unit_cube(3) : ConvexSet::orthant(1)));
    const Eigen::Index n = k.dim();
    Mat b = random_well_conditioned(rng, n);
    if (kind == 2)
    {
      b.row(0) *= -1.0;  // orientation-reversing, index -1
    }
    const NormalMap nm = NormalMap::matrix(b * random_positive_part(rng, n, 1.0, 0.5), b, k);
    const Vec x0 = random_base_point(rng, k);
    Perturbation g;
    if (i % 2 == 0)
    {
      g = Perturbation::radial(x0, rng.uniform(0.5, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0));
    }
    else
    {
      std::vector<Mat> q;
      for (Eigen::Index j = 0; j < n; ++j)
      {
        q.push_back(gaussian(rng, n, 0.5));
      }
      g = Perturbation::smooth(centered_quadratic(q, x0));
    }
    out.push_back({make_id("homotopy", i), nm.as_map(), g, x0});
  }
  return out;
}

}  // namespace nmlab
