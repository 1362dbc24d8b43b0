#include "nmlab/cone.hpp"

#include "nmlab/lp.hpp"

#include <algorithm>
#include <cmath>

namespace nmlab
{

namespace
{

Mat columns(const std::vector<Vec>& vs, Eigen::Index ambient)
{
  Mat m(ambient, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
  {
    m.col(static_cast<Eigen::Index>(i)) = vs[i];
  }
  return m;
}

/// Advances `idx` (sorted, values < k) to the next combination; false when exhausted.
bool next_combination(std::vector<int>& idx, int k)
{
  const int s = static_cast<int>(idx.size());
  for (int i = s - 1; i >= 0; --i)
  {
    if (idx[static_cast<std::size_t>(i)] < k - s + i)
    {
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < s; ++j)
      {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

void push_unique(std::vector<Vec>& out, const Vec& v)
{
  for (const Vec& w : out)
  {
    if ((w - v).norm() <= 1e-9)
    {
      return;
    }
  }
  out.push_back(v);
}

}  // namespace

ConeRep ConeRep::make(Eigen::Index ambient, std::vector<Vec> generators, std::vector<Vec> lineality)
{
  ConeRep c;
  c.ambient = ambient;
  if (!lineality.empty())
  {
    const Mat basis = range_space(columns(lineality, ambient));
    for (Eigen::Index j = 0; j < basis.cols(); ++j)
    {
      c.lineality_basis.push_back(basis.col(j));
    }
  }
  const Mat lin = c.lineality_matrix();
  for (Vec g : generators)
  {
    require_dim(g, ambient, "ConeRep generator");
    if (lin.cols() > 0)
    {
      g -= lin * (lin.transpose() * g);
    }
    const double norm = g.norm();
    if (norm <= 1e-12)
    {
      continue;
    }
    push_unique(c.generators, g / norm);
  }
  c.dim = static_cast<int>(numerical_rank(c.span_matrix()));
  return c;
}

Mat ConeRep::generator_matrix() const { return columns(generators, ambient); }

Mat ConeRep::lineality_matrix() const { return columns(lineality_basis, ambient); }

Mat ConeRep::span_matrix() const
{
  Mat m(ambient, static_cast<Eigen::Index>(generators.size() + lineality_basis.size()));
  m << generator_matrix(), lineality_matrix();
  return m;
}

ConeRep halfspace_cone(Eigen::Index ambient, const Mat& rows_in, const Mat& eq_rows)
{
  // Deduplicate normalized inequality rows.
  std::vector<Vec> rows;
  for (Eigen::Index i = 0; i < rows_in.rows(); ++i)
  {
    const Vec r = rows_in.row(i).transpose();
    const double norm = r.norm();
    if (norm > 1e-12)
    {
      push_unique(rows, r / norm);
    }
  }
  const Mat eq = eq_rows.rows() > 0 ? eq_rows : Mat(0, ambient);

  // Coordinates on null(eq).
  const Mat ne = null_space(eq);
  const Eigen::Index k = ne.cols();
  Mat g(static_cast<Eigen::Index>(rows.size()), ambient);
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    g.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  const Mat gy = g * ne;  // rows x k

  std::vector<Vec> lineality;
  const Mat lin_y = null_space(gy.rows() > 0 ? gy : Mat(0, k));
  for (Eigen::Index j = 0; j < lin_y.cols(); ++j)
  {
    lineality.push_back(ne * lin_y.col(j));
  }

  std::vector<Vec> gens;
  if (gy.rows() > 0 && k > 0)
  {
    const Mat rbasis = range_space(gy.transpose());  // k x r
    const Eigen::Index r = rbasis.cols();
    const Mat h = gy * rbasis;                       // rows x r, pointed cone {h w <= 0}
    const double tol = 1e-10;
    auto consider = [&](const Vec& w) {
      for (const double sgn : {1.0, -1.0})
      {
        const Vec ws = sgn * w;
        if ((h * ws).maxCoeff() <= tol)
        {
          gens.push_back(ne * (rbasis * ws));
        }
      }
    };
    if (r == 1)
    {
      consider(Vec::Ones(1));
    }
    else if (r > 1)
    {
      const int m = static_cast<int>(h.rows());
      const int s = static_cast<int>(r - 1);
      if (m >= s)
      {
        std::vector<int> idx(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i)
        {
          idx[static_cast<std::size_t>(i)] = i;
        }
        do
        {
          Mat sub(s, r);
          for (int i = 0; i < s; ++i)
          {
            sub.row(i) = h.row(idx[static_cast<std::size_t>(i)]);
          }
          const Mat nul = null_space(sub);
          if (nul.cols() == 1)
          {
            consider(nul.col(0));
          }
        } while (next_combination(idx, m));
      }
    }
  }
  return ConeRep::make(ambient, std::move(gens), std::move(lineality));
}

ConeRep polar(const ConeRep& cone)
{
  Mat rows(static_cast<Eigen::Index>(cone.generators.size()), cone.ambient);
  for (std::size_t i = 0; i < cone.generators.size(); ++i)
  {
    rows.row(static_cast<Eigen::Index>(i)) = cone.generators[i].transpose();
  }
  return halfspace_cone(cone.ambient, rows, cone.lineality_matrix().transpose());
}

bool in_span(const ConeRep& cone, const Vec& u, double tol)
{
  require_dim(u, cone.ambient, "in_span");
  const Mat basis = range_space(cone.span_matrix());
  const Vec r = u - basis * (basis.transpose() * u);
  return r.norm() <= tol * std::max(1.0, u.norm());
}

Vec cone_project(const ConeRep& cone, const Vec& u)
{
  require_dim(u, cone.ambient, "cone_project");
  const Mat lin = cone.lineality_matrix();
  Mat g(cone.ambient, static_cast<Eigen::Index>(cone.generators.size() + 2 * cone.lineality_basis.size()));
  g << cone.generator_matrix(), lin, -lin;
  const NnlsResult r = nnls(g, u);
  return g * r.coeffs;
}

double cone_distance(const ConeRep& cone, const Vec& u) { return (cone_project(cone, u) - u).norm(); }

bool cone_contains(const ConeRep& cone, const Vec& u, double tol)
{
  return cone_distance(cone, u) <= tol * std::max(1.0, u.norm());
}

bool in_relative_interior(const ConeRep& cone, const Vec& u)
{
  if (!in_span(cone, u))
  {
    throw Error(ErrorCode::NotInSpan, "in_relative_interior: vector outside the cone's linear hull");
  }
  const double norm = u.norm();
  const Vec target = norm > 0.0 ? Vec(u / norm) : Vec(u);
  const Eigen::Index k = static_cast<Eigen::Index>(cone.generators.size());
  const Eigen::Index l = static_cast<Eigen::Index>(cone.lineality_basis.size());
  if (k == 0)
  {
    // The cone is a linear subspace; u in span is enough.
    return true;
  }
  // max s  s.t.  sum (s + mu_j) g_j + L c = target,  mu >= 0,  s <= 1,  c free.
  const Mat gm = cone.generator_matrix();
  LinearProgram lp;
  lp.cost = Vec::Zero(k + l + 1);
  lp.cost(k + l) = -1.0;
  Mat a_eq(cone.ambient, k + l + 1);
  a_eq << gm, cone.lineality_matrix(), gm.rowwise().sum();
  // Redundant equality rows are common (ambient > dim); restrict to the span.
  const Mat basis = range_space(cone.span_matrix());
  lp.a_eq = basis.transpose() * a_eq;
  lp.b_eq = basis.transpose() * target;
  lp.a_ub = Mat::Zero(1, k + l + 1);
  lp.a_ub(0, k + l) = 1.0;
  lp.b_ub = Vec::Ones(1);
  lp.free_vars.assign(static_cast<std::size_t>(k + l + 1), false);
  for (Eigen::Index j = k; j <= k + l; ++j)
  {
    lp.free_vars[static_cast<std::size_t>(j)] = true;
  }
  const LpSolution sol = solve_lp(lp);
  return sol.status == LpStatus::Optimal && sol.x(k + l) >= kRelIntEps;
}

bool in_relative_boundary(const ConeRep& cone, const Vec& u)
{
  if (!in_span(cone, u) || !cone_contains(cone, u))
  {
    return false;
  }
  return !in_relative_interior(cone, u);
}

ConeRep smallest_face_containing(const ConeRep& cone, const Vec& u)
{
  const Eigen::Index k = static_cast<Eigen::Index>(cone.generators.size());
  const Eigen::Index l = static_cast<Eigen::Index>(cone.lineality_basis.size());
  if (!cone_contains(cone, u))
  {
    throw Error(ErrorCode::NotInSet, "smallest_face_containing: vector not in cone");
  }
  // g_j belongs to the face iff  max lambda_j  s.t.  sum lambda_i g_i + L c = theta u,
  // lambda >= 0, theta >= 0, lambda_j <= 1  is positive.
  const Mat basis = range_space(cone.span_matrix());
  const Vec un = u.norm() > 0.0 ? Vec(u / u.norm()) : u;
  Mat a_eq(cone.ambient, k + l + 1);
  a_eq << cone.generator_matrix(), cone.lineality_matrix(), -un;
  std::vector<Vec> face_gens;
  for (Eigen::Index j = 0; j < k; ++j)
  {
    LinearProgram lp;
    lp.cost = Vec::Zero(k + l + 1);
    lp.cost(j) = -1.0;
    lp.a_eq = basis.transpose() * a_eq;
    lp.b_eq = Vec::Zero(basis.cols());
    lp.a_ub = Mat::Zero(1, k + l + 1);
    lp.a_ub(0, j) = 1.0;
    lp.b_ub = Vec::Ones(1);
    lp.free_vars.assign(static_cast<std::size_t>(k + l + 1), false);
    for (Eigen::Index i = k; i < k + l; ++i)
    {
      lp.free_vars[static_cast<std::size_t>(i)] = true;
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Optimal && -sol.objective > 1e-9)
    {
      face_gens.push_back(cone.generators[static_cast<std::size_t>(j)]);
    }
  }
  return ConeRep::make(cone.ambient, std::move(face_gens), cone.lineality_basis);
}

}  // namespace nmlab
