#include "nmlab/polytope.hpp"

#include "nmlab/lp.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <set>

namespace nmlab
{

namespace
{

constexpr double kFaceTol = 1e-9;

struct Closure
{
  std::uint32_t mask = 0;
  Vec witness;
};

bool has(std::uint32_t mask, Eigen::Index i) { return (mask >> i) & 1U; }

Mat rows_of(const Mat& a, std::uint32_t mask)
{
  Mat out(std::popcount(mask), a.cols());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
  {
    if (has(mask, i))
    {
      out.row(r++) = a.row(i);
    }
  }
  return out;
}

Vec entries_of(const Vec& b, std::uint32_t mask)
{
  Vec out(std::popcount(mask));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < b.size(); ++i)
  {
    if (has(mask, i))
    {
      out(r++) = b(i);
    }
  }
  return out;
}

double normalized_slack(const Polyhedron& p, Eigen::Index i, const Vec& x)
{
  return (p.b(i) - p.a.row(i).dot(x)) / p.a.row(i).norm();
}

std::uint32_t active_mask(const Polyhedron& p, const Vec& x)
{
  std::uint32_t mask = 0;
  for (Eigen::Index i = 0; i < p.a.rows(); ++i)
  {
    if (normalized_slack(p, i, x) <= kFaceTol)
    {
      mask |= 1U << i;
    }
  }
  return mask;
}

/// max t  s.t.  A_J x = b_J,  a_k x + |a_k| t <= b_k (k not in J),  t <= 1.
LpSolution center_lp(const Polyhedron& p, std::uint32_t eq)
{
  const Eigen::Index n = p.a.cols();
  const Eigen::Index m = p.a.rows();
  const int ne = std::popcount(eq);
  LinearProgram lp;
  lp.cost = Vec::Zero(n + 1);
  lp.cost(n) = -1.0;
  lp.a_eq = Mat::Zero(ne, n + 1);
  lp.a_eq.leftCols(n) = rows_of(p.a, eq);
  lp.b_eq = entries_of(p.b, eq);
  lp.a_ub = Mat::Zero(m - ne + 1, n + 1);
  lp.b_ub = Vec::Zero(m - ne + 1);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < m; ++i)
  {
    if (!has(eq, i))
    {
      lp.a_ub.row(r).head(n) = p.a.row(i);
      lp.a_ub(r, n) = p.a.row(i).norm();
      lp.b_ub(r) = p.b(i);
      ++r;
    }
  }
  lp.a_ub(r, n) = 1.0;
  lp.b_ub(r) = 1.0;
  lp.free_vars.assign(static_cast<std::size_t>(n + 1), true);
  return solve_lp(lp);
}

/// Largest slack row k can attain on {x in P : A_J x = b_J}.
double max_slack(const Polyhedron& p, std::uint32_t eq, Eigen::Index k)
{
  const Eigen::Index n = p.a.cols();
  LinearProgram lp;
  lp.cost = p.a.row(k).transpose() / p.a.row(k).norm();  // minimize a_k x
  lp.a_eq = rows_of(p.a, eq);
  lp.b_eq = entries_of(p.b, eq);
  lp.a_ub = p.a;
  lp.b_ub = p.b;
  lp.free_vars.assign(static_cast<std::size_t>(n), true);
  const LpSolution s = solve_lp(lp);
  if (s.status != LpStatus::Optimal)
  {
    return 0.0;
  }
  return p.b(k) / p.a.row(k).norm() - s.objective;
}

/// Equality set and relative-interior point of {x in P : A_J x = b_J}.
std::optional<Closure> close_face(const Polyhedron& p, std::uint32_t eq)
{
  const Eigen::Index n = p.a.cols();
  const Eigen::Index m = p.a.rows();
  for (Eigen::Index round = 0; round <= m; ++round)
  {
    const LpSolution s = center_lp(p, eq);
    if (s.status != LpStatus::Optimal)
    {
      return std::nullopt;
    }
    const double t = s.x(n);
    const Vec x = s.x.head(n);
    if (t < -kFaceTol)
    {
      return std::nullopt;
    }
    if (t > kFaceTol)
    {
      return Closure{eq, x};
    }
    std::uint32_t added = 0;
    for (Eigen::Index k = 0; k < m; ++k)
    {
      if (!has(eq, k) && normalized_slack(p, k, x) <= 1e-7 && max_slack(p, eq, k) <= kFaceTol)
      {
        added |= 1U << k;
      }
    }
    if (added == 0)
    {
      return Closure{eq, x};
    }
    eq |= added;
  }
  return std::nullopt;
}

int face_dimension(const Polyhedron& p, std::uint32_t mask)
{
  if (mask == 0)
  {
    return static_cast<int>(p.a.cols());
  }
  return static_cast<int>(p.a.cols() - numerical_rank(rows_of(p.a, mask)));
}

ConeRep mask_cone(const Polyhedron& p, std::uint32_t mask)
{
  std::vector<Vec> gens;
  for (Eigen::Index i = 0; i < p.a.rows(); ++i)
  {
    if (has(mask, i))
    {
      gens.push_back(p.a.row(i).transpose());
    }
  }
  return ConeRep::make(p.a.cols(), std::move(gens));
}

void require_nonzero(const Vec& u, const char* what)
{
  if (u.norm() == 0.0)
  {
    throw Error(ErrorCode::ZeroVector, std::string(what) + ": zero normal vector");
  }
}

}  // namespace

bool is_bounded(const Polyhedron& poly)
{
  const Eigen::Index n = poly.a.cols();
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (const double sgn : {1.0, -1.0})
    {
      LinearProgram lp;
      lp.cost = Vec::Zero(n);
      lp.cost(i) = sgn;
      lp.a_ub = poly.a;
      lp.b_ub = poly.b;
      lp.a_eq.resize(0, n);
      lp.b_eq.resize(0);
      lp.free_vars.assign(static_cast<std::size_t>(n), true);
      if (solve_lp(lp).status == LpStatus::Unbounded)
      {
        return false;
      }
    }
  }
  return true;
}

std::vector<int> FaceLattice::f_vector() const
{
  std::vector<int> f(static_cast<std::size_t>(faces[static_cast<std::size_t>(top)].dim + 1), 0);
  for (const Face& face : faces)
  {
    ++f[static_cast<std::size_t>(face.dim)];
  }
  return f;
}

std::size_t FaceLattice::face_of_point(const Vec& x) const
{
  const std::uint32_t act = active_mask(poly(), x);
  std::size_t best = faces.size();
  int best_count = -1;
  for (std::size_t i = 0; i < faces.size(); ++i)
  {
    if (faces[i].active == act)
    {
      return i;
    }
    if ((faces[i].active & act) == faces[i].active && std::popcount(faces[i].active) > best_count)
    {
      best = i;
      best_count = std::popcount(faces[i].active);
    }
  }
  return best;
}

std::size_t FaceLattice::exposed_face(const Vec& u) const
{
  std::size_t best = faces.size();
  for (std::size_t i = 0; i < faces.size(); ++i)
  {
    if (cone_contains(faces[i].normal_cone, u) && (best == faces.size() || faces[i].dim > faces[best].dim))
    {
      best = i;
    }
  }
  if (best == faces.size())
  {
    throw Error(ErrorCode::SearchExhausted, "exposed_face: no face has u in its normal cone");
  }
  return best;
}

FaceLattice face_lattice(const ConvexSet& polytope, Exec exec)
{
  const Polyhedron* p = polytope.as<Polyhedron>();
  if (p == nullptr)
  {
    throw Error(ErrorCode::UnsupportedSet, "face_lattice: set is not a polyhedron");
  }
  if (p->a.cols() > 4 || p->a.rows() > Polyhedron::kMaxRows)
  {
    throw Error(ErrorCode::TooLarge, "face_lattice: supports n <= 4 and m <= 32");
  }
  if (!is_bounded(*p))
  {
    throw Error(ErrorCode::Unbounded, "face_lattice: polyhedron is unbounded");
  }
  const Eigen::Index m = p->a.rows();
  const auto top = close_face(*p, 0);
  if (!top)
  {
    throw Error(ErrorCode::InfeasibleSet, "face_lattice: polyhedron is empty");
  }
  std::map<std::uint32_t, Vec> found{{top->mask, top->witness}};
  std::set<std::uint32_t> tried;
  std::vector<std::uint32_t> frontier{top->mask};
  while (!frontier.empty())
  {
    std::set<std::uint32_t> cand;
    for (const std::uint32_t j : frontier)
    {
      for (Eigen::Index k = 0; k < m; ++k)
      {
        const std::uint32_t c = j | (1U << k);
        if (c != j && !tried.count(c))
        {
          cand.insert(c);
        }
      }
    }
    const std::vector<std::uint32_t> cands(cand.begin(), cand.end());
    std::vector<std::optional<Closure>> res(cands.size());
    parallel_for(exec, cands.size(), [&](std::size_t i) { res[i] = close_face(*p, cands[i]); });
    std::set<std::uint32_t> next;
    for (std::size_t i = 0; i < cands.size(); ++i)
    {
      tried.insert(cands[i]);
      if (res[i] && !found.count(res[i]->mask))
      {
        found.emplace(res[i]->mask, res[i]->witness);
        next.insert(res[i]->mask);
      }
    }
    frontier.assign(next.begin(), next.end());
  }

  FaceLattice lat{polytope, {}, 0};
  for (const auto& [mask, w] : found)
  {
    lat.faces.push_back(Face{mask, face_dimension(*p, mask), w, mask_cone(*p, mask)});
  }
  std::stable_sort(lat.faces.begin(), lat.faces.end(), [](const Face& a, const Face& b) {
    return a.dim != b.dim ? a.dim > b.dim : a.active < b.active;
  });
  lat.top = 0;
  return lat;
}

ConeRep touching_cone(const FaceLattice& lattice, const Vec& u)
{
  require_nonzero(u, "touching_cone");
  require_dim(u, lattice.set.dim(), "touching_cone");
  const Face& f = lattice.faces[lattice.exposed_face(u)];
  return smallest_face_containing(f.normal_cone, u);
}

NormalClass classify_normal(const FaceLattice& lattice, const Vec& u, int r)
{
  require_nonzero(u, "classify_normal");
  const int n = static_cast<int>(lattice.set.dim());
  if (r < 0 || r > n - 1)
  {
    throw Error(ErrorCode::InvalidInput, "classify_normal: r must lie in [0, n-1]");
  }
  NormalClass c;
  c.touching_dim = touching_cone(lattice, u).dim;
  c.exposed_normal_dim = lattice.faces[lattice.exposed_face(u)].normal_cone.dim;
  c.is_r_extreme = c.touching_dim <= r + 1;
  c.is_r_exposed = c.exposed_normal_dim <= r + 1;
  return c;
}

DimlemWitness dimlem_audit(const FaceLattice& lattice, const Vec& x0, const Vec& u0)
{
  const ConvexSet& set = lattice.set;
  require_dim(x0, set.dim(), "dimlem_audit");
  require_dim(u0, set.dim(), "dimlem_audit normal");
  if (!contains(set, x0))
  {
    throw Error(ErrorCode::NotOnBoundary, "dimlem_audit: x0 is not in the polytope");
  }
  const std::size_t f0 = lattice.face_of_point(x0);
  if (f0 == static_cast<std::size_t>(lattice.top))
  {
    throw Error(ErrorCode::NotOnBoundary, "dimlem_audit: x0 lies in the relative interior");
  }
  const ConeRep n0 = normal_cone(set, x0);
  if (!cone_contains(n0, u0) || (u0.norm() > 0.0 && in_relative_interior(n0, u0)))
  {
    throw Error(ErrorCode::NotRelBoundaryNormal, "dimlem_audit: u0 is not a relative-boundary normal at x0");
  }

  DimlemWitness w;
  w.base_dim = normal_cone_dim(set, x0);
  std::size_t pick = lattice.faces.size();
  for (std::size_t j = 0; j < lattice.faces.size(); ++j)
  {
    if (j == f0 || !lattice.is_subface(f0, j) || !cone_contains(lattice.faces[j].normal_cone, u0))
    {
      continue;
    }
    if (pick == lattice.faces.size() || lattice.faces[j].dim < lattice.faces[pick].dim)
    {
      pick = j;
    }
  }
  if (pick == lattice.faces.size())
  {
    throw Error(ErrorCode::NoWitness, "dimlem_audit: no larger face carries u0 as a normal");
  }
  w.face = pick;
  const Vec dir = lattice.faces[pick].witness - x0;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 200; ++i)
  {
    const Vec xi = x0 + std::ldexp(1.0, -i) * dir;
    const double dist = (xi - x0).norm();
    const int di = normal_cone_dim(set, xi);
    if (di >= w.base_dim || !cone_contains(normal_cone(set, xi), u0) || dist > prev)
    {
      throw Error(ErrorCode::NoWitness, "dimlem_audit: witness sequence violates its invariants");
    }
    w.x_seq.push_back(xi);
    w.u_seq.push_back(u0);
    w.dims.push_back(di);
    prev = dist;
    if (dist < 1e-6)
    {
      return w;
    }
  }
  throw Error(ErrorCode::NoWitness, "dimlem_audit: sequence did not approach x0");
}

AsplundResult asplund_audit(const FaceLattice& lattice, const Vec& u, int r, double eps)
{
  if (!classify_normal(lattice, u, r).is_r_extreme)
  {
    throw Error(ErrorCode::NotRExtreme, "asplund_audit: u is not an r-extreme normal vector");
  }
  struct Candidate
  {
    double dist;
    std::size_t face;
    Vec proj;
  };
  std::vector<Candidate> cands;
  for (std::size_t j = 0; j < lattice.faces.size(); ++j)
  {
    const ConeRep& nc = lattice.faces[j].normal_cone;
    if (nc.dim > r + 1 || nc.dim == 0)
    {
      continue;
    }
    const Vec proj = cone_project(nc, u);
    if (proj.norm() <= 1e-12)
    {
      continue;
    }
    cands.push_back({(proj - u).norm(), j, proj});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
  for (const Candidate& c : cands)
  {
    if (c.dist > std::max(eps, 1e-9))
    {
      break;
    }
    if (classify_normal(lattice, c.proj, r).is_r_exposed)
    {
      return AsplundResult{c.proj, c.dist, c.face};
    }
  }
  throw Error(ErrorCode::SearchExhausted, "asplund_audit: no r-exposed normal within eps");
}

ConvexSet random_polytope(Rng& rng, Eigen::Index n, int m_lo, int m_hi)
{
  for (int attempt = 0; attempt < 1000; ++attempt)
  {
    const int m = rng.uniform_int(m_lo, m_hi);
    Mat a(m, n);
    Vec b(m);
    for (int i = 0; i < m; ++i)
    {
      a.row(i) = rng.unit_vec(n).transpose();
      b(i) = rng.uniform(0.5, 2.0);
    }
    ConvexSet s = ConvexSet::polyhedron(a, b, Vec::Zero(n));
    if (is_bounded(*s.as<Polyhedron>()))
    {
      return s;
    }
  }
  throw Error(ErrorCode::SearchExhausted, "random_polytope: could not draw a bounded polytope");
}

}  // namespace nmlab
