#include "nmlab/convex_sets.hpp"

#include "nmlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nmlab
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kActiveTol = 1e-9;
constexpr int kMaxPolyhedralConeRows = 1 << 15;

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Inequality/equality description of a polyhedral set: a x <= b, aeq x = beq.
struct HRep
{
  Mat a;
  Vec b;
  Mat aeq;
  Vec beq;
};

Mat affine_complement(const AffineSubspace& s)
{
  const Eigen::Index n = s.offset.size();
  if (s.basis.cols() == 0)
  {
    return Mat::Identity(n, n);
  }
  return null_space(s.basis.transpose());
}

std::optional<HRep> hrep(const ConvexSet& set)
{
  return std::visit(
    Overloaded{
      [](const Orthant& o) -> std::optional<HRep> {
        return HRep{-Mat::Identity(o.n, o.n), Vec::Zero(o.n), Mat(0, o.n), Vec(0)};
      },
      [](const Polyhedron& p) -> std::optional<HRep> {
        return HRep{p.a, p.b, Mat(0, p.a.cols()), Vec(0)};
      },
      [](const AffineSubspace& s) -> std::optional<HRep> {
        const Eigen::Index n = s.offset.size();
        const Mat c = affine_complement(s);
        return HRep{Mat(0, n), Vec(0), c.transpose(), c.transpose() * s.offset};
      },
      [](const POrderCone& c) -> std::optional<HRep> {
        const Eigen::Index m = c.n - 1;
        if (c.n == 1)
        {
          return HRep{-Mat::Ones(1, 1), Vec::Zero(1), Mat(0, 1), Vec(0)};
        }
        if (c.is_inf())
        {
          Mat a = Mat::Zero(2 * m, c.n);
          for (Eigen::Index i = 0; i < m; ++i)
          {
            a(2 * i, i) = 1.0;
            a(2 * i + 1, i) = -1.0;
            a(2 * i, m) = -1.0;
            a(2 * i + 1, m) = -1.0;
          }
          return HRep{a, Vec::Zero(2 * m), Mat(0, c.n), Vec(0)};
        }
        if (c.p == 1.0 && m < 16)
        {
          const Eigen::Index rows = Eigen::Index{1} << m;
          Mat a = Mat::Zero(rows, c.n);
          for (Eigen::Index r = 0; r < rows; ++r)
          {
            for (Eigen::Index i = 0; i < m; ++i)
            {
              a(r, i) = ((r >> i) & 1) ? -1.0 : 1.0;
            }
            a(r, m) = -1.0;
          }
          return HRep{a, Vec::Zero(rows), Mat(0, c.n), Vec(0)};
        }
        return std::nullopt;
      },
      [](const Product& p) -> std::optional<HRep> {
        std::vector<HRep> parts;
        Eigen::Index n = 0, m = 0, me = 0;
        for (const ConvexSet& f : p.factors)
        {
          auto h = hrep(f);
          if (!h)
          {
            return std::nullopt;
          }
          n += f.dim();
          m += h->a.rows();
          me += h->aeq.rows();
          parts.push_back(std::move(*h));
        }
        if (m > kMaxPolyhedralConeRows)
        {
          return std::nullopt;
        }
        HRep out{Mat::Zero(m, n), Vec::Zero(m), Mat::Zero(me, n), Vec::Zero(me)};
        Eigen::Index c = 0, r = 0, re = 0;
        for (const HRep& h : parts)
        {
          const Eigen::Index k = h.a.cols() > 0 ? h.a.cols() : h.aeq.cols();
          out.a.block(r, c, h.a.rows(), k) = h.a;
          out.b.segment(r, h.a.rows()) = h.b;
          out.aeq.block(re, c, h.aeq.rows(), k) = h.aeq;
          out.beq.segment(re, h.aeq.rows()) = h.beq;
          r += h.a.rows();
          re += h.aeq.rows();
          c += k;
        }
        return out;
      },
      [](const auto&) -> std::optional<HRep> { return std::nullopt; },
    },
    set.spec());
}

std::vector<Eigen::Index> active_rows(const HRep& h, const Vec& x)
{
  std::vector<Eigen::Index> act;
  for (Eigen::Index i = 0; i < h.a.rows(); ++i)
  {
    const double slack = h.b(i) - h.a.row(i).dot(x);
    if (slack <= kActiveTol * std::max(1.0, h.a.row(i).norm()))
    {
      act.push_back(i);
    }
  }
  return act;
}

Mat select_rows(const Mat& a, const std::vector<Eigen::Index>& idx)
{
  Mat out(static_cast<Eigen::Index>(idx.size()), a.cols());
  for (std::size_t r = 0; r < idx.size(); ++r)
  {
    out.row(static_cast<Eigen::Index>(r)) = a.row(idx[r]);
  }
  return out;
}

void require_member(const ConvexSet& set, const Vec& x, const char* what)
{
  require_dim(x, set.dim(), what);
  if (!contains(set, x))
  {
    throw Error(ErrorCode::NotInSet, std::string(what) + ": point not in set (violation " +
                                       std::to_string(violation(set, x)) + ")");
  }
}

// ---- scalar root finding ------------------------------------------------------

struct FDf
{
  double f;
  double df;
};

/// Newton iteration safeguarded by bisection on a sign-changing bracket.
/// `decreasing` tells whether f > 0 on the left of the root.
template <class F>
double safeguarded_root(F&& eval, double lo, double hi, bool decreasing, double x0)
{
  double x = (x0 > lo && x0 < hi) ? x0 : 0.5 * (lo + hi);
  double step_old = hi - lo;
  for (int it = 0; it < 400; ++it)
  {
    const FDf v = eval(x);
    if (!std::isfinite(v.f))
    {
      throw Error(ErrorCode::RootFindFailure, "non-finite residual in scalar root-find");
    }
    if (v.f == 0.0)
    {
      return x;
    }
    if ((v.f > 0.0) == decreasing)
    {
      lo = x;
    }
    else
    {
      hi = x;
    }
    double next = (v.df != 0.0 && std::isfinite(v.df)) ? x - v.f / v.df : kInf;
    if (!(next > lo && next < hi) || std::abs(next - x) > 0.5 * std::abs(step_old))
    {
      next = 0.5 * (lo + hi);
    }
    step_old = next - x;
    const double eps = std::numeric_limits<double>::epsilon();
    if (next == x || std::abs(next - x) <= 2.0 * eps * std::abs(x) ||
        hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)))
    {
      return next;
    }
    x = next;
  }
  return x;
}

/// Expands `hi` by doubling until residual(hi) < 0.
template <class F>
double expand_bracket(F&& residual, double hi)
{
  for (int k = 0; k < 60; ++k)
  {
    const double r = residual(hi);
    if (!std::isfinite(r))
    {
      break;
    }
    if (r < 0.0)
    {
      return hi;
    }
    hi *= 2.0;
  }
  throw Error(ErrorCode::RootFindFailure, "p-order projection: failed to bracket the dual multiplier");
}

// ---- closed-form and iterative projections -------------------------------------

Vec project_soc(const Vec& z)
{
  const Eigen::Index n = z.size();
  const double t = z(n - 1);
  if (n == 1)
  {
    return Vec::Constant(1, std::max(t, 0.0));
  }
  const Vec s = z.head(n - 1);
  const double ns = s.norm();
  if (ns <= t)
  {
    return z;
  }
  if (ns <= -t)
  {
    return Vec::Zero(n);
  }
  const double alpha = 0.5 * (ns + t);
  Vec x(n);
  x.head(n - 1) = (alpha / ns) * s;
  x(n - 1) = alpha;
  return x;
}

/// Solves w + nu * w^(p-1) = a for w in [0, a].
double porder_component(double a, double nu, double p)
{
  if (a == 0.0 || nu == 0.0)
  {
    return a;
  }
  const double guess = std::min(a, std::pow(a / nu, 1.0 / (p - 1.0)));
  auto eval = [&](double w) {
    const double wp = std::pow(w, p - 1.0);
    return FDf{w + nu * wp - a, 1.0 + nu * (p - 1.0) * wp / w};
  };
  return safeguarded_root(eval, 0.0, a, false, guess);
}

Vec project_porder(const POrderCone& c, const Vec& z)
{
  const Eigen::Index n = c.n;
  const double p = c.p;
  if (p == 2.0)
  {
    return project_soc(z);
  }
  const double t = z(n - 1);
  if (n == 1)
  {
    return Vec::Constant(1, std::max(t, 0.0));
  }
  const Vec s = z.head(n - 1);
  const Vec abs_s = s.cwiseAbs();
  if (p_norm(s, p) <= t)
  {
    return z;
  }
  if (p_norm(s, conjugate_exponent(p)) <= -t)
  {
    return Vec::Zero(n);
  }
  const double lo = std::max(0.0, t);
  Vec w = abs_s;
  double tau = 0.0;

  if (p == 1.0)
  {
    auto eval = [&](double tt) {
      const double mu = tt - t;
      double sum = 0.0, cnt = 0.0;
      for (Eigen::Index i = 0; i < abs_s.size(); ++i)
      {
        if (abs_s(i) > mu)
        {
          sum += abs_s(i) - mu;
          cnt += 1.0;
        }
      }
      return FDf{sum - tt, -cnt - 1.0};
    };
    const double hi = expand_bracket([&](double tt) { return eval(tt).f; }, 2.0 * abs_s.sum());
    tau = safeguarded_root(eval, lo, hi, true, 0.5 * (lo + hi));
    const double mu = tau - t;
    w = (abs_s.array() - mu).max(0.0).matrix();
  }
  else if (c.is_inf())
  {
    auto eval = [&](double tt) {
      double sum = 0.0, cnt = 0.0;
      for (Eigen::Index i = 0; i < abs_s.size(); ++i)
      {
        if (abs_s(i) > tt)
        {
          sum += abs_s(i) - tt;
          cnt += 1.0;
        }
      }
      return FDf{sum - (tt - t), -cnt - 1.0};
    };
    const double hi = expand_bracket([&](double tt) { return eval(tt).f; }, abs_s.maxCoeff());
    tau = safeguarded_root(eval, lo, hi, true, 0.5 * (lo + hi));
    w = abs_s.cwiseMin(tau);
  }
  else
  {
    auto solve_w = [&](double tt, Vec& out) {
      const double nu = (tt - t) / std::pow(tt, p - 1.0);
      for (Eigen::Index i = 0; i < abs_s.size(); ++i)
      {
        out(i) = porder_component(abs_s(i), nu, p);
      }
      return nu;
    };
    Vec buf(abs_s.size());
    auto eval = [&](double tt) {
      const double nu = solve_w(tt, buf);
      const double norm = p_norm(buf, p);
      const double dnu = std::pow(tt, -p) * (tt + (1.0 - p) * (tt - t));
      double acc = 0.0;
      for (Eigen::Index i = 0; i < buf.size(); ++i)
      {
        const double wi = buf(i);
        if (wi > 0.0)
        {
          const double dw = -wi / (std::pow(wi, 2.0 - p) + nu * (p - 1.0));
          acc += std::pow(wi / norm, p - 1.0) * dw;
        }
      }
      return FDf{norm - tt, acc * dnu - 1.0};
    };
    const double hi = expand_bracket([&](double tt) { return eval(tt).f; }, 2.0 * p_norm(s, p));
    tau = safeguarded_root(eval, lo, hi, true, 0.5 * (lo + hi));
    solve_w(tau, w);
  }

  Vec x(n);
  for (Eigen::Index i = 0; i < n - 1; ++i)
  {
    x(i) = s(i) < 0.0 ? -w(i) : w(i);
  }
  x(n - 1) = tau;
  return x;
}

Vec project_psd(const PsdCone& c, const Vec& z)
{
  const Mat m = smat(z, c.d);
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.eigenvalues().minCoeff() >= 0.0)
  {
    return z;
  }
  const Vec lam = es.eigenvalues().cwiseMax(0.0);
  return svec(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
}

Vec project_affine(const AffineSubspace& s, const Vec& z)
{
  if (s.basis.cols() == 0)
  {
    return s.offset;
  }
  return s.offset + s.basis * (s.basis.transpose() * (z - s.offset));
}

/// Least-distance program min |y| s.t. a (z + y) <= b, solved as the
/// non-negative least squares problem of Lawson and Hanson, then polished on
/// the detected active set.
Vec project_polyhedron_ldp(const Polyhedron& poly, const Vec& z)
{
  const Vec r = poly.a * z - poly.b;
  if (r.maxCoeff() <= 0.0)
  {
    return z;
  }
  const Eigen::Index n = z.size();
  const Eigen::Index m = poly.a.rows();
  // E = [G^T; h^T] with G = -a, h = a z - b; f = e_{n+1}.
  Mat e(n + 1, m);
  e.topRows(n) = -poly.a.transpose();
  e.row(n) = r.transpose();
  Vec f = Vec::Zero(n + 1);
  f(n) = 1.0;
  const NnlsResult sol = nnls(e, f);
  const Vec res = e * sol.coeffs - f;
  if (std::abs(res(n)) <= 1e-14)
  {
    throw Error(ErrorCode::InfeasibleSet, "polyhedron projection: constraints are inconsistent");
  }
  Vec x = z - res.head(n) / res(n);

  // Polish: project z onto the affine hull of the rows carrying weight.
  std::vector<Eigen::Index> act;
  for (Eigen::Index i = 0; i < m; ++i)
  {
    if (sol.coeffs(i) > 0.0)
    {
      act.push_back(i);
    }
  }
  if (!act.empty())
  {
    const Mat aa = select_rows(poly.a, act);
    Vec bb(static_cast<Eigen::Index>(act.size()));
    for (std::size_t i = 0; i < act.size(); ++i)
    {
      bb(static_cast<Eigen::Index>(i)) = poly.b(act[i]);
    }
    const Vec lam = (aa * aa.transpose()).completeOrthogonalDecomposition().solve(aa * z - bb);
    const Vec xp = z - aa.transpose() * lam;
    const double scale = 1.0 + z.cwiseAbs().maxCoeff() + poly.b.cwiseAbs().maxCoeff();
    const bool feasible = (poly.a * xp - poly.b).maxCoeff() <= 1e-12 * scale;
    const bool consistent = (aa * xp - bb).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    const bool signs_ok = lam.minCoeff() >= -1e-10 * scale;
    if (feasible && consistent && signs_ok && (xp - x).norm() <= 1e-6 * scale)
    {
      x = xp;
    }
  }
  return x;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> factor_ranges(const Product& p)
{
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index off = 0;
  for (const ConvexSet& f : p.factors)
  {
    out.emplace_back(off, f.dim());
    off += f.dim();
  }
  return out;
}

/// Embeds factor cones into the product space.
ConeRep embed_product_cones(const Product& p, const Vec& x,
                            ConeRep (*per_factor)(const ConvexSet&, const Vec&))
{
  const auto ranges = factor_ranges(p);
  const Eigen::Index n = x.size();
  std::vector<Vec> gens, lin;
  for (std::size_t k = 0; k < p.factors.size(); ++k)
  {
    const auto [off, len] = ranges[k];
    const ConeRep c = per_factor(p.factors[k], x.segment(off, len));
    for (const Vec& g : c.generators)
    {
      Vec e = Vec::Zero(n);
      e.segment(off, len) = g;
      gens.push_back(std::move(e));
    }
    for (const Vec& l : c.lineality_basis)
    {
      Vec e = Vec::Zero(n);
      e.segment(off, len) = l;
      lin.push_back(std::move(e));
    }
  }
  return ConeRep::make(n, std::move(gens), std::move(lin));
}

/// Outward unit normal of a smooth cone boundary point (SOC or p-order cone).
Vec smooth_boundary_normal(const Vec& x, double p)
{
  const Eigen::Index n = x.size();
  const Vec s = x.head(n - 1);
  const double ns = p_norm(s, p);
  Vec g(n);
  for (Eigen::Index i = 0; i < n - 1; ++i)
  {
    const double r = std::abs(s(i)) / ns;
    const double mag = p == 2.0 ? r : std::pow(r, p - 1.0);
    g(i) = s(i) < 0.0 ? -mag : mag;
  }
  g(n - 1) = -1.0;
  return g / g.norm();
}

enum class ConePosition
{
  Interior,
  Apex,
  SmoothBoundary,
};

ConePosition cone_position(const Vec& x, double p)
{
  const Eigen::Index n = x.size();
  if (x.cwiseAbs().maxCoeff() <= kMembershipTol)
  {
    return ConePosition::Apex;
  }
  if (n == 1)
  {
    return ConePosition::Interior;
  }
  const double gap = x(n - 1) - p_norm(x.head(n - 1), p);
  return gap > kMembershipTol ? ConePosition::Interior : ConePosition::SmoothBoundary;
}

int psd_zero_multiplicity(const PsdCone& c, const Vec& x)
{
  Eigen::SelfAdjointEigenSolver<Mat> es(smat(x, c.d));
  int k = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
  {
    if (es.eigenvalues()(i) <= kMembershipTol)
    {
      ++k;
    }
  }
  return k;
}

ConeRep normal_cone_unchecked(const ConvexSet& set, const Vec& x);
ConeRep tangent_cone_unchecked(const ConvexSet& set, const Vec& x);

ConeRep normal_cone_unchecked(const ConvexSet& set, const Vec& x)
{
  const Eigen::Index n = set.dim();
  if (const Product* p = set.as<Product>(); p != nullptr && !is_polyhedral(set))
  {
    return embed_product_cones(*p, x, &normal_cone_unchecked);
  }
  if (auto h = hrep(set))
  {
    std::vector<Vec> gens, lin;
    for (const Eigen::Index i : active_rows(*h, x))
    {
      gens.push_back(h->a.row(i).transpose());
    }
    for (Eigen::Index i = 0; i < h->aeq.rows(); ++i)
    {
      lin.push_back(h->aeq.row(i).transpose());
    }
    return ConeRep::make(n, std::move(gens), std::move(lin));
  }
  double p = 2.0;
  if (const POrderCone* c = set.as<POrderCone>())
  {
    p = c->p;
  }
  else if (const PsdCone* c = set.as<PsdCone>())
  {
    if (psd_zero_multiplicity(*c, x) == 0)
    {
      return ConeRep::make(n, {});
    }
    throw Error(ErrorCode::UnsupportedStructure, "normal_cone: PSD boundary cones are not finitely generated");
  }
  switch (cone_position(x, p))
  {
  case ConePosition::Interior:
    return ConeRep::make(n, {});
  case ConePosition::SmoothBoundary:
    return ConeRep::make(n, {smooth_boundary_normal(x, p)});
  case ConePosition::Apex:
    break;
  }
  throw Error(ErrorCode::UnsupportedStructure, "normal_cone: cone apex has a non-polyhedral normal cone");
}

ConeRep tangent_cone_unchecked(const ConvexSet& set, const Vec& x)
{
  const Eigen::Index n = set.dim();
  if (const Product* p = set.as<Product>(); p != nullptr && !is_polyhedral(set))
  {
    return embed_product_cones(*p, x, &tangent_cone_unchecked);
  }
  std::vector<Vec> whole;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    whole.push_back(Vec::Unit(n, i));
  }
  if (auto h = hrep(set))
  {
    return halfspace_cone(n, select_rows(h->a, active_rows(*h, x)), h->aeq);
  }
  double p = 2.0;
  if (const POrderCone* c = set.as<POrderCone>())
  {
    p = c->p;
  }
  else if (const PsdCone* c = set.as<PsdCone>())
  {
    if (psd_zero_multiplicity(*c, x) == 0)
    {
      return ConeRep::make(n, {}, whole);
    }
    throw Error(ErrorCode::UnsupportedStructure, "tangent_cone: PSD boundary cones are not finitely generated");
  }
  switch (cone_position(x, p))
  {
  case ConePosition::Interior:
    return ConeRep::make(n, {}, whole);
  case ConePosition::SmoothBoundary:
    return halfspace_cone(n, smooth_boundary_normal(x, p).transpose());
  case ConePosition::Apex:
    break;
  }
  throw Error(ErrorCode::UnsupportedStructure, "tangent_cone: cone apex has a non-polyhedral tangent cone");
}

int normal_cone_dim_unchecked(const ConvexSet& set, const Vec& x)
{
  if (const Product* p = set.as<Product>())
  {
    const auto ranges = factor_ranges(*p);
    int total = 0;
    for (std::size_t k = 0; k < p->factors.size(); ++k)
    {
      total += normal_cone_dim_unchecked(p->factors[k], x.segment(ranges[k].first, ranges[k].second));
    }
    return total;
  }
  if (const PsdCone* c = set.as<PsdCone>())
  {
    const int k = psd_zero_multiplicity(*c, x);
    return k * (k + 1) / 2;
  }
  if (auto h = hrep(set))
  {
    const Mat act = select_rows(h->a, active_rows(*h, x));
    Mat all(act.rows() + h->aeq.rows(), x.size());
    all << act, h->aeq;
    return static_cast<int>(numerical_rank(all));
  }
  double p = 2.0;
  if (const POrderCone* c = set.as<POrderCone>())
  {
    p = c->p;
  }
  switch (cone_position(x, p))
  {
  case ConePosition::Interior:
    return 0;
  case ConePosition::SmoothBoundary:
    return 1;
  case ConePosition::Apex:
    break;
  }
  return static_cast<int>(set.dim());
}

}  // namespace

// ---- construction -----------------------------------------------------------------

ConvexSet ConvexSet::orthant(Eigen::Index n)
{
  if (n < 1)
  {
    throw Error(ErrorCode::InvalidInput, "orthant: dimension must be positive");
  }
  return ConvexSet(Orthant{n});
}

namespace
{

void validate_polyhedron(const Mat& a, const Vec& b)
{
  if (a.rows() != b.size())
  {
    throw Error(ErrorCode::DimensionMismatch, "polyhedron: A has " + std::to_string(a.rows()) +
                                                " rows but b has " + std::to_string(b.size()) + " entries");
  }
  if (a.cols() < 1 || a.rows() < 1)
  {
    throw Error(ErrorCode::InvalidInput, "polyhedron: empty constraint matrix");
  }
  if (a.rows() > Polyhedron::kMaxRows)
  {
    throw Error(ErrorCode::TooLarge, "polyhedron: more than 32 rows");
  }
  if (!a.allFinite() || !b.allFinite())
  {
    throw Error(ErrorCode::InvalidInput, "polyhedron: non-finite data");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i)
  {
    if (a.row(i).norm() == 0.0)
    {
      throw Error(ErrorCode::InvalidInput, "polyhedron: row " + std::to_string(i) + " of A is zero");
    }
  }
}

}  // namespace

ConvexSet ConvexSet::polyhedron(Mat a, Vec b)
{
  validate_polyhedron(a, b);
  const Eigen::Index n = a.cols();
  const Eigen::Index m = a.rows();
  // max t  s.t.  a_i x + |a_i| t <= b_i,  0 <= t <= 1; x free.
  LinearProgram lp;
  lp.cost = Vec::Zero(n + 1);
  lp.cost(n) = -1.0;
  lp.a_ub = Mat::Zero(m + 1, n + 1);
  lp.b_ub = Vec::Zero(m + 1);
  for (Eigen::Index i = 0; i < m; ++i)
  {
    lp.a_ub.row(i).head(n) = a.row(i);
    lp.a_ub(i, n) = a.row(i).norm();
    lp.b_ub(i) = b(i);
  }
  lp.a_ub(m, n) = 1.0;
  lp.b_ub(m) = 1.0;
  lp.a_eq.resize(0, n + 1);
  lp.b_eq.resize(0);
  lp.free_vars.assign(static_cast<std::size_t>(n + 1), true);
  lp.free_vars[static_cast<std::size_t>(n)] = false;
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
  {
    throw Error(ErrorCode::InfeasibleSet, "polyhedron: feasible region is empty");
  }
  Vec x0 = sol.x.head(n);
  if ((a * x0 - b).maxCoeff() > kMembershipTol)
  {
    throw Error(ErrorCode::InfeasibleSet, "polyhedron: feasible region is empty");
  }
  return ConvexSet(Polyhedron{std::move(a), std::move(b), std::move(x0)});
}

ConvexSet ConvexSet::polyhedron(Mat a, Vec b, Vec feasible_point)
{
  validate_polyhedron(a, b);
  require_dim(feasible_point, a.cols(), "polyhedron feasible point");
  if ((a * feasible_point - b).maxCoeff() > kMembershipTol)
  {
    throw Error(ErrorCode::InvalidInput, "polyhedron: supplied point is not feasible");
  }
  return ConvexSet(Polyhedron{std::move(a), std::move(b), std::move(feasible_point)});
}

ConvexSet ConvexSet::box(const Vec& lo, const Vec& hi)
{
  require_dim(hi, lo.size(), "box");
  if ((hi - lo).minCoeff() < 0.0)
  {
    throw Error(ErrorCode::InfeasibleSet, "box: lower bound exceeds upper bound");
  }
  const Eigen::Index n = lo.size();
  Mat a(2 * n, n);
  a << Mat::Identity(n, n), -Mat::Identity(n, n);
  Vec b(2 * n);
  b << hi, -lo;
  return polyhedron(std::move(a), std::move(b), 0.5 * (lo + hi));
}

ConvexSet ConvexSet::unit_cube(Eigen::Index n) { return box(Vec::Zero(n), Vec::Ones(n)); }

ConvexSet ConvexSet::soc(Eigen::Index n)
{
  if (n < 1)
  {
    throw Error(ErrorCode::InvalidInput, "soc: dimension must be positive");
  }
  return ConvexSet(SecondOrderCone{n});
}

ConvexSet ConvexSet::porder(Eigen::Index n, double p)
{
  if (n < 1)
  {
    throw Error(ErrorCode::InvalidInput, "porder: dimension must be positive");
  }
  if (!(p >= 1.0))
  {
    throw Error(ErrorCode::InvalidInput, "porder: p must lie in [1, inf]");
  }
  return ConvexSet(POrderCone{n, p});
}

ConvexSet ConvexSet::psd(Eigen::Index d)
{
  if (d < 1)
  {
    throw Error(ErrorCode::InvalidInput, "psd: matrix order must be positive");
  }
  return ConvexSet(PsdCone{d});
}

ConvexSet ConvexSet::affine(const Mat& basis, Vec offset)
{
  if (basis.cols() > 0 && basis.rows() != offset.size())
  {
    throw Error(ErrorCode::DimensionMismatch, "affine: basis vectors and offset differ in length");
  }
  if (offset.size() < 1)
  {
    throw Error(ErrorCode::InvalidInput, "affine: empty offset");
  }
  Mat q = basis.cols() > 0 ? range_space(basis) : Mat(offset.size(), 0);
  return ConvexSet(AffineSubspace{std::move(q), std::move(offset)});
}

ConvexSet ConvexSet::product(std::vector<ConvexSet> factors)
{
  if (factors.empty())
  {
    throw Error(ErrorCode::InvalidInput, "product: no factors");
  }
  return ConvexSet(Product{std::move(factors)});
}

Eigen::Index ConvexSet::dim() const
{
  return std::visit(Overloaded{
                      [](const Orthant& o) { return o.n; },
                      [](const Polyhedron& p) { return p.a.cols(); },
                      [](const SecondOrderCone& c) { return c.n; },
                      [](const POrderCone& c) { return c.n; },
                      [](const PsdCone& c) { return c.d * (c.d + 1) / 2; },
                      [](const AffineSubspace& s) { return s.offset.size(); },
                      [](const Product& p) {
                        Eigen::Index n = 0;
                        for (const ConvexSet& f : p.factors)
                        {
                          n += f.dim();
                        }
                        return n;
                      },
                    },
                    spec_);
}

// ---- queries ----------------------------------------------------------------------

double violation(const ConvexSet& set, const Vec& x)
{
  require_dim(x, set.dim(), "violation");
  return std::visit(
    Overloaded{
      [&](const Orthant&) { return std::max(0.0, -x.minCoeff()); },
      [&](const Polyhedron& p) { return std::max(0.0, (p.a * x - p.b).maxCoeff()); },
      [&](const SecondOrderCone& c) {
        return c.n == 1 ? std::max(0.0, -x(0)) : std::max(0.0, x.head(c.n - 1).norm() - x(c.n - 1));
      },
      [&](const POrderCone& c) {
        return c.n == 1 ? std::max(0.0, -x(0)) : std::max(0.0, p_norm(x.head(c.n - 1), c.p) - x(c.n - 1));
      },
      [&](const PsdCone& c) {
        Eigen::SelfAdjointEigenSolver<Mat> es(smat(x, c.d), Eigen::EigenvaluesOnly);
        return std::max(0.0, -es.eigenvalues().minCoeff());
      },
      [&](const AffineSubspace& s) { return (x - project_affine(s, x)).cwiseAbs().maxCoeff(); },
      [&](const Product& p) {
        double v = 0.0;
        Eigen::Index off = 0;
        for (const ConvexSet& f : p.factors)
        {
          v = std::max(v, violation(f, x.segment(off, f.dim())));
          off += f.dim();
        }
        return v;
      },
    },
    set.spec());
}

bool contains(const ConvexSet& set, const Vec& x, double tol) { return violation(set, x) <= tol; }

Vec project(const ConvexSet& set, const Vec& z)
{
  require_dim(z, set.dim(), "project");
  if (!z.allFinite())
  {
    throw Error(ErrorCode::InvalidInput, "project: non-finite input");
  }
  return std::visit(Overloaded{
                      [&](const Orthant&) -> Vec { return z.cwiseMax(0.0); },
                      [&](const Polyhedron& p) { return project_polyhedron_ldp(p, z); },
                      [&](const SecondOrderCone&) { return project_soc(z); },
                      [&](const POrderCone& c) { return project_porder(c, z); },
                      [&](const PsdCone& c) { return project_psd(c, z); },
                      [&](const AffineSubspace& s) { return project_affine(s, z); },
                      [&](const Product& p) {
                        Vec x(z.size());
                        Eigen::Index off = 0;
                        for (const ConvexSet& f : p.factors)
                        {
                          x.segment(off, f.dim()) = project(f, z.segment(off, f.dim()));
                          off += f.dim();
                        }
                        return x;
                      },
                    },
                    set.spec());
}

Vec project_polyhedron_enumerate(const Polyhedron& poly, const Vec& z)
{
  const Eigen::Index n = poly.a.cols();
  const Eigen::Index m = poly.a.rows();
  require_dim(z, n, "project_polyhedron_enumerate");
  const double scale = 1.0 + z.cwiseAbs().maxCoeff() + poly.b.cwiseAbs().maxCoeff();
  if ((poly.a * z - poly.b).maxCoeff() <= 0.0)
  {
    return z;
  }
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = 1; k <= std::min(n, m); ++k)
  {
    idx.resize(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i)
    {
      idx[static_cast<std::size_t>(i)] = i;
    }
    while (true)
    {
      const Mat aa = select_rows(poly.a, idx);
      Eigen::FullPivLU<Mat> lu(aa * aa.transpose());
      if (lu.isInvertible() && numerical_rank(aa) == k)
      {
        Vec bb(k);
        for (Eigen::Index i = 0; i < k; ++i)
        {
          bb(i) = poly.b(idx[static_cast<std::size_t>(i)]);
        }
        const Vec lam = lu.solve(aa * z - bb);
        if (lam.minCoeff() >= -1e-12 * scale)
        {
          const Vec x = z - aa.transpose() * lam;
          if ((poly.a * x - poly.b).maxCoeff() <= 1e-10 * scale)
          {
            return x;
          }
        }
      }
      // next combination of k out of m
      Eigen::Index i = k - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i)
      {
        --i;
      }
      if (i < 0)
      {
        break;
      }
      ++idx[static_cast<std::size_t>(i)];
      for (Eigen::Index j = i + 1; j < k; ++j)
      {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  throw Error(ErrorCode::InfeasibleSet, "project_polyhedron_enumerate: no KKT point found");
}

ConeRep normal_cone(const ConvexSet& set, const Vec& x)
{
  require_member(set, x, "normal_cone");
  return normal_cone_unchecked(set, x);
}

ConeRep tangent_cone(const ConvexSet& set, const Vec& x)
{
  require_member(set, x, "tangent_cone");
  return tangent_cone_unchecked(set, x);
}

int normal_cone_dim(const ConvexSet& set, const Vec& x)
{
  require_member(set, x, "normal_cone_dim");
  return normal_cone_dim_unchecked(set, x);
}

bool is_polyhedral(const ConvexSet& set) { return hrep(set).has_value(); }

std::optional<Vec> projection_derivative(const ConvexSet& set, const Vec& z, const Vec& d)
{
  require_dim(z, set.dim(), "projection_derivative");
  require_dim(d, set.dim(), "projection_derivative direction");
  if (const Product* p = set.as<Product>(); p != nullptr && !is_polyhedral(set))
  {
    Vec out(z.size());
    const auto ranges = factor_ranges(*p);
    for (std::size_t k = 0; k < p->factors.size(); ++k)
    {
      const auto [off, len] = ranges[k];
      auto part = projection_derivative(p->factors[k], z.segment(off, len), d.segment(off, len));
      if (!part)
      {
        return std::nullopt;
      }
      out.segment(off, len) = *part;
    }
    return out;
  }
  const auto h = hrep(set);
  if (!h)
  {
    return std::nullopt;
  }
  const Eigen::Index n = z.size();
  const Vec x = project(set, z);
  std::vector<Vec> rows;
  for (const Eigen::Index i : active_rows(*h, x))
  {
    rows.push_back(h->a.row(i).transpose() / h->a.row(i).norm());
  }
  for (Eigen::Index i = 0; i < h->aeq.rows(); ++i)
  {
    rows.push_back(h->aeq.row(i).transpose());
    rows.push_back(-h->aeq.row(i).transpose());
  }
  const Vec u = z - x;
  if (u.norm() > 1e-12 * std::max(1.0, z.norm()))
  {
    rows.push_back(u / u.norm());
    rows.push_back(-u / u.norm());
  }
  if (rows.empty())
  {
    return d;
  }
  Polyhedron crit;
  crit.a.resize(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    crit.a.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  crit.b = Vec::Zero(crit.a.rows());
  crit.feasible_point = Vec::Zero(n);
  return project_polyhedron_ldp(crit, d);
}

Vec svec(const Mat& m)
{
  const Eigen::Index d = m.rows();
  Vec v(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j)
  {
    for (Eigen::Index i = j; i < d; ++i)
    {
      v(k++) = i == j ? m(i, i) : std::sqrt(2.0) * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return v;
}

Mat smat(const Vec& v, Eigen::Index d)
{
  require_dim(v, d * (d + 1) / 2, "smat");
  Mat m(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j)
  {
    for (Eigen::Index i = j; i < d; ++i)
    {
      const double val = i == j ? v(k) : v(k) / std::sqrt(2.0);
      m(i, j) = val;
      m(j, i) = val;
      ++k;
    }
  }
  return m;
}

double p_norm(const Vec& v, double p)
{
  if (v.size() == 0)
  {
    return 0.0;
  }
  if (p == kInf)
  {
    return v.cwiseAbs().maxCoeff();
  }
  if (p == 1.0)
  {
    return v.cwiseAbs().sum();
  }
  if (p == 2.0)
  {
    return v.norm();
  }
  const double mx = v.cwiseAbs().maxCoeff();
  if (mx == 0.0)
  {
    return 0.0;
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    acc += std::pow(std::abs(v(i)) / mx, p);
  }
  return mx * std::pow(acc, 1.0 / p);
}

double conjugate_exponent(double p)
{
  if (p == 1.0)
  {
    return kInf;
  }
  if (p == kInf)
  {
    return 1.0;
  }
  return p / (p - 1.0);
}

}  // namespace nmlab
