#include "nmlab/stability.hpp"

#include "nmlab/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace nmlab
{

std::string_view to_string(AubinVerdict v)
{
  switch (v)
  {
    case AubinVerdict::BoundedEvidence:
      return "BoundedEvidence";
    case AubinVerdict::BlowupEvidence:
      return "BlowupEvidence";
    case AubinVerdict::EmptyValueDetected:
      return "EmptyValueDetected";
    case AubinVerdict::Indeterminate:
      return "Indeterminate";
  }
  return "?";
}

std::string_view to_string(SrVerdict v)
{
  switch (v)
  {
    case SrVerdict::Verified:
      return "Verified";
    case SrVerdict::Refuted:
      return "Refuted";
    case SrVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

namespace
{

/// Largest distance from a point of `from` to the set `to`.
double excess(const std::vector<Vec>& from, const std::vector<Vec>& to)
{
  double worst = 0.0;
  for (const Vec& a : from)
  {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& b : to)
    {
      best = std::min(best, (a - b).norm());
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

AubinEstimate aubin_estimate(const GeneralizedEquation& ge, const AubinOptions& opts)
{
  if (opts.radii.size() < 3)
  {
    throw Error(ErrorCode::InvalidInput, "aubin_estimate needs at least three radii");
  }
  for (std::size_t k = 1; k < opts.radii.size(); ++k)
  {
    if (!(opts.radii[k] < opts.radii[k - 1]) || !(opts.radii[k] > 0.0))
    {
      throw Error(ErrorCode::InvalidInput, "aubin_estimate radii must be positive and strictly decreasing");
    }
  }
  if (opts.targets < 2)
  {
    throw Error(ErrorCode::InvalidInput, "aubin_estimate needs at least two targets");
  }
  const Eigen::Index n = ge.dim();
  const Vec z0 = canonical_point(ge);
  const Map f = ge.normal_map().as_map();
  const Rng root(opts.seed, 21);

  AubinEstimate out;
  out.radii = opts.radii;
  for (std::size_t level = 0; level < opts.radii.size(); ++level)
  {
    const double r = opts.radii[level];
    const double near = opts.window_factor * r;  // localization V
    const double far = 2.0 * near;               // solutions kept as excess targets
    const double lip = ge.phi().local_lipschitz(ge.x0(), far);
    const Domain window = Domain::ball(z0, (1.0 + lip) * far + r);
    const Rng level_rng = root.split(level);
    const auto count = static_cast<std::size_t>(opts.targets);

    std::vector<Vec> ys(count);
    std::vector<std::vector<Vec>> inner(count), outer(count);
    parallel_for(opts.exec, count, [&](std::size_t t) {
      Rng rng = level_rng.split(t);
      ys[t] = ge.y0() + rng.in_ball(n, r);
      const auto zs = solve_local(f, ys[t], window, {z0}, rng.split(1), opts.solve);
      for (const Vec& z : zs)
      {
        const Vec x = ge.x_of_z(z);
        const double d = (x - ge.x0()).norm();
        if (d <= far)
        {
          outer[t].push_back(x);
        }
        if (d <= near)
        {
          inner[t].push_back(x);
        }
      }
    });

    int empty = 0;
    double modulus = 0.0;
    for (std::size_t t = 0; t < count; ++t)
    {
      if (inner[t].empty())
      {
        ++empty;
        continue;
      }
      const std::size_t s = (t + 1) % count;
      if (inner[s].empty())
      {
        continue;
      }
      const double dy = (ys[t] - ys[s]).norm();
      if (dy > 0.0)
      {
        modulus = std::max({modulus, excess(inner[t], outer[s]) / dy, excess(inner[s], outer[t]) / dy});
      }
    }
    out.moduli.push_back(modulus);
    out.empty_targets.push_back(empty);
  }

  const bool any_empty = std::any_of(out.empty_targets.begin(), out.empty_targets.end(), [](int e) { return e > 0; });
  const double last = out.moduli.back(), prev = out.moduli[out.moduli.size() - 2], first = out.moduli.front();
  if (any_empty)
  {
    out.verdict = AubinVerdict::EmptyValueDetected;
  }
  else if (last > 10.0 * first)
  {
    out.verdict = AubinVerdict::BlowupEvidence;
  }
  else if (last <= 2.0 * prev || last <= 1e-12)
  {
    // a modulus that shrinks (the localized solution set can become constant)
    // still bounds the excess, so only growth beyond x2 is held against it
    out.verdict = AubinVerdict::BoundedEvidence;
  }
  else
  {
    out.verdict = AubinVerdict::Indeterminate;
  }
  return out;
}

AntResult ant_check(const Mat& a, const ConvexSet& k, const Vec& x0)
{
  const Eigen::Index n = k.dim();
  require_dim(x0, n, "ant_check point");
  if (a.rows() != n || a.cols() != n)
  {
    throw Error(ErrorCode::DimensionMismatch, "ant_check: A must be n x n");
  }
  if (!is_polyhedral(k))
  {
    throw Error(ErrorCode::UnsupportedStructure, "ant_check needs a polyhedral set");
  }
  if (!contains(k, x0))
  {
    throw Error(ErrorCode::NotOnBoundary, "x0 is not in the set");
  }
  const ConeRep nc = normal_cone(k, x0);
  if (nc.is_trivial())
  {
    throw Error(ErrorCode::NotOnBoundary, "x0 is an interior point");
  }
  if (!nc.lineality_basis.empty())
  {
    throw Error(ErrorCode::NotFullDimensional, "tangent cone has empty interior");
  }
  const Mat g = nc.generator_matrix();  // n x m
  const Eigen::Index m = g.cols();
  {
    // int T nonempty <=> some d has <g_i, d> <= -1 for every generator
    LinearProgram interior;
    interior.cost = Vec::Zero(n);
    interior.a_ub = g.transpose();
    interior.b_ub = Vec::Constant(m, -1.0);
    interior.free_vars.assign(static_cast<std::size_t>(n), true);
    if (solve_lp(interior).status == LpStatus::Infeasible)
    {
      throw Error(ErrorCode::NotFullDimensional, "tangent cone has empty interior");
    }
  }
  LinearProgram lp;
  lp.cost = Vec::Ones(m);
  lp.a_ub = g.transpose() * a * g;
  lp.b_ub = Vec::Constant(m, -1.0);
  const LpSolution sol = solve_lp(lp);
  AntResult out;
  if (sol.status == LpStatus::Optimal)
  {
    out.disjoint = false;
    out.witness = g * sol.x;
  }
  else if (sol.status != LpStatus::Infeasible)
  {
    throw Error(ErrorCode::NonConvergent, "ant_check: LP did not terminate");
  }
  return out;
}

StrongRegularity strong_regularity_check(const Map& f, const Vec& z0, const SrOptions& opts)
{
  const Eigen::Index n = z0.size();
  const Vec y0 = f(z0);
  const Rng root(opts.seed, 31);
  StrongRegularity out;
  int pass_run = 0, fail_run = 0;
  double r = opts.initial_radius;
  const auto count = static_cast<std::size_t>(opts.targets);
  const auto block = static_cast<std::size_t>(std::max(opts.block, 1));
  for (int level = 0; level < opts.max_radii; ++level, r *= 0.5)
  {
    const Rng level_rng = root.split(static_cast<std::uint64_t>(level));
    const Domain window = Domain::ball(z0, opts.window_factor * r);
    std::vector<Vec> ys(count);
    std::vector<std::vector<Vec>> sols(count);
    SrLevel lv;
    lv.radius = r;
    std::size_t done = 0;
    bool failed = false;
    while (done < count && !failed)
    {
      const std::size_t end = std::min(count, done + block);
      parallel_for(opts.exec, end - done, [&](std::size_t i) {
        const std::size_t t = done + i;
        Rng rng = level_rng.split(t);
        ys[t] = y0 + rng.in_ball(n, r);
        sols[t] = solve_local(f, ys[t], window, {z0}, rng.split(1), opts.solve);
      });
      for (std::size_t t = done; t < end; ++t)
      {
        lv.empty += sols[t].empty();
        lv.multiple += sols[t].size() > 1;
      }
      failed = lv.empty + lv.multiple > 0;
      done = end;
    }
    lv.evaluated = static_cast<int>(done);
    for (std::size_t t = 0; t + 1 < done; ++t)
    {
      if (sols[t].size() == 1 && sols[t + 1].size() == 1)
      {
        const double dy = (ys[t] - ys[t + 1]).norm();
        if (dy > 0.0)
        {
          lv.lipschitz = std::max(lv.lipschitz, (sols[t][0] - sols[t + 1][0]).norm() / dy);
        }
      }
    }
    lv.passed = !failed;
    out.levels.push_back(lv);
    pass_run = lv.passed ? pass_run + 1 : 0;
    fail_run = lv.passed ? 0 : fail_run + 1;
    if (pass_run == 2)
    {
      out.verdict = SrVerdict::Verified;
      out.neighborhood_radius = out.levels[out.levels.size() - 2].radius;
      out.inverse_lipschitz = std::max(out.levels[out.levels.size() - 2].lipschitz, lv.lipschitz);
      return out;
    }
    if (fail_run == 2)
    {
      out.verdict = SrVerdict::Refuted;
      return out;
    }
  }
  out.verdict = SrVerdict::Inconclusive;
  return out;
}

std::vector<std::string> theorem_tensions(const StabilityReport& r)
{
  std::vector<std::string> out;
  const bool bounded = r.aubin.verdict == AubinVerdict::BoundedEvidence;
  const SrVerdict sr = r.strong_regularity.verdict;
  const bool unit_index = r.index && std::abs(*r.index) == 1;
  if (bounded && r.discrete && !(unit_index && sr == SrVerdict::Verified))
  {
    out.emplace_back("THEOREM-TENSION: BoundedEvidence and discrete, but not (|index| = 1 and Verified)");
  }
  if (sr == SrVerdict::Verified && !bounded)
  {
    out.emplace_back("THEOREM-TENSION: Verified without BoundedEvidence");
  }
  if (sr == SrVerdict::Refuted && bounded)
  {
    out.emplace_back("THEOREM-TENSION: Refuted together with BoundedEvidence");
  }
  if (sr == SrVerdict::Verified && !(unit_index && r.discrete))
  {
    out.emplace_back("THEOREM-TENSION: Verified without |index| = 1 and discreteness");
  }
  if (r.ant_applicable && !r.ant.disjoint && sr == SrVerdict::Verified)
  {
    out.emplace_back("THEOREM-TENSION: Verified although A N_K(x0) meets int T_K(x0)");
  }
  return out;
}

StabilityReport equivalence_experiment(const GeneralizedEquation& ge, const PipelineOptions& opts)
{
  using clock = std::chrono::steady_clock;
  auto seconds_since = [](clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  };
  StabilityReport rep;
  rep.id = ge.id();
  rep.x0 = ge.x0();
  rep.y0 = ge.y0();

  auto t0 = clock::now();
  rep.z0 = canonical_point(ge);
  const NormalMap nm = ge.normal_map();
  const Map f = nm.as_map();
  rep.runtimes["canonical_point"] = seconds_since(t0);

  t0 = clock::now();
  const DiscretenessResult disc = discreteness_check(f, rep.z0, opts.discreteness_radius, opts.exec, opts.seed);
  rep.discrete = disc.isolated;
  rep.discreteness_witness = disc.nearest_other;
  rep.runtimes["discreteness"] = seconds_since(t0);

  t0 = clock::now();
  AubinOptions aopts = opts.aubin;
  aopts.exec = opts.exec;
  aopts.seed = splitmix64(opts.seed + 1);
  rep.aubin = aubin_estimate(ge, aopts);
  rep.runtimes["aubin"] = seconds_since(t0);

  t0 = clock::now();
  IndexOptions iopts = opts.index;
  iopts.degree.exec = opts.exec;
  iopts.degree.seed = splitmix64(opts.seed + 2);
  try
  {
    rep.index = index(f, rep.z0, iopts).value;
  }
  catch (const Error& e)
  {
    rep.index_error = e.what();
  }
  rep.runtimes["index"] = seconds_since(t0);

  t0 = clock::now();
  const Vec p0 = project(ge.set(), rep.z0);
  if (!is_polyhedral(ge.set()))
  {
    rep.ant_note = "set is not polyhedral";
  }
  else if ((rep.z0 - p0).norm() > 1e-12)
  {
    rep.ant_note = "canonical point lies outside the set";
  }
  else
  {
    const Mat jac = ge.phi().jacobian(ge.form() == GeForm::Normal ? p0 : Vec(rep.z0 - p0));
    Mat ahat = jac;
    bool ok = true;
    if (ge.form() == GeForm::Normal)
    {
      // N = I (z - Pi) + J Pi = J (J^{-1} (z - Pi) + Pi)
      Eigen::FullPivLU<Mat> lu(jac);
      ok = lu.isInvertible();
      if (ok)
      {
        ahat = lu.inverse();
      }
      else
      {
        rep.ant_note = "linearization is singular";
      }
    }
    if (ok)
    {
      try
      {
        rep.ant = ant_check(ahat, ge.set(), p0);
        rep.ant_applicable = true;
      }
      catch (const Error& e)
      {
        rep.ant_note = e.what();
      }
    }
  }
  rep.runtimes["ant"] = seconds_since(t0);

  t0 = clock::now();
  SrOptions sopts = opts.sr;
  sopts.exec = opts.exec;
  sopts.seed = splitmix64(opts.seed + 3);
  rep.strong_regularity = strong_regularity_check(f, rep.z0, sopts);
  rep.runtimes["strong_regularity"] = seconds_since(t0);

  rep.tensions = theorem_tensions(rep);
  return rep;
}

namespace
{

struct ActiveRows
{
  Mat a;
  Vec b;
};

std::optional<ActiveRows> polyhedral_rows(const ConvexSet& s)
{
  if (const auto* o = s.as<Orthant>())
  {
    return ActiveRows{-Mat::Identity(o->n, o->n), Vec::Zero(o->n)};
  }
  if (const auto* p = s.as<Polyhedron>())
  {
    return ActiveRows{p->a, p->b};
  }
  return std::nullopt;
}

ConvexSet halfline_cone(Eigen::Index k, Eigen::Index n)
{
  if (k == 0)
  {
    return ConvexSet::affine(Mat::Identity(n, n), Vec::Zero(n));
  }
  if (k == n)
  {
    return ConvexSet::orthant(n);
  }
  return ConvexSet::product({ConvexSet::orthant(k), ConvexSet::affine(Mat::Identity(n - k, n - k), Vec::Zero(n - k))});
}

Reduction polyhedral_reduction(const ActiveRows& rows, const Vec& xh)
{
  const Eigen::Index n = xh.size();
  std::vector<Eigen::Index> active;
  double radius = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < rows.a.rows(); ++i)
  {
    const double nrm = rows.a.row(i).norm();
    const double slack = rows.b(i) - rows.a.row(i).dot(xh);
    if (slack <= 1e-9 * std::max(1.0, nrm))
    {
      active.push_back(i);
    }
    else
    {
      radius = std::min(radius, 0.5 * slack / nrm);
    }
  }
  if (!std::isfinite(radius))
  {
    radius = 1.0;
  }
  Mat aa(static_cast<Eigen::Index>(active.size()), n);
  for (std::size_t i = 0; i < active.size(); ++i)
  {
    aa.row(static_cast<Eigen::Index>(i)) = rows.a.row(active[i]);
  }
  if (numerical_rank(aa) < aa.rows())
  {
    // Dependent active rows: translate to the tangent cone.
    Reduction red{"polyhedral-tangent", xh, radius, ConvexSet::polyhedron(aa, Vec::Zero(aa.rows()), Vec::Zero(n)),
                  [xh](const Vec& x) { return Vec(x - xh); }, [xh](const Vec& y) { return Vec(y + xh); },
                  [n](const Vec&) { return Mat(Mat::Identity(n, n)); }};
    return red;
  }
  // h(x) = (b_I - A_I x, x_J - xh_J) with J completing A_I to a basis.
  const Eigen::Index k = aa.rows();
  Mat hm(n, n);
  Vec hc(n);
  hm.topRows(k) = -aa;
  for (Eigen::Index i = 0; i < k; ++i)
  {
    hc(i) = rows.b(active[static_cast<std::size_t>(i)]);
  }
  Eigen::Index filled = k;
  for (Eigen::Index j = 0; j < n && filled < n; ++j)
  {
    Mat trial = hm.topRows(filled + 1);
    trial.row(filled) = Vec::Unit(n, j).transpose();
    if (numerical_rank(trial) == filled + 1)
    {
      hm.row(filled) = Vec::Unit(n, j).transpose();
      hc(filled) = -xh(j);
      ++filled;
    }
  }
  const Mat hinv = hm.inverse();
  Reduction red{"polyhedral", xh, radius, halfline_cone(k, n),
                [hm, hc](const Vec& x) { return Vec(hm * x + hc); },
                [hinv, hc](const Vec& y) { return Vec(hinv * (y - hc)); },
                [hm](const Vec&) { return hm; }};
  return red;
}

Reduction soc_reduction(Eigen::Index n, const Vec& xh)
{
  const Vec sh = xh.head(n - 1);
  const double th = xh(n - 1);
  const double sn = sh.norm();
  if (sn < 1e-12 && std::abs(th) < 1e-12)
  {
    return Reduction{"cone-identity", xh, 1.0, ConvexSet::soc(n), [](const Vec& x) { return x; },
                     [](const Vec& y) { return y; }, [n](const Vec&) { return Mat(Mat::Identity(n, n)); }};
  }
  if (sn < th - 1e-12)
  {
    const double radius = 0.5 * (th - sn) / std::sqrt(2.0);
    return Reduction{"interior", xh, radius, ConvexSet::affine(Mat::Identity(n, n), Vec::Zero(n)),
                     [xh](const Vec& x) { return Vec(x - xh); }, [xh](const Vec& y) { return Vec(y + xh); },
                     [n](const Vec&) { return Mat(Mat::Identity(n, n)); }};
  }
  if (std::abs(sn - th) > 1e-9 * std::max(1.0, th))
  {
    throw Error(ErrorCode::NotInSet, "reduction base point is not in the cone");
  }
  // h(s, t) = (t - |s|, s - sh), C = R_+ x R^{n-1}
  auto h = [sh, n](const Vec& x) {
    Vec y(n);
    y(0) = x(n - 1) - x.head(n - 1).norm();
    y.tail(n - 1) = x.head(n - 1) - sh;
    return y;
  };
  auto h_inv = [sh, n](const Vec& y) {
    Vec x(n);
    x.head(n - 1) = sh + y.tail(n - 1);
    x(n - 1) = y(0) + x.head(n - 1).norm();
    return x;
  };
  auto jac = [n](const Vec& x) {
    const Vec s = x.head(n - 1);
    Mat j = Mat::Zero(n, n);
    j.block(0, 0, 1, n - 1) = -(s / s.norm()).transpose();
    j(0, n - 1) = 1.0;
    j.block(1, 0, n - 1, n - 1) = Mat::Identity(n - 1, n - 1);
    return j;
  };
  return Reduction{"soc-boundary", xh, 0.5 * sn, halfline_cone(1, n), h, h_inv, jac};
}

}  // namespace

Reduction make_reduction(const ConvexSet& s, const Vec& x_hat)
{
  require_dim(x_hat, s.dim(), "reduction base point");
  if (!contains(s, x_hat))
  {
    throw Error(ErrorCode::NotInSet, "reduction base point is not in the set");
  }
  if (const auto rows = polyhedral_rows(s))
  {
    return polyhedral_reduction(*rows, x_hat);
  }
  if (const auto* soc = s.as<SecondOrderCone>())
  {
    if (soc->n < 2)
    {
      return polyhedral_reduction(ActiveRows{-Mat::Identity(1, 1), Vec::Zero(1)}, x_hat);
    }
    return soc_reduction(soc->n, x_hat);
  }
  throw Error(ErrorCode::UnsupportedSet, "reduction is implemented for polyhedra and second-order cones");
}

ReductionReport reduction_demo(const ConvexSet& s, const Vec& x_hat, int samples, std::uint64_t seed)
{
  const Reduction red = make_reduction(s, x_hat);
  const Eigen::Index n = x_hat.size();
  constexpr double tol = 1e-8;
  Rng rng(seed, 41);
  ReductionReport rep;
  rep.kind = red.kind;
  rep.samples = samples;
  for (int i = 0; i < samples; ++i)
  {
    Vec x = x_hat + rng.in_ball(n, red.radius);
    if (i % 2 == 1)
    {
      x = project(s, x);
    }
    // membership transfer
    const Vec hx = red.h(x);
    const double vs = violation(s, x), vc = violation(red.cone, hx);
    if ((vs <= 1e-10 && vc > tol) || (vc <= 1e-10 && vs > tol))
    {
      ++rep.membership_mismatches;
    }
    rep.max_roundtrip_error = std::max({rep.max_roundtrip_error, (red.h(red.h_inv(hx)) - hx).norm(),
                                        (red.h_inv(hx) - x).norm()});
    // Pi_C(g(x)) = h(Pi_S(x))
    const Vec p = project(s, x);
    const Mat grad = red.jacobian(p).transpose();
    Eigen::FullPivLU<Mat> lu(grad);
    if (!lu.isInvertible())
    {
      throw Error(ErrorCode::JacobianSingular, "reduction Jacobian is singular on U");
    }
    const Vec g = lu.solve(Vec(x - p)) + red.h(p);
    rep.max_commute_error = std::max(rep.max_commute_error, (project(red.cone, g) - red.h(p)).norm());
  }
  rep.passed = rep.membership_mismatches == 0 && rep.max_roundtrip_error <= tol && rep.max_commute_error <= tol;
  return rep;
}

}  // namespace nmlab
