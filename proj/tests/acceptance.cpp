// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion ...]   (default: all nine)

#include "nmlab/battery.hpp"
#include "nmlab/degree.hpp"
#include "nmlab/lab.hpp"
#include "nmlab/polytope.hpp"
#include "nmlab/stability.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>
#include <string>

using namespace nmlab;

namespace
{

using Clock = std::chrono::steady_clock;
const double kInf = std::numeric_limits<double>::infinity();

struct Outcome
{
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Map linear(const Mat& a)
{
  return Map{a.rows(), [a](const Vec& x) { return Vec(a * x); }};
}

Vec vec2(double a, double b)
{
  Vec v(2);
  v << a, b;
  return v;
}

// ---------------------------------------------------------------------------
// 1. projection suite

struct ProjStats
{
  long points = 0;
  double idem = 0, nonexp = 0, member = 0, vi = 0, normal = 0;
};

void projection_family(const ConvexSet& k, int points, Rng& rng, ProjStats& st)
{
  const Eigen::Index n = k.dim();
  std::vector<Vec> members;
  for (int i = 0; i < 64; ++i)
  {
    members.push_back(project(k, rng.normal_vec(n) * rng.uniform(0.1, 4.0)));
  }
  const bool structural = k.as<Orthant>() || k.as<Polyhedron>();
  for (int i = 0; i < points; ++i)
  {
    const Vec z = rng.normal_vec(n) * rng.uniform(0.1, 5.0);
    const Vec zp = rng.normal_vec(n) * rng.uniform(0.1, 5.0);
    const Vec x = project(k, z);
    const Vec xp = project(k, zp);
    st.member = std::max(st.member, violation(k, x));
    st.idem = std::max(st.idem, (project(k, x) - x).norm());
    st.nonexp = std::max(st.nonexp, (x - xp).norm() - (z - zp).norm());
    for (int s = 0; s < 8; ++s)
    {
      const Vec& y = members[static_cast<std::size_t>(rng.uniform_int(0, 63))];
      st.vi = std::max(st.vi, (z - x).dot(y - x));
    }
    // Pi(x + u) = x for u in N_K(x): cone generators for polyhedral sets, the
    // closed-form normal cone of the SOC, and the residual z - x throughout.
    Vec u = rng.uniform(0.0, 3.0) * (z - x);
    if (k.as<SecondOrderCone>())
    {
      u += random_normal(rng, k, x, 2.0);
    }
    else if (structural)
    {
      const ConeRep nc = normal_cone(k, x);
      for (const Vec& g : nc.generators)
      {
        u += rng.uniform(0.0, 2.0) * g;
      }
      for (const Vec& l : nc.lineality_basis)
      {
        u += rng.normal() * l;
      }
    }
    st.normal = std::max(st.normal, (project(k, x + u) - x).norm());
    ++st.points;
  }
}

Outcome criterion_projection()
{
  Rng rng(1001);
  struct Fam
  {
    std::string name;
    std::vector<ConvexSet> sets;
  };
  std::vector<Fam> fams;
  fams.push_back({"orthant", {ConvexSet::orthant(1), ConvexSet::orthant(2), ConvexSet::orthant(3), ConvexSet::orthant(4)}});
  {
    Fam f{"polyhedron", {}};
    for (int i = 0; i < 10; ++i)
    {
      const Eigen::Index n = 2 + i % 3;
      // bounded and unbounded draws, up to 20 rows
      const int m = rng.uniform_int(static_cast<int>(n) + 1, 20);
      Mat a(m, n);
      Vec b(m);
      for (int r = 0; r < m; ++r)
      {
        a.row(r) = rng.unit_vec(n).transpose() * rng.uniform(0.5, 2.0);
        b(r) = rng.uniform(-0.2, 2.0);
      }
      f.sets.push_back(ConvexSet::polyhedron(a, b));
    }
    fams.push_back(f);
  }
  fams.push_back({"soc", {ConvexSet::soc(2), ConvexSet::soc(3), ConvexSet::soc(4), ConvexSet::soc(5)}});
  for (const double p : {1.5, 2.0, 3.0, kInf})
  {
    fams.push_back({fmt("porder p=%g", p), {ConvexSet::porder(2, p), ConvexSet::porder(3, p), ConvexSet::porder(4, p)}});
  }
  fams.push_back({"psd", {ConvexSet::psd(1), ConvexSet::psd(2), ConvexSet::psd(3)}});

  bool ok = true;
  std::string worst;
  for (const Fam& f : fams)
  {
    ProjStats st;
    const int per = (10000 + static_cast<int>(f.sets.size()) - 1) / static_cast<int>(f.sets.size());
    for (const ConvexSet& k : f.sets)
    {
      projection_family(k, per, rng, st);
    }
    const bool fam_ok = st.points >= 10000 && st.idem <= 1e-10 && st.nonexp <= 1e-12 && st.member <= 1e-9 &&
                        st.vi <= 1e-8 && st.normal <= 1e-9;
    if (!fam_ok)
    {
      worst += fmt(" [%s: idem %.1e nonexp %.1e member %.1e vi %.1e normal %.1e]", f.name.c_str(), st.idem, st.nonexp,
                   st.member, st.vi, st.normal);
    }
    ok = ok && fam_ok;
  }
  return {ok, fmt("%zu families x 10^4 points", fams.size()) + worst};
}

// ---------------------------------------------------------------------------
// 2. degree axioms

Outcome criterion_degree()
{
  Rng rng(1002);
  int linear_ok = 0;
  for (int trial = 0; trial < 100; ++trial)
  {
    const Eigen::Index n = 1 + trial % 4;
    Mat a(n, n);
    do
    {
      for (Eigen::Index i = 0; i < n * n; ++i)
      {
        a.data()[i] = rng.normal();
      }
    } while (std::abs(a.determinant()) < 1e-2);
    DegreeOptions o;
    o.seed = static_cast<std::uint64_t>(trial);
    o.method = DegreeMethod::RegularSum;
    const DegreeResult r =
      degree(linear(a), Domain::box(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0)), Vec::Zero(n), o);
    linear_ok += r.value == (a.determinant() > 0 ? 1 : -1);
  }

  const Map square{2, [](const Vec& x) { return vec2(x(0) * x(0) - x(1) * x(1), 2 * x(0) * x(1)); }};
  const int square_index = index(square, Vec::Zero(2)).value;

  int agree = 0, cases = 0;
  for (int trial = 0; trial < 12; ++trial, ++cases)
  {
    Map f;
    if (trial % 3 == 0)
    {
      Mat a(2, 2);
      a << rng.normal(), rng.normal(), rng.normal(), rng.normal();
      f = linear(a);
    }
    else if (trial % 3 == 1)
    {
      f = square;
    }
    else
    {
      Mat a(2, 2), b(2, 2);
      a << rng.normal(), rng.normal(), rng.normal(), rng.normal();
      b << rng.normal(), rng.normal(), rng.normal(), rng.normal();
      f = NormalMap::matrix(a, b, ConvexSet::orthant(2)).as_map();
    }
    const Domain dom = trial % 2 ? Domain::ball(rng.normal_vec(2) * 0.2, 1.0) : Domain::box(vec2(-1, -0.8), vec2(0.9, 1.1));
    const Vec y = 0.3 * rng.normal_vec(2);
    DegreeOptions o;
    o.seed = static_cast<std::uint64_t>(trial);
    o.method = DegreeMethod::RegularSum;
    const int a = degree(f, dom, y, o).value;
    o.method = DegreeMethod::Winding2D;
    agree += a == degree(f, dom, y, o).value;
  }
  for (int trial = 0; trial < 8; ++trial, ++cases)
  {
    const double c = rng.uniform(-0.5, 0.5);
    const Map f{1, [c](const Vec& x) { return Vec(x.array().cube() - 0.5 * x.array() + c); }};
    const Domain dom = Domain::box(Vec::Constant(1, rng.uniform(-1.5, -0.6)), Vec::Constant(1, rng.uniform(0.6, 1.5)));
    DegreeOptions o;
    o.seed = static_cast<std::uint64_t>(trial);
    o.method = DegreeMethod::RegularSum;
    const int a = degree(f, dom, Vec::Zero(1), o).value;
    o.method = DegreeMethod::SignChange1D;
    agree += a == degree(f, dom, Vec::Zero(1), o).value;
  }

  // Translation identity ind(f, x0) = ind(f(. + x') - y', x0 - x') on maps
  // with known index.
  int trans_ok = 0, trans = 0;
  for (int trial = 0; trial < 6; ++trial, ++trans)
  {
    const Eigen::Index n = 2 + trial % 2;
    const Mat ahat = random_positive_part(rng, n, 1.0, 0.5);
    const Mat b = random_well_conditioned(rng, n);
    const Map f = NormalMap::matrix(b * ahat, b, trial % 2 ? ConvexSet::soc(n) : ConvexSet::orthant(n)).as_map();
    IndexOptions o;
    o.degree.seed = static_cast<std::uint64_t>(trial);
    const IndexResult r = index(f, Vec::Zero(n), o);
    trans_ok += r.translation_checked && r.translation_ok && r.value == (b.determinant() > 0 ? 1 : -1);
  }
  {
    const IndexResult r = index(square, Vec::Zero(2));
    trans_ok += r.translation_checked && r.translation_ok;
    ++trans;
  }

  const bool ok = linear_ok == 100 && square_index == 2 && agree == 20 && cases == 20 && trans_ok == trans;
  return {ok, fmt("linear %d/100, complex squaring index %d, agreement %d/%d, translation %d/%d", linear_ok,
                  square_index, agree, cases, trans_ok, trans)};
}

// ---------------------------------------------------------------------------
// 3. matrix-form battery

struct MatrixVerdict
{
  bool discrete = false;
  std::optional<int> index;
  std::string index_error;
  SrVerdict sr = SrVerdict::Inconclusive;
};

MatrixVerdict analyse_matrix(const MatrixInstance& inst, std::uint64_t seed, bool with_index = true)
{
  MatrixVerdict out;
  const Map f = inst.map.as_map();
  out.discrete = discreteness_check(f, inst.x0, 0.1, Exec::Parallel, seed).isolated;
  if (with_index && out.discrete)
  {
    IndexOptions o;
    o.degree.seed = splitmix64(seed + 1);
    try
    {
      out.index = index(f, inst.x0, o).value;
    }
    catch (const Error& e)
    {
      out.index_error = std::string(to_string(e.code()));
    }
  }
  SrOptions so;
  so.seed = splitmix64(seed + 2);
  out.sr = strong_regularity_check(f, inst.x0, so).verdict;
  return out;
}

Outcome criterion_matrix_battery()
{
  const auto inj = injective_matrix_battery(1003, 30);
  int verified = 0, unit = 0, both = 0;
  std::string bad;
  for (std::size_t i = 0; i < inj.size(); ++i)
  {
    const MatrixVerdict v = analyse_matrix(inj[i], 3000 + i);
    const bool is_unit = v.index && std::abs(*v.index) == 1;
    verified += v.sr == SrVerdict::Verified;
    unit += is_unit;
    both += v.sr == SrVerdict::Verified && is_unit;
    if (!(v.sr == SrVerdict::Verified && is_unit))
    {
      bad += " " + inj[i].id + "(" + std::string(to_string(v.sr)) + ", index " +
             (v.index ? std::to_string(*v.index) : v.index_error) + ")";
    }
  }
  int failures_ok = 0;
  const auto fails = constructed_failures();
  for (std::size_t i = 0; i < fails.size(); ++i)
  {
    const MatrixVerdict v = analyse_matrix(fails[i], 4000 + i);
    const bool degenerate = !v.discrete || (v.index && *v.index == 0) || v.index_error == "NotIsolated";
    const bool ok = degenerate && v.sr != SrVerdict::Verified;
    failures_ok += ok;
    if (!ok)
    {
      bad += " " + fails[i].id + "(" + std::string(to_string(v.sr)) + ", discrete " + (v.discrete ? "yes" : "no") +
             ", index " + (v.index ? std::to_string(*v.index) : v.index_error) + ")";
    }
  }
  const bool ok = both == 30 && failures_ok == static_cast<int>(fails.size());
  return {ok, fmt("Verified %d/30, |index|=1 %d/30, both %d/30; constructed failures handled %d/%zu", verified, unit,
                  both, failures_ok, fails.size()) +
                (bad.empty() ? "" : ";" + bad)};
}

// ---------------------------------------------------------------------------
// 4. dimension-drop audit

Outcome criterion_dimlem()
{
  Rng rng(7);
  int audits = 0, no_witness = 0, invalid = 0, other = 0;
  for (int trial = 0; trial < 100; ++trial)
  {
    const ConvexSet s = random_polytope(rng, 3);
    const FaceLattice lat = face_lattice(s);
    for (const Face& f : lat.faces)
    {
      if (f.dim > 1)
      {
        continue;
      }
      std::vector<Vec> normals = f.normal_cone.generators;
      normals.push_back(Vec::Zero(3));
      for (const Vec& u0 : normals)
      {
        if (!in_relative_boundary(f.normal_cone, u0))
        {
          continue;
        }
        ++audits;
        try
        {
          const DimlemWitness w = dimlem_audit(lat, f.witness, u0);
          bool valid = !w.x_seq.empty() && (w.x_seq.back() - f.witness).norm() < 1e-6 &&
                       (w.u_seq.back() - u0).norm() < 1e-6;
          for (std::size_t i = 0; i < w.x_seq.size() && valid; ++i)
          {
            valid = w.dims[i] < w.base_dim && normal_cone_dim(s, w.x_seq[i]) == w.dims[i] &&
                    (project(s, w.x_seq[i] + w.u_seq[i]) - w.x_seq[i]).norm() <= 1e-9;
          }
          invalid += !valid;
        }
        catch (const Error& e)
        {
          (e.code() == ErrorCode::NoWitness ? no_witness : other) += 1;
        }
      }
    }
  }
  const bool ok = no_witness == 0 && invalid == 0 && other == 0 && audits > 0;
  return {ok, fmt("%d audits over 100 polytopes: NoWitness %d, invalid sequences %d, other errors %d", audits,
                  no_witness, invalid, other)};
}

// ---------------------------------------------------------------------------
// 5. ANT consistency

Outcome criterion_ant()
{
  const auto viol = ant_violating_battery(1005, 20);
  const auto sat = ant_satisfying_battery(1006, 20);
  int viol_verified = 0, sat_verified = 0;
  for (std::size_t i = 0; i < viol.size(); ++i)
  {
    SrOptions o;
    o.seed = 5000 + i;
    viol_verified += strong_regularity_check(viol[i].map.as_map(), viol[i].x0, o).verdict == SrVerdict::Verified;
  }
  for (std::size_t i = 0; i < sat.size(); ++i)
  {
    SrOptions o;
    o.seed = 6000 + i;
    sat_verified += strong_regularity_check(sat[i].map.as_map(), sat[i].x0, o).verdict == SrVerdict::Verified;
  }
  const bool ok = viol.size() == 20 && viol_verified == 0 && sat_verified >= 15;
  return {ok, fmt("ANT-violating Verified %d/20 (need 0); ANT-satisfying Verified %d/20 (need >= 15)", viol_verified,
                  sat_verified)};
}

// ---------------------------------------------------------------------------
// 6 and 9. monotone pipeline battery and determinism

struct PipelineRun
{
  std::vector<GeneralizedEquation> battery;
  PipelineOptions opts;
  Json report_serial;
  bool ran = false;
};

PipelineRun& pipeline_run()
{
  static PipelineRun run;
  if (!run.ran)
  {
    run.battery = monotone_battery(1006, 50);
    run.opts.seed = 1006;
    const auto t0 = Clock::now();
    const auto reports = run_battery(run.battery, run.opts, 1);
    run.report_serial = battery_report(reports, run.opts, run.opts.seed, 1, seconds_since(t0));
    run.ran = true;
  }
  return run;
}

Outcome criterion_pipeline()
{
  PipelineRun& run = pipeline_run();
  int tensions = 0, verified = 0, bounded = 0, implication_failures = 0;
  for (const Json& r : run.report_serial.at("instances"))
  {
    tensions += static_cast<int>(r.at("tensions").size());
    const bool is_verified = r.at("strong_regularity").at("verdict") == "Verified";
    const bool is_bounded = r.at("aubin").at("verdict") == "BoundedEvidence";
    const bool unit = !r.at("index").is_null() && std::abs(r.at("index").get<int>()) == 1;
    verified += is_verified;
    bounded += is_bounded;
    implication_failures += (is_bounded && r.at("discrete").get<bool>() && !(unit && is_verified)) ||
                            (is_verified && !is_bounded);
  }

  const auto hand = hand_instances();
  const auto hand_reports = run_battery(hand, run.opts, 1);
  const StabilityReport& id = hand_reports[0];
  const StabilityReport& neg = hand_reports[1];
  const bool id_ok = id.discrete && id.index == 1 && id.strong_regularity.verdict == SrVerdict::Verified &&
                     id.aubin.verdict == AubinVerdict::BoundedEvidence && id.ant_applicable && id.ant.disjoint &&
                     id.tensions.empty();
  const bool neg_ok = neg.discrete && neg.index == 0 && neg.strong_regularity.verdict == SrVerdict::Refuted &&
                      neg.aubin.verdict == AubinVerdict::EmptyValueDetected && neg.ant_applicable &&
                      !neg.ant.disjoint && neg.tensions.empty();
  const bool ok = tensions == 0 && implication_failures == 0 && id_ok && neg_ok;
  return {ok, fmt("50 instances: tensions %d, implication failures %d, Verified %d/50, BoundedEvidence %d/50; "
                  "hand phi=id %s, phi=-x %s",
                  tensions, implication_failures, verified, bounded, id_ok ? "ok" : "MISMATCH",
                  neg_ok ? "ok" : "MISMATCH")};
}

Outcome criterion_determinism()
{
  PipelineRun& run = pipeline_run();
  const auto t0 = Clock::now();
  const auto reports = run_battery(run.battery, run.opts, 8);
  const Json parallel = battery_report(reports, run.opts, run.opts.seed, 8, seconds_since(t0));
  const std::string a = without_timestamp(run.report_serial).dump(2);
  const std::string b = without_timestamp(parallel).dump(2);
  const bool timestamps_differ = run.report_serial.at("timestamp") != parallel.at("timestamp");
  return {a == b, fmt("1 job vs 8 jobs: %zu vs %zu bytes, %s (timestamp objects %s)", a.size(), b.size(),
                      a == b ? "identical" : "DIFFERENT", timestamps_differ ? "differ" : "equal")};
}

// ---------------------------------------------------------------------------
// 7. strictly stationary perturbations

Outcome criterion_homotopy()
{
  const auto battery = homotopy_battery(1007, 10);
  int equal = 0, certified = 0;
  std::string bad;
  for (std::size_t i = 0; i < battery.size(); ++i)
  {
    IndexOptions o;
    o.degree.seed = 7000 + i;
    const HomotopyCheck h = homotopy_index_check(battery[i].map, battery[i].g, battery[i].x0, o);
    bool decreasing = h.certificate.passed;
    for (std::size_t k = 1; k < h.certificate.ratios.size(); ++k)
    {
      decreasing = decreasing && h.certificate.ratios[k] < h.certificate.ratios[k - 1];
    }
    certified += decreasing;
    equal += h.precondition_ok && h.equal;
    if (!(h.precondition_ok && h.equal && decreasing))
    {
      bad += " " + battery[i].id + "(" + h.reason + fmt(", %d vs %d)", h.index_map, h.index_perturbed);
    }
  }
  const bool ok = equal == 10 && certified == 10;
  return {ok, fmt("index equal %d/10, decreasing certificates %d/10", equal, certified) + (bad.empty() ? "" : ";" + bad)};
}

// ---------------------------------------------------------------------------
// 8. reduction demo

Outcome criterion_reduction()
{
  struct Case
  {
    const char* name;
    ConvexSet set;
    Vec x_hat;
  };
  Vec soc_boundary(3);
  soc_boundary << 0.6, 0.8, 1.0;
  const std::vector<Case> cases = {{"square edge", ConvexSet::unit_cube(2), vec2(0.5, 0.0)},
                                   {"SOC boundary", ConvexSet::soc(3), soc_boundary},
                                   {"SOC apex", ConvexSet::soc(3), Vec::Zero(3)}};
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < cases.size(); ++i)
  {
    const ReductionReport r = reduction_demo(cases[i].set, cases[i].x_hat, 1000, 8000 + i);
    const bool c = r.passed && r.samples == 1000 && r.membership_mismatches == 0 && r.max_roundtrip_error <= 1e-8 &&
                   r.max_commute_error <= 1e-8;
    ok = ok && c;
    detail += fmt("%s%s %s (roundtrip %.1e, commute %.1e)", i ? "; " : "", cases[i].name, c ? "ok" : "FAILED",
                  r.max_roundtrip_error, r.max_commute_error);
  }
  return {ok, detail};
}

struct Criterion
{
  int id;
  const char* name;
  double limit_seconds;  // <= 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv)
{
  const std::vector<Criterion> all = {
    {1, "projection suite", 60, criterion_projection},
    {2, "degree axioms", 120, criterion_degree},
    {3, "matrix-form battery", 600, criterion_matrix_battery},
    {4, "dimension-drop audit", 300, criterion_dimlem},
    {5, "ANT consistency", 300, criterion_ant},
    {6, "stability pipeline battery", 600, criterion_pipeline},
    {7, "stationary perturbations preserve the index", 0, criterion_homotopy},
    {8, "reduction demo", 30, criterion_reduction},
    {9, "determinism across job counts", 0, criterion_determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i)
  {
    wanted.insert(std::atoi(argv[i]));
  }
  int failed = 0;
  for (const Criterion& c : all)
  {
    if (!wanted.empty() && !wanted.count(c.id))
    {
      continue;
    }
    const auto t0 = Clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception& e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    const bool in_time = c.limit_seconds <= 0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::string limit = c.limit_seconds > 0 ? fmt(" / limit %.0f s", c.limit_seconds) : "";
    std::printf("[%s] %d %s: %s (%.1f s%s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                limit.c_str(), in_time ? "" : " RUNTIME EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%s: %d criterion(s) failed\n", failed ? "FAILED" : "OK", failed);
  return failed ? 1 : 0;
}
