// normalmap_lab: command-line front end.
//
// Exit status: 0 success, 1 theorem tension or invariant failure, 2 input error.
// JSON goes to --out (written atomically) or to standard output; the
// human-readable summary goes to standard output, or to standard error when
// standard output carries the JSON.

#include "nmlab/battery.hpp"
#include "nmlab/degree.hpp"
#include "nmlab/json_io.hpp"
#include "nmlab/lab.hpp"
#include "nmlab/polytope.hpp"
#include "nmlab/stability.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace nmlab;

namespace
{

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Common
{
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;
};

class Output
{
public:
  explicit Output(const Common& c) : path_(c.out) {}

  std::ostream& summary() { return path_.empty() ? std::cerr : std::cout; }

  void emit(const Json& j)
  {
    const std::string text = j.dump(2) + "\n";
    if (path_.empty())
    {
      std::cout << text;
    }
    else
    {
      write_file_atomic(path_, text);
    }
  }

private:
  std::string path_;
};

int resolve_jobs(int flag)
{
  if (flag > 0)
  {
    return flag;
  }
  if (const char* env = std::getenv("NORMALMAP_LAB_JOBS"))
  {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1024)
    {
      throw UsageError("NORMALMAP_LAB_JOBS must be a positive integer, got '" + std::string(env) + "'");
    }
    return static_cast<int>(v);
  }
  return max_threads();
}

Vec to_vec(const std::vector<double>& xs)
{
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Json envelope(const char* command, const Common& c, Json result, double seconds)
{
  Json j;
  j["tool"] = "normalmap_lab";
  j["command"] = command;
  j["rng"] = Rng::kAlgorithm;
  j["seed"] = c.seed;
  j["result"] = std::move(result);
  j["timestamp"] = {{"wall_seconds", seconds}};
  return j;
}

double since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// A map file holds either a normal map ({"form": ...}) or a smooth function.
Map load_map(const std::string& path)
{
  const Json j = read_json_file(path);
  if (j.is_object() && j.contains("form"))
  {
    return normal_map_from_json(j).as_map();
  }
  const SmoothFn f = smooth_from_json(j);
  if (f.in_dim() != f.out_dim())
  {
    throw Error(ErrorCode::DimensionMismatch, path + ": the map must be square");
  }
  return as_map(f);
}

DegreeMethod parse_method(const std::string& s)
{
  if (s == "auto")
  {
    return DegreeMethod::Auto;
  }
  if (s == "regular-sum")
  {
    return DegreeMethod::RegularSum;
  }
  if (s == "winding")
  {
    return DegreeMethod::Winding2D;
  }
  if (s == "sign-change")
  {
    return DegreeMethod::SignChange1D;
  }
  throw UsageError("--method must be auto, regular-sum, winding or sign-change");
}

Vec broadcast(const std::vector<double>& xs, Eigen::Index n, const char* flag)
{
  if (xs.size() == 1)
  {
    return Vec::Constant(n, xs[0]);
  }
  if (static_cast<Eigen::Index>(xs.size()) != n)
  {
    throw UsageError(std::string(flag) + " takes 1 or " + std::to_string(n) + " values");
  }
  return to_vec(xs);
}

std::vector<ConvexSet> audit_polytopes(int random, int dim, std::uint64_t seed, const std::string& file)
{
  std::vector<ConvexSet> out;
  if (!file.empty())
  {
    out.push_back(set_from_json(read_json_file(file)));
    if (!out.back().as<Polyhedron>())
    {
      throw UsageError("--polytope must describe a polyhedron or box");
    }
    return out;
  }
  if (random < 1 || dim < 1 || dim > 4)
  {
    throw UsageError("use --polytope FILE or --random N (N >= 1) with --dim in 1..4");
  }
  Rng rng(seed);
  for (int i = 0; i < random; ++i)
  {
    out.push_back(random_polytope(rng, dim));
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_project(const Common& c, const std::string& set_path, const std::vector<double>& point)
{
  const ConvexSet s = set_from_json(read_json_file(set_path));
  const Vec z = to_vec(point);
  require_dim(z, s.dim(), "--point");
  const Vec x = project(s, z);
  Json r;
  r["set"] = to_json(s);
  r["point"] = to_json(z);
  r["projection"] = to_json(x);
  r["residual"] = to_json(Vec(z - x));
  r["distance"] = (z - x).norm();
  r["membership_violation"] = violation(s, x);
  Output out(c);
  out.summary() << "projection at distance " << (z - x).norm() << "\n";
  out.emit(envelope("project", c, r, 0.0));
  return kOk;
}

int cmd_cone(const Common& c, const std::string& set_path, const std::vector<double>& point)
{
  const ConvexSet s = set_from_json(read_json_file(set_path));
  const Vec x = to_vec(point);
  require_dim(x, s.dim(), "--point");
  Json r;
  r["point"] = to_json(x);
  r["normal_cone_dim"] = normal_cone_dim(s, x);
  try
  {
    r["normal_cone"] = to_json(normal_cone(s, x));
    r["tangent_cone"] = to_json(tangent_cone(s, x));
  }
  catch (const Error& e)
  {
    if (e.code() != ErrorCode::UnsupportedStructure)
    {
      throw;
    }
    r["normal_cone"] = nullptr;
    r["tangent_cone"] = nullptr;
    r["note"] = "only the dimension is available for this set";
  }
  Output out(c);
  out.summary() << "dim N_K(x) = " << r["normal_cone_dim"].get<int>() << "\n";
  out.emit(envelope("cone", c, r, 0.0));
  return kOk;
}

int cmd_degree(const Common& c, const std::string& map_path, const std::vector<double>& box,
               const std::vector<double>& ball, const std::vector<double>& target, const std::string& method)
{
  const Map f = load_map(map_path);
  const Eigen::Index n = f.dim;
  Domain dom;
  if (!box.empty() == !ball.empty())
  {
    throw UsageError("give exactly one of --box and --ball");
  }
  if (!box.empty())
  {
    if (box.size() == 2)
    {
      dom = Domain::box(Vec::Constant(n, box[0]), Vec::Constant(n, box[1]));
    }
    else if (static_cast<Eigen::Index>(box.size()) == 2 * n)
    {
      dom = Domain::box(to_vec(std::vector<double>(box.begin(), box.begin() + n)),
                        to_vec(std::vector<double>(box.begin() + n, box.end())));
    }
    else
    {
      throw UsageError("--box takes 'lo hi' or n lower bounds followed by n upper bounds");
    }
  }
  else
  {
    if (static_cast<Eigen::Index>(ball.size()) != n + 1)
    {
      throw UsageError("--ball takes the n center coordinates followed by the radius");
    }
    dom = Domain::ball(to_vec(std::vector<double>(ball.begin(), ball.end() - 1)), ball.back());
  }
  DegreeOptions o;
  o.method = parse_method(method);
  o.seed = c.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const DegreeResult d = degree(f, dom, broadcast(target, n, "--target"), o);
  Output out(c);
  out.summary() << "degree = " << d.value << " (" << to_string(d.method) << ", boundary margin " << d.boundary_margin
                << ")\n";
  out.emit(envelope("degree", c, to_json(d), since(t0)));
  return kOk;
}

int cmd_index(const Common& c, const std::string& map_path, const std::vector<double>& point, double radius)
{
  const Map f = load_map(map_path);
  const Vec x0 = to_vec(point);
  require_dim(x0, f.dim, "--point");
  IndexOptions o;
  o.initial_radius = radius;
  o.degree.seed = c.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const IndexResult r = index(f, x0, o);
  Output out(c);
  out.summary() << "index = " << r.value << " (radius " << r.radius << ", translation check "
                << (r.translation_ok ? "ok" : "FAILED") << ")\n";
  out.emit(envelope("index", c, to_json(r), since(t0)));
  return r.translation_ok ? kOk : kFailure;
}

int cmd_dimlem(const Common& c, int random, int dim, const std::string& file)
{
  const auto polys = audit_polytopes(random, dim, c.seed, file);
  int audits = 0, no_witness = 0, witnessed = 0;
  Json failures = Json::array();
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t p = 0; p < polys.size(); ++p)
  {
    const FaceLattice lat = face_lattice(polys[p], Exec::Parallel);
    bool found_all = true;
    for (const Face& f : lat.faces)
    {
      if (f.dim > 1)
      {
        continue;
      }
      std::vector<Vec> normals = f.normal_cone.generators;
      normals.push_back(Vec::Zero(lat.set.dim()));
      for (const Vec& u0 : normals)
      {
        if (!in_relative_boundary(f.normal_cone, u0))
        {
          continue;
        }
        ++audits;
        try
        {
          dimlem_audit(lat, f.witness, u0);
        }
        catch (const Error& e)
        {
          if (e.code() != ErrorCode::NoWitness)
          {
            throw;
          }
          ++no_witness;
          found_all = false;
          failures.push_back({{"polytope", p}, {"x0", to_json(f.witness)}, {"u0", to_json(u0)}});
        }
      }
    }
    witnessed += found_all;
  }
  Json r;
  r["polytopes"] = polys.size();
  r["polytopes_fully_witnessed"] = witnessed;
  r["audits"] = audits;
  r["no_witness"] = no_witness;
  r["failures"] = failures;
  Output out(c);
  out.summary() << witnessed << "/" << polys.size() << " witnesses found (" << audits << " pairs, " << no_witness
                << " NoWitness)\n";
  out.emit(envelope("dimlem-audit", c, r, since(t0)));
  return no_witness == 0 ? kOk : kFailure;
}

int cmd_asplund(const Common& c, int random, int dim, const std::string& file, int r_param, double eps)
{
  const auto polys = audit_polytopes(random, dim, c.seed, file);
  int extreme = 0, exposed_within = 0, exhausted = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const ConvexSet& poly : polys)
  {
    const FaceLattice lat = face_lattice(poly, Exec::Parallel);
    for (const Face& f : lat.faces)
    {
      for (const Vec& g : f.normal_cone.generators)
      {
        if (!classify_normal(lat, g, r_param).is_r_extreme)
        {
          continue;
        }
        ++extreme;
        try
        {
          exposed_within += asplund_audit(lat, g, r_param, eps).distance <= eps;
        }
        catch (const Error& e)
        {
          if (e.code() != ErrorCode::SearchExhausted)
          {
            throw;
          }
          ++exhausted;
        }
      }
    }
  }
  Json res;
  res["polytopes"] = polys.size();
  res["r"] = r_param;
  res["eps"] = eps;
  res["r_extreme_normals"] = extreme;
  res["exposed_within_eps"] = exposed_within;
  res["search_exhausted"] = exhausted;
  Output out(c);
  out.summary() << exposed_within << "/" << extreme << " r-extreme normals have an r-exposed normal within " << eps
                << "\n";
  out.emit(envelope("asplund-audit", c, res, since(t0)));
  return exposed_within == extreme ? kOk : kFailure;
}

int run_reports(const char* command, const Common& c, const std::vector<GeneralizedEquation>& battery,
                const PipelineOptions& opts, const std::string& out_path, const std::string& csv_path)
{
  const int jobs = resolve_jobs(c.jobs);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<StabilityReport> reports;
  if (battery.size() == 1)
  {
    // a single instance parallelizes inside the pipeline instead
    set_threads(jobs);
    PipelineOptions p = opts;
    p.exec = jobs > 1 ? Exec::Parallel : Exec::Serial;
    p.seed = splitmix64(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    reports.push_back(equivalence_experiment(battery[0], p));
  }
  else
  {
    reports = run_battery(battery, opts, jobs);
  }
  Json doc = battery_report(reports, opts, opts.seed, jobs, since(t0));
  doc["command"] = command;
  Common target = c;
  target.out = out_path;
  Output out(target);
  const Json& s = doc["summary"];
  out.summary() << s["instances"].get<int>() << " instance(s): " << s["verified"].get<int>() << " Verified, "
                << s["refuted"].get<int>() << " Refuted, " << s["inconclusive"].get<int>() << " Inconclusive; "
                << s["tensions"].get<int>() << " theorem tension(s)\n";
  for (const StabilityReport& r : reports)
  {
    for (const std::string& t : r.tensions)
    {
      out.summary() << "THEOREM-TENSION " << r.id << ": " << t << "\n";
    }
  }
  out.emit(doc);
  if (!csv_path.empty())
  {
    if (out_path.empty())
    {
      throw UsageError("--csv needs the report written to a file (--out or output.report)");
    }
    write_file_atomic(csv_path, plotdata_csv({out_path}));
  }
  return tension_count(reports) == 0 ? kOk : kFailure;
}

int cmd_stability(const Common& c, const std::string& instance_path)
{
  const GeneralizedEquation ge = ge_from_json(read_json_file(instance_path));
  PipelineOptions opts;
  opts.seed = c.seed;
  return run_reports("stability", c, {ge}, opts, c.out, "");
}

int cmd_equivalence(const Common& c, const std::string& scenario_path, const std::string& csv)
{
  const Scenario s = scenario_from_json(read_json_file(scenario_path));
  Common cc = c;
  cc.seed = s.seed;
  const std::string out_path = c.out.empty() ? s.report_path : c.out;
  return run_reports("equivalence", cc, s.battery, s.pipeline, out_path, csv.empty() ? s.csv_path : csv);
}

int cmd_reduce(const Common& c, const std::string& set_path, const std::vector<double>& point, int samples)
{
  const ConvexSet s = set_from_json(read_json_file(set_path));
  const Vec x = to_vec(point);
  require_dim(x, s.dim(), "--point");
  if (samples < 1)
  {
    throw UsageError("--samples must be positive");
  }
  const ReductionReport r = reduction_demo(s, x, samples, c.seed);
  Output out(c);
  out.summary() << "reduction " << r.kind << ": " << (r.passed ? "passed" : "FAILED") << " (roundtrip "
                << r.max_roundtrip_error << ", commutation " << r.max_commute_error << ")\n";
  out.emit(envelope("reduce", c, to_json(r), 0.0));
  return r.passed ? kOk : kFailure;
}

int cmd_selftest(const Common& c)
{
  Json checks = Json::array();
  bool all = true;
  auto record = [&](const char* name, bool ok) {
    checks.push_back({{"name", name}, {"passed", ok}});
    all = all && ok;
  };
  const auto t0 = std::chrono::steady_clock::now();
  Vec z(2);
  z << -1, 2;
  record("orthant projection", (project(ConvexSet::orthant(2), z) - Vec(Vec::Unit(2, 1) * 2)).norm() < 1e-15);
  Vec w(3), expect(3);
  w << 3, 4, 0;
  expect << 1.5, 2.0, 2.5;
  record("second-order cone projection", (project(ConvexSet::soc(3), w) - expect).norm() < 1e-12);
  Mat flip = Mat::Identity(2, 2);
  flip(0, 0) = -1;
  const Map lin{2, [flip](const Vec& x) { return Vec(flip * x); }};
  DegreeOptions dopts;
  dopts.seed = c.seed;
  record("degree of a reflection", degree(lin, Domain::box(Vec::Constant(2, -1), Vec::Constant(2, 1)), Vec::Zero(2), dopts).value == -1);
  const Map cube{1, [](const Vec& x) { return Vec(x.array().cube()); }};
  record("index of x^3", index(cube, Vec::Zero(1)).value == 1);
  const auto hand = hand_instances();
  PipelineOptions popts;
  popts.seed = c.seed;
  const auto reps = run_battery(hand, popts, 1);
  record("pipeline on phi = id", reps[0].strong_regularity.verdict == SrVerdict::Verified && reps[0].index == 1 &&
                                   reps[0].tensions.empty());
  record("pipeline on phi = -x", reps[1].strong_regularity.verdict == SrVerdict::Refuted && reps[1].index == 0 &&
                                   reps[1].tensions.empty());
  Vec edge(2);
  edge << 0.5, 0.0;
  record("reduction at a square edge", reduction_demo(ConvexSet::unit_cube(2), edge, 200, c.seed).passed);
  const NormalMap nm = NormalMap::matrix(flip, Mat::Identity(2, 2), ConvexSet::soc(2));
  const NormalMap back = normal_map_from_json(Json::parse(to_json(nm).dump()));
  record("normal map JSON round trip", (back.eval(z) - nm.eval(z)).norm() == 0.0);

  Output out(c);
  for (const Json& ch : checks)
  {
    out.summary() << (ch["passed"].get<bool>() ? "ok    " : "FAIL  ") << ch["name"].get<std::string>() << "\n";
  }
  out.emit(envelope("selftest", c, {{"checks", checks}, {"passed", all}}, since(t0)));
  return all ? kOk : kFailure;
}

int cmd_export(const std::vector<std::string>& reports, const std::string& out_path)
{
  const std::string csv = plotdata_csv(reports);
  if (out_path.empty())
  {
    std::cout << csv;
  }
  else
  {
    write_file_atomic(out_path, csv);
  }
  return kOk;
}

int exit_code_for(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::RootFindFailure:
    case ErrorCode::NoWitness:
    case ErrorCode::SearchExhausted:
    case ErrorCode::ConjugacyViolation:
    case ErrorCode::NonConvergent:
    case ErrorCode::DegenerateJacobian:
    case ErrorCode::PreimageSearchIncomplete:
    case ErrorCode::NotIsolated:
    case ErrorCode::SolverBudgetExceeded:
    case ErrorCode::JacobianSingular:
      return kFailure;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Normal maps, degree and stability laboratory"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&c](CLI::App* sub, bool jobs) {
    sub->add_option("--out,-o", c.out, "write JSON here (atomically) instead of standard output");
    sub->add_option("--seed", c.seed, "random seed");
    if (jobs)
    {
      sub->add_option("--jobs,-j", c.jobs, "worker threads (fallback: NORMALMAP_LAB_JOBS)")->check(CLI::PositiveNumber);
    }
  };

  std::string set_path, map_path, instance_path, scenario_path, polytope_path, method = "auto", csv;
  std::vector<double> point, box, ball, target;
  std::vector<std::string> reports;
  int random = 0, dim = 3, samples = 1000, r_param = 1;
  double radius = 0.1, eps = 1e-6;

  auto* project_cmd = app.add_subcommand("project", "metric projection onto a convex set");
  project_cmd->add_option("--set", set_path, "set JSON")->required();
  project_cmd->add_option("--point", point, "point coordinates")->required();
  add_common(project_cmd, false);

  auto* cone_cmd = app.add_subcommand("cone", "normal and tangent cones at a point of the set");
  cone_cmd->add_option("--set", set_path, "set JSON")->required();
  cone_cmd->add_option("--point", point, "point coordinates")->required();
  add_common(cone_cmd, false);

  auto* degree_cmd = app.add_subcommand("degree", "Brouwer degree over a box or ball");
  degree_cmd->add_option("--map", map_path, "normal map or smooth function JSON")->required();
  degree_cmd->add_option("--box", box, "lo hi, or n lower then n upper bounds");
  degree_cmd->add_option("--ball", ball, "center coordinates then radius");
  degree_cmd->add_option("--target", target, "target value (1 or n numbers)")->required();
  degree_cmd->add_option("--method", method, "auto | regular-sum | winding | sign-change");
  add_common(degree_cmd, true);

  auto* index_cmd = app.add_subcommand("index", "local index at an isolated solution");
  index_cmd->add_option("--map", map_path, "normal map or smooth function JSON")->required();
  index_cmd->add_option("--point", point, "base point")->required();
  index_cmd->add_option("--radius", radius, "initial ball radius")->check(CLI::PositiveNumber);
  add_common(index_cmd, true);

  auto* dimlem_cmd = app.add_subcommand("dimlem-audit", "normal-cone dimension-drop audit on polytopes");
  dimlem_cmd->add_option("--random", random, "number of random polytopes");
  dimlem_cmd->add_option("--dim", dim, "ambient dimension of random polytopes");
  dimlem_cmd->add_option("--polytope", polytope_path, "audit one polytope from JSON instead");
  add_common(dimlem_cmd, true);

  auto* asplund_cmd = app.add_subcommand("asplund-audit", "r-extreme normals approximated by r-exposed ones");
  asplund_cmd->add_option("--random", random, "number of random polytopes");
  asplund_cmd->add_option("--dim", dim, "ambient dimension of random polytopes");
  asplund_cmd->add_option("--polytope", polytope_path, "audit one polytope from JSON instead");
  asplund_cmd->add_option("--r", r_param, "order r")->check(CLI::NonNegativeNumber);
  asplund_cmd->add_option("--eps", eps, "approximation radius")->check(CLI::PositiveNumber);
  add_common(asplund_cmd, true);

  auto* stability_cmd = app.add_subcommand("stability", "stability pipeline on one generalized equation");
  stability_cmd->add_option("--instance", instance_path, "instance JSON")->required();
  add_common(stability_cmd, true);

  auto* equivalence_cmd = app.add_subcommand("equivalence", "stability pipeline over a scenario battery");
  equivalence_cmd->add_option("--scenario", scenario_path, "scenario JSON")->required();
  equivalence_cmd->add_option("--csv", csv, "also write plot data here");
  add_common(equivalence_cmd, true);

  auto* reduce_cmd = app.add_subcommand("reduce", "sampled check of the local cone reduction");
  reduce_cmd->add_option("--set", set_path, "set JSON")->required();
  reduce_cmd->add_option("--point", point, "point of the set")->required();
  reduce_cmd->add_option("--samples", samples, "number of samples");
  add_common(reduce_cmd, false);

  auto* selftest_cmd = app.add_subcommand("selftest", "quick internal consistency checks");
  add_common(selftest_cmd, true);

  auto* export_cmd = app.add_subcommand("export-plotdata", "tidy CSV from stability reports");
  export_cmd->add_option("--report", reports, "report JSON files")->required();
  export_cmd->add_option("--out,-o", c.out, "CSV path (default: standard output)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    app.exit(e);
    return kUsage;
  }

  try
  {
    if (!project_cmd->parsed() && !cone_cmd->parsed() && !reduce_cmd->parsed() && !export_cmd->parsed())
    {
      set_threads(resolve_jobs(c.jobs));
    }
    if (*project_cmd)
      return cmd_project(c, set_path, point);
    if (*cone_cmd)
      return cmd_cone(c, set_path, point);
    if (*degree_cmd)
      return cmd_degree(c, map_path, box, ball, target, method);
    if (*index_cmd)
      return cmd_index(c, map_path, point, radius);
    if (*dimlem_cmd)
      return cmd_dimlem(c, random, dim, polytope_path);
    if (*asplund_cmd)
      return cmd_asplund(c, random, dim, polytope_path, r_param, eps);
    if (*stability_cmd)
      return cmd_stability(c, instance_path);
    if (*equivalence_cmd)
      return cmd_equivalence(c, scenario_path, csv);
    if (*reduce_cmd)
      return cmd_reduce(c, set_path, point, samples);
    if (*selftest_cmd)
      return cmd_selftest(c);
    if (*export_cmd)
      return cmd_export(reports, c.out);
  }
  catch (const UsageError& e)
  {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
