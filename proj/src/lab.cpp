#include "nmlab/lab.hpp"

#include "nmlab/battery.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>

namespace nmlab
{

namespace
{

int int_in(const Json& j, const char* key, int lo, int hi, int fallback)
{
  if (!j.contains(key))
  {
    return fallback;
  }
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < lo || v.get<long long>() > hi)
  {
    throw Error(ErrorCode::InvalidInput, std::string("pipeline.") + key + ": expected an integer in [" +
                                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v.get<long long>());
}

double positive_in(const Json& j, const char* key, double fallback)
{
  if (!j.contains(key))
  {
    return fallback;
  }
  const double v = number_from_json(j.at(key), std::string("pipeline.") + key);
  if (!(v > 0.0) || !std::isfinite(v))
  {
    throw Error(ErrorCode::InvalidInput, std::string("pipeline.") + key + ": expected a positive number");
  }
  return v;
}

DegreeMethod method_from_string(const std::string& s)
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
  throw Error(ErrorCode::InvalidInput,
              "pipeline.degree_method: expected auto, regular-sum, winding or sign-change, got '" + s + "'");
}

std::string_view method_name(DegreeMethod m)
{
  switch (m)
  {
    case DegreeMethod::Auto: return "auto";
    case DegreeMethod::RegularSum: return "regular-sum";
    case DegreeMethod::Winding2D: return "winding";
    case DegreeMethod::SignChange1D: return "sign-change";
  }
  return "auto";
}

std::string utc_now()
{
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string out = "\"";
  for (const char c : s)
  {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

std::string csv_number(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

PipelineOptions pipeline_from_json(const Json& j, std::uint64_t seed)
{
  PipelineOptions p;
  p.seed = seed;
  if (j.is_null())
  {
    return p;
  }
  check_keys(j,
             {"discreteness_radius", "aubin_radii", "aubin_targets", "sr_initial_radius", "sr_max_radii", "sr_targets",
              "index_initial_radius", "index_max_radii", "degree_method", "translation_check"},
             "pipeline");
  p.discreteness_radius = positive_in(j, "discreteness_radius", p.discreteness_radius);
  if (j.contains("aubin_radii"))
  {
    const Vec r = vec_from_json(j.at("aubin_radii"), "pipeline.aubin_radii");
    if (r.size() < 3 || r.minCoeff() <= 0.0)
    {
      throw Error(ErrorCode::InvalidInput, "pipeline.aubin_radii: need at least three positive radii");
    }
    for (Eigen::Index i = 1; i < r.size(); ++i)
    {
      if (!(r(i) < r(i - 1)))
      {
        throw Error(ErrorCode::InvalidInput, "pipeline.aubin_radii: radii must be strictly decreasing");
      }
    }
    p.aubin.radii.assign(r.data(), r.data() + r.size());
  }
  p.aubin.targets = int_in(j, "aubin_targets", 200, 1000000, p.aubin.targets);
  p.sr.initial_radius = positive_in(j, "sr_initial_radius", p.sr.initial_radius);
  p.sr.max_radii = int_in(j, "sr_max_radii", 2, 30, p.sr.max_radii);
  p.sr.targets = int_in(j, "sr_targets", 1, 1000000, p.sr.targets);
  p.index.initial_radius = positive_in(j, "index_initial_radius", p.index.initial_radius);
  p.index.max_radii = int_in(j, "index_max_radii", 2, 30, p.index.max_radii);
  if (j.contains("degree_method"))
  {
    if (!j.at("degree_method").is_string())
    {
      throw Error(ErrorCode::InvalidInput, "pipeline.degree_method: expected a string");
    }
    p.index.degree.method = method_from_string(j.at("degree_method").get<std::string>());
  }
  if (j.contains("translation_check"))
  {
    if (!j.at("translation_check").is_boolean())
    {
      throw Error(ErrorCode::InvalidInput, "pipeline.translation_check: expected a boolean");
    }
    p.index.translation_check = j.at("translation_check").get<bool>();
  }
  return p;
}

Json to_json(const PipelineOptions& p)
{
  Json j;
  j["discreteness_radius"] = p.discreteness_radius;
  j["aubin_radii"] = p.aubin.radii;
  j["aubin_targets"] = p.aubin.targets;
  j["sr_initial_radius"] = p.sr.initial_radius;
  j["sr_max_radii"] = p.sr.max_radii;
  j["sr_targets"] = p.sr.targets;
  j["index_initial_radius"] = p.index.initial_radius;
  j["index_max_radii"] = p.index.max_radii;
  j["degree_method"] = method_name(p.index.degree.method);
  j["translation_check"] = p.index.translation_check;
  return j;
}

Scenario scenario_from_json(const Json& j)
{
  check_keys(j, {"seed", "battery", "pipeline", "output"}, "scenario");
  Scenario s;
  if (j.contains("seed"))
  {
    if (!j.at("seed").is_number_unsigned())
    {
      throw Error(ErrorCode::InvalidInput, "scenario.seed: expected a nonnegative integer");
    }
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  s.pipeline = pipeline_from_json(j.contains("pipeline") ? j.at("pipeline") : Json(nullptr), s.seed);
  if (j.contains("output"))
  {
    const Json& o = j.at("output");
    check_keys(o, {"report", "csv"}, "scenario.output");
    for (const char* key : {"report", "csv"})
    {
      if (o.contains(key) && !o.at(key).is_string())
      {
        throw Error(ErrorCode::InvalidInput, std::string("scenario.output.") + key + ": expected a path string");
      }
    }
    s.report_path = o.value("report", std::string());
    s.csv_path = o.value("csv", std::string());
  }
  if (!j.contains("battery") || !j.at("battery").is_array())
  {
    throw Error(ErrorCode::InvalidInput, "scenario.battery: expected a list");
  }

  // Structural validation of every entry first, then expansion.
  const Json& entries = j.at("battery");
  for (std::size_t i = 0; i < entries.size(); ++i)
  {
    const Json& e = entries[i];
    const std::string where = "scenario.battery[" + std::to_string(i) + "]";
    if (!e.is_object())
    {
      throw Error(ErrorCode::InvalidInput, where + ": expected an object");
    }
    if (e.contains("family"))
    {
      check_keys(e, {"family", "count", "dimension"}, where);
      const std::string fam = e.at("family").is_string() ? e.at("family").get<std::string>() : "";
      if (fam != "monotone" && fam != "hand")
      {
        throw Error(ErrorCode::InvalidInput, where + ".family: expected \"monotone\" or \"hand\"");
      }
      if (e.contains("count") && (!e.at("count").is_number_integer() || e.at("count").get<long long>() < 0 ||
                                  e.at("count").get<long long>() > 100000))
      {
        throw Error(ErrorCode::InvalidInput, where + ".count: expected an integer in [0, 100000]");
      }
      if (e.contains("dimension") && (!e.at("dimension").is_number_integer() || e.at("dimension").get<int>() < 1 ||
                                      e.at("dimension").get<int>() > 4))
      {
        throw Error(ErrorCode::InvalidInput, where + ".dimension: expected an integer in [1, 4]");
      }
    }
    else
    {
      check_keys(e, {"id", "phi", "set", "form", "x0", "y0"}, where);
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i)
  {
    const Json& e = entries[i];
    if (e.contains("family"))
    {
      const std::string fam = e.at("family").get<std::string>();
      if (fam == "hand")
      {
        for (GeneralizedEquation& ge : hand_instances())
        {
          s.battery.push_back(std::move(ge));
        }
        continue;
      }
      const int count = e.value("count", 50);
      const int dim = e.value("dimension", 0);
      for (GeneralizedEquation& ge : monotone_battery(splitmix64(s.seed + i), count, dim))
      {
        s.battery.push_back(std::move(ge));
      }
    }
    else
    {
      s.battery.push_back(ge_from_json(e, "instance-" + std::to_string(i)));
    }
  }
  return s;
}

std::vector<StabilityReport> run_battery(const std::vector<GeneralizedEquation>& battery, const PipelineOptions& opts,
                                         int jobs)
{
  std::vector<StabilityReport> out(battery.size());
  const int previous = max_threads();
  set_threads(std::max(jobs, 1));
  try
  {
    parallel_for(jobs > 1 ? Exec::Parallel : Exec::Serial, battery.size(), [&](std::size_t i) {
      PipelineOptions p = opts;
      p.exec = Exec::Serial;
      p.seed = splitmix64(opts.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
      out[i] = equivalence_experiment(battery[i], p);
    });
  }
  catch (...)
  {
    set_threads(previous);
    throw;
  }
  set_threads(previous);
  return out;
}

Json battery_report(const std::vector<StabilityReport>& reports, const PipelineOptions& opts, std::uint64_t seed,
                    int jobs, double wall_seconds)
{
  Json j;
  j["tool"] = "normalmap_lab";
  j["format"] = 1;
  j["rng"] = Rng::kAlgorithm;
  j["seed"] = seed;
  j["pipeline"] = to_json(opts);
  int verified = 0, refuted = 0, bounded = 0, with_index = 0;
  j["instances"] = Json::array();
  Json runtimes = Json::object();
  for (const StabilityReport& r : reports)
  {
    j["instances"].push_back(to_json(r));
    runtimes[r.id] = runtimes_to_json(r);
    verified += r.strong_regularity.verdict == SrVerdict::Verified;
    refuted += r.strong_regularity.verdict == SrVerdict::Refuted;
    bounded += r.aubin.verdict == AubinVerdict::BoundedEvidence;
    with_index += r.index.has_value();
  }
  j["summary"] = {{"instances", reports.size()},
                  {"verified", verified},
                  {"refuted", refuted},
                  {"inconclusive", static_cast<int>(reports.size()) - verified - refuted},
                  {"bounded_evidence", bounded},
                  {"index_computed", with_index},
                  {"tensions", tension_count(reports)}};
  j["timestamp"] = {{"generated_utc", utc_now()}, {"jobs", jobs}, {"wall_seconds", wall_seconds}, {"runtimes", runtimes}};
  return j;
}

Json without_timestamp(Json report)
{
  report.erase("timestamp");
  return report;
}

int tension_count(const std::vector<StabilityReport>& reports)
{
  int n = 0;
  for (const StabilityReport& r : reports)
  {
    n += static_cast<int>(r.tensions.size());
  }
  return n;
}

std::string plotdata_csv(const std::vector<std::string>& report_paths)
{
  std::string csv = "instance,radius,aubin_modulus,index,verdict\n";
  for (const std::string& path : report_paths)
  {
    if (!std::filesystem::exists(path))
    {
      throw Error(ErrorCode::MissingReport, path);
    }
    const Json doc = read_json_file(path);
    if (!doc.contains("instances") || !doc.at("instances").is_array())
    {
      throw Error(ErrorCode::InvalidInput, path + ": not a stability report (no \"instances\" list)");
    }
    for (const Json& inst : doc.at("instances"))
    {
      const Json& aubin = inst.at("aubin");
      const std::string index = inst.at("index").is_null() ? "" : std::to_string(inst.at("index").get<int>());
      const std::string verdict = inst.at("strong_regularity").at("verdict").get<std::string>();
      for (std::size_t k = 0; k < aubin.at("radii").size(); ++k)
      {
        const double r = number_from_json(aubin.at("radii")[k], "radius");
        const double m = number_from_json(aubin.at("moduli")[k], "modulus");
        csv += csv_field(inst.at("id").get<std::string>()) + "," + csv_number(r) + "," + csv_number(m) + "," + index + "," +
               verdict + "\n";
      }
    }
  }
  return csv;
}

}  // namespace nmlab
