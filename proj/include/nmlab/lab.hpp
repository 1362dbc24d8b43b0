#pragma once

#include "nmlab/json_io.hpp"
#include "nmlab/stability.hpp"

#include <string>
#include <vector>

namespace nmlab
{

/// A validated scenario file:
/// {
///   "seed": 7,
///   "battery": [ <instance> | {"family": "monotone"|"hand", "count": 50, "dimension": 3} ],
///   "pipeline": {"discreteness_radius", "aubin_radii", "aubin_targets", "sr_initial_radius",
///                "sr_max_radii", "sr_targets", "index_initial_radius", "index_max_radii",
///                "degree_method", "translation_check"},
///   "output": {"report": "report.json", "csv": "plot.csv"}
/// }
struct Scenario
{
  std::uint64_t seed = 0;
  std::vector<GeneralizedEquation> battery;
  PipelineOptions pipeline;
  std::string report_path;
  std::string csv_path;
};

/// Validates the whole document (unknown keys are rejected) before expanding
/// generator entries; throws InvalidInput.
Scenario scenario_from_json(const Json& j);

PipelineOptions pipeline_from_json(const Json& j, std::uint64_t seed);
Json to_json(const PipelineOptions& p);

/// Runs the equivalence pipeline on every instance. With jobs > 1 instances
/// are distributed over OpenMP threads; each instance draws from its own
/// seed, so the reports do not depend on `jobs`.
std::vector<StabilityReport> run_battery(const std::vector<GeneralizedEquation>& battery, const PipelineOptions& opts,
                                         int jobs);

/// Report document. Timing data (per-stage runtimes, job count, wall clock,
/// generation time) lives under "timestamp", which comparisons ignore.
Json battery_report(const std::vector<StabilityReport>& reports, const PipelineOptions& opts, std::uint64_t seed,
                    int jobs, double wall_seconds);

/// Copy of a report without its "timestamp" member.
Json without_timestamp(Json report);

int tension_count(const std::vector<StabilityReport>& reports);

/// Tidy CSV with one row per instance and Aubin radius:
/// instance,radius,aubin_modulus,index,verdict (verdict = strong regularity).
/// Throws MissingReport when a path does not exist.
std::string plotdata_csv(const std::vector<std::string>& report_paths);

}  // namespace nmlab
