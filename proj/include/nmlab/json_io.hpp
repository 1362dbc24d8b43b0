#pragma once

#include "nmlab/degree.hpp"
#include "nmlab/polytope.hpp"
#include "nmlab/stability.hpp"

#include "json.hpp"

#include <initializer_list>
#include <string>

namespace nmlab
{

using Json = nlohmann::ordered_json;

/// Throws InvalidInput naming the first key of `j` that is not in `allowed`.
void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view context);

/// Finite doubles become numbers; infinities and NaN become the strings
/// "inf", "-inf" and "nan" so that they survive a round trip.
Json number(double x);
double number_from_json(const Json& j, std::string_view what);

Json to_json(const Vec& v);
Json to_json(const Mat& m);  // list of rows
Vec vec_from_json(const Json& j, std::string_view what);
Mat mat_from_json(const Json& j, std::string_view what);

/// {"kind": "orthant", "n": 2}, {"kind": "polyhedron", "A": [[..]], "b": [..]},
/// {"kind": "box", "lo": [..], "hi": [..]}, {"kind": "soc", "n": 3},
/// {"kind": "porder", "n": 3, "p": 1.5 | "inf"}, {"kind": "psd", "d": 2},
/// {"kind": "affine", "basis": [[..]] (vectors), "offset": [..]},
/// {"kind": "product", "factors": [..]}
ConvexSet set_from_json(const Json& j);
Json to_json(const ConvexSet& s);

/// {"affine": {"M": [[..]], "c": [..]}, "quadratic": [Q_0, ..], "sin": [{"out", "in", "amp", "freq", "phase"}]}
SmoothFn smooth_from_json(const Json& j);
Json to_json(const SmoothFn& f);

/// {"form": "matrix", "A", "B", "set"} | {"form": "robinson"|"inverse", "phi", "set"} |
/// {"form": "function", "f", "g", "set"}
NormalMap normal_map_from_json(const Json& j);
Json to_json(const NormalMap& m);

/// {"id", "phi", "set", "form": "normal"|"inverse", "x0", "y0"}
GeneralizedEquation ge_from_json(const Json& j, const std::string& default_id = "instance");
Json to_json(const GeneralizedEquation& ge);

Json to_json(const ConeRep& c);
Json to_json(const DegreeResult& d);
Json to_json(const IndexResult& r);
Json to_json(const AubinEstimate& a);
Json to_json(const StrongRegularity& s);
Json to_json(const HomotopyCheck& h);
Json to_json(const ReductionReport& r);
Json to_json(const DimlemWitness& w);

/// Stability report without its runtimes (they are timing data, kept apart).
Json to_json(const StabilityReport& r);
Json runtimes_to_json(const StabilityReport& r);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
Json read_json_file(const std::string& path);

}  // namespace nmlab
