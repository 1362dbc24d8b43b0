#include "nmlab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

namespace nmlab
{

namespace
{

[[noreturn]] void bad(std::string_view what, const std::string& msg)
{
  throw Error(ErrorCode::InvalidInput, std::string(what) + ": " + msg);
}

const Json& field(const Json& j, const char* key, std::string_view context)
{
  if (!j.is_object() || !j.contains(key))
  {
    bad(context, std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

Eigen::Index positive_int(const Json& j, std::string_view what)
{
  if (!j.is_number_integer() || j.get<long long>() < 1)
  {
    bad(what, "expected a positive integer");
  }
  return static_cast<Eigen::Index>(j.get<long long>());
}

std::string_view form_name(NormalMap::Form f)
{
  switch (f)
  {
    case NormalMap::Form::Matrix: return "matrix";
    case NormalMap::Form::Robinson: return "robinson";
    case NormalMap::Form::Inverse: return "inverse";
    case NormalMap::Form::Function: return "function";
  }
  return "?";
}

Json optional_vec(const std::optional<Vec>& v)
{
  return v ? to_json(*v) : Json(nullptr);
}

}  // namespace

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view context)
{
  if (!j.is_object())
  {
    bad(context, "expected an object");
  }
  for (const auto& [key, value] : j.items())
  {
    bool ok = false;
    for (const std::string_view a : allowed)
    {
      ok = ok || key == a;
    }
    if (!ok)
    {
      bad(context, "unknown key '" + key + "'");
    }
  }
}

Json number(double x)
{
  if (std::isnan(x))
  {
    return "nan";
  }
  if (std::isinf(x))
  {
    return x > 0 ? "inf" : "-inf";
  }
  return x;
}

double number_from_json(const Json& j, std::string_view what)
{
  if (j.is_number())
  {
    return j.get<double>();
  }
  if (j.is_string())
  {
    const std::string s = j.get<std::string>();
    if (s == "inf")
    {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf")
    {
      return -std::numeric_limits<double>::infinity();
    }
  }
  bad(what, "expected a number");
}

Json to_json(const Vec& v)
{
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    out.push_back(number(v(i)));
  }
  return out;
}

Json to_json(const Mat& m)
{
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    out.push_back(to_json(Vec(m.row(i).transpose())));
  }
  return out;
}

Vec vec_from_json(const Json& j, std::string_view what)
{
  if (!j.is_array())
  {
    bad(what, "expected an array of numbers");
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    v(static_cast<Eigen::Index>(i)) = number_from_json(j[i], what);
    if (!std::isfinite(v(static_cast<Eigen::Index>(i))))
    {
      bad(what, "entries must be finite");
    }
  }
  return v;
}

Mat mat_from_json(const Json& j, std::string_view what)
{
  if (!j.is_array() || j.empty())
  {
    bad(what, "expected a nonempty list of rows");
  }
  const Vec first = vec_from_json(j[0], what);
  Mat m(static_cast<Eigen::Index>(j.size()), first.size());
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    const Vec row = vec_from_json(j[i], what);
    if (row.size() != first.size())
    {
      bad(what, "rows have different lengths");
    }
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

ConvexSet set_from_json(const Json& j)
{
  const std::string kind = field(j, "kind", "set").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "orthant")
  {
    check_keys(j, {"kind", "n"}, "orthant");
    return ConvexSet::orthant(positive_int(field(j, "n", "orthant"), "orthant.n"));
  }
  if (kind == "polyhedron")
  {
    check_keys(j, {"kind", "A", "b"}, "polyhedron");
    return ConvexSet::polyhedron(mat_from_json(field(j, "A", "polyhedron"), "polyhedron.A"),
                                 vec_from_json(field(j, "b", "polyhedron"), "polyhedron.b"));
  }
  if (kind == "box")
  {
    check_keys(j, {"kind", "lo", "hi"}, "box");
    return ConvexSet::box(vec_from_json(field(j, "lo", "box"), "box.lo"), vec_from_json(field(j, "hi", "box"), "box.hi"));
  }
  if (kind == "soc")
  {
    check_keys(j, {"kind", "n"}, "soc");
    return ConvexSet::soc(positive_int(field(j, "n", "soc"), "soc.n"));
  }
  if (kind == "porder")
  {
    check_keys(j, {"kind", "n", "p"}, "porder");
    return ConvexSet::porder(positive_int(field(j, "n", "porder"), "porder.n"),
                             number_from_json(field(j, "p", "porder"), "porder.p"));
  }
  if (kind == "psd")
  {
    check_keys(j, {"kind", "d"}, "psd");
    return ConvexSet::psd(positive_int(field(j, "d", "psd"), "psd.d"));
  }
  if (kind == "affine")
  {
    check_keys(j, {"kind", "basis", "offset"}, "affine");
    const Vec offset = vec_from_json(field(j, "offset", "affine"), "affine.offset");
    const Json& basis = field(j, "basis", "affine");
    const Mat b = basis.is_array() && basis.empty() ? Mat(offset.size(), 0)
                                                    : Mat(mat_from_json(basis, "affine.basis").transpose());
    return ConvexSet::affine(b, offset);
  }
  if (kind == "product")
  {
    check_keys(j, {"kind", "factors"}, "product");
    const Json& fs = field(j, "factors", "product");
    if (!fs.is_array())
    {
      bad("product.factors", "expected a list of sets");
    }
    std::vector<ConvexSet> factors;
    for (const Json& f : fs)
    {
      factors.push_back(set_from_json(f));
    }
    return ConvexSet::product(std::move(factors));
  }
  bad("set.kind", "unknown set kind '" + kind + "'");
}

Json to_json(const ConvexSet& s)
{
  Json j;
  if (const auto* o = s.as<Orthant>())
  {
    j["kind"] = "orthant";
    j["n"] = o->n;
  }
  else if (const auto* p = s.as<Polyhedron>())
  {
    j["kind"] = "polyhedron";
    j["A"] = to_json(p->a);
    j["b"] = to_json(p->b);
  }
  else if (const auto* c = s.as<SecondOrderCone>())
  {
    j["kind"] = "soc";
    j["n"] = c->n;
  }
  else if (const auto* c = s.as<POrderCone>())
  {
    j["kind"] = "porder";
    j["n"] = c->n;
    j["p"] = number(c->p);
  }
  else if (const auto* c = s.as<PsdCone>())
  {
    j["kind"] = "psd";
    j["d"] = c->d;
  }
  else if (const auto* a = s.as<AffineSubspace>())
  {
    j["kind"] = "affine";
    j["basis"] = a->basis.cols() > 0 ? to_json(Mat(a->basis.transpose())) : Json::array();
    j["offset"] = to_json(a->offset);
  }
  else if (const auto* pr = s.as<Product>())
  {
    j["kind"] = "product";
    j["factors"] = Json::array();
    for (const ConvexSet& f : pr->factors)
    {
      j["factors"].push_back(to_json(f));
    }
  }
  return j;
}

SmoothFn smooth_from_json(const Json& j)
{
  check_keys(j, {"affine", "quadratic", "sin"}, "smooth function");
  const Json& aff = field(j, "affine", "smooth function");
  check_keys(aff, {"M", "c"}, "affine");
  const Mat m = mat_from_json(field(aff, "M", "affine"), "affine.M");
  SmoothFn f = SmoothFn::affine(m, aff.contains("c") ? vec_from_json(aff.at("c"), "affine.c") : Vec(Vec::Zero(m.rows())));
  if (j.contains("quadratic"))
  {
    for (const Json& q : j.at("quadratic"))
    {
      f.quad.push_back(mat_from_json(q, "quadratic"));
    }
  }
  if (j.contains("sin"))
  {
    for (const Json& s : j.at("sin"))
    {
      check_keys(s, {"out", "in", "amp", "freq", "phase"}, "sin term");
      SinTerm t;
      t.out = s.value("out", 0);
      t.in = s.value("in", 0);
      t.amp = number_from_json(field(s, "amp", "sin term"), "sin.amp");
      t.freq = s.contains("freq") ? number_from_json(s.at("freq"), "sin.freq") : 1.0;
      t.phase = s.contains("phase") ? number_from_json(s.at("phase"), "sin.phase") : 0.0;
      f.sines.push_back(t);
    }
  }
  try
  {
    f.validate();
  }
  catch (const Error& e)
  {
    bad("smooth function", e.what());
  }
  return f;
}

Json to_json(const SmoothFn& f)
{
  Json j;
  j["affine"] = {{"M", to_json(f.m)}, {"c", to_json(f.c)}};
  if (!f.quad.empty())
  {
    j["quadratic"] = Json::array();
    for (const Mat& q : f.quad)
    {
      j["quadratic"].push_back(to_json(q));
    }
  }
  if (!f.sines.empty())
  {
    j["sin"] = Json::array();
    for (const SinTerm& t : f.sines)
    {
      j["sin"].push_back({{"out", t.out}, {"in", t.in}, {"amp", t.amp}, {"freq", t.freq}, {"phase", t.phase}});
    }
  }
  return j;
}

NormalMap normal_map_from_json(const Json& j)
{
  const std::string form = field(j, "form", "normal map").is_string() ? j.at("form").get<std::string>() : "";
  if (form == "matrix")
  {
    check_keys(j, {"form", "A", "B", "set"}, "matrix normal map");
    const Mat a = mat_from_json(field(j, "A", "matrix normal map"), "A");
    const Mat b = j.contains("B") ? mat_from_json(j.at("B"), "B") : Mat(Mat::Identity(a.rows(), a.cols()));
    return NormalMap::matrix(a, b, set_from_json(field(j, "set", "matrix normal map")));
  }
  if (form == "robinson" || form == "inverse")
  {
    check_keys(j, {"form", "phi", "set"}, "normal map");
    SmoothFn phi = smooth_from_json(field(j, "phi", "normal map"));
    ConvexSet s = set_from_json(field(j, "set", "normal map"));
    return form == "robinson" ? NormalMap::robinson(std::move(phi), std::move(s))
                              : NormalMap::inverse(std::move(phi), std::move(s));
  }
  if (form == "function")
  {
    check_keys(j, {"form", "f", "g", "set"}, "function normal map");
    return NormalMap::function(smooth_from_json(field(j, "f", "function normal map")),
                               smooth_from_json(field(j, "g", "function normal map")),
                               set_from_json(field(j, "set", "function normal map")));
  }
  bad("normal map.form", "unknown form '" + form + "'");
}

Json to_json(const NormalMap& m)
{
  Json j;
  j["form"] = form_name(m.form());
  switch (m.form())
  {
    case NormalMap::Form::Matrix:
      j["A"] = to_json(m.a());
      j["B"] = to_json(m.b());
      break;
    case NormalMap::Form::Robinson:
    case NormalMap::Form::Inverse:
      j["phi"] = to_json(m.f());
      break;
    case NormalMap::Form::Function:
      j["f"] = to_json(m.f());
      j["g"] = to_json(m.g());
      break;
  }
  j["set"] = to_json(m.set());
  return j;
}

GeneralizedEquation ge_from_json(const Json& j, const std::string& default_id)
{
  check_keys(j, {"id", "phi", "set", "form", "x0", "y0"}, "instance");
  const std::string form = j.value("form", std::string("normal"));
  if (form != "normal" && form != "inverse")
  {
    bad("instance.form", "expected \"normal\" or \"inverse\"");
  }
  return GeneralizedEquation(smooth_from_json(field(j, "phi", "instance")), set_from_json(field(j, "set", "instance")),
                             form == "normal" ? GeForm::Normal : GeForm::Inverse,
                             vec_from_json(field(j, "x0", "instance"), "x0"),
                             vec_from_json(field(j, "y0", "instance"), "y0"), j.value("id", default_id));
}

Json to_json(const GeneralizedEquation& ge)
{
  Json j;
  j["id"] = ge.id();
  j["phi"] = to_json(ge.phi());
  j["set"] = to_json(ge.set());
  j["form"] = ge.form() == GeForm::Normal ? "normal" : "inverse";
  j["x0"] = to_json(ge.x0());
  j["y0"] = to_json(ge.y0());
  return j;
}

Json to_json(const ConeRep& c)
{
  Json j;
  j["ambient"] = c.ambient;
  j["dim"] = c.dim;
  j["generators"] = Json::array();
  for (const Vec& g : c.generators)
  {
    j["generators"].push_back(to_json(g));
  }
  j["lineality_basis"] = Json::array();
  for (const Vec& l : c.lineality_basis)
  {
    j["lineality_basis"].push_back(to_json(l));
  }
  return j;
}

Json to_json(const DegreeResult& d)
{
  Json j;
  j["value"] = d.value;
  j["method"] = to_string(d.method);
  j["perturbed_target"] = to_json(d.perturbed_target);
  j["boundary_margin"] = number(d.boundary_margin);
  j["retries"] = d.retries;
  j["preimages"] = Json::array();
  for (const Preimage& p : d.preimages)
  {
    j["preimages"].push_back({{"x", to_json(p.x)}, {"jacobian_sign", p.sign}});
  }
  return j;
}

Json to_json(const IndexResult& r)
{
  Json j;
  j["value"] = r.value;
  j["radius"] = number(r.radius);
  j["radii"] = Json::array();
  for (const double x : r.radii)
  {
    j["radii"].push_back(number(x));
  }
  j["values"] = r.values;
  j["translation"] = {{"checked", r.translation_checked}, {"ok", r.translation_ok}, {"value", r.translation_value}};
  j["certificate"] = to_json(r.degree);
  return j;
}

Json to_json(const AubinEstimate& a)
{
  Json j;
  j["radii"] = Json::array();
  j["moduli"] = Json::array();
  for (const double r : a.radii)
  {
    j["radii"].push_back(number(r));
  }
  for (const double m : a.moduli)
  {
    j["moduli"].push_back(number(m));
  }
  j["empty_targets"] = a.empty_targets;
  j["verdict"] = to_string(a.verdict);
  return j;
}

Json to_json(const StrongRegularity& s)
{
  Json j;
  j["verdict"] = to_string(s.verdict);
  j["neighborhood_radius"] = number(s.neighborhood_radius);
  j["inverse_lipschitz"] = number(s.inverse_lipschitz);
  j["levels"] = Json::array();
  for (const SrLevel& l : s.levels)
  {
    j["levels"].push_back({{"radius", number(l.radius)},
                           {"evaluated", l.evaluated},
                           {"empty", l.empty},
                           {"multiple", l.multiple},
                           {"lipschitz", number(l.lipschitz)},
                           {"passed", l.passed}});
  }
  return j;
}

Json to_json(const HomotopyCheck& h)
{
  Json j;
  j["precondition_ok"] = h.precondition_ok;
  j["reason"] = h.reason;
  Json cert;
  cert["radii"] = Json::array();
  cert["ratios"] = Json::array();
  for (const double r : h.certificate.radii)
  {
    cert["radii"].push_back(number(r));
  }
  for (const double r : h.certificate.ratios)
  {
    cert["ratios"].push_back(number(r));
  }
  cert["bound_constant"] = number(h.certificate.bound_constant);
  cert["passed"] = h.certificate.passed;
  j["stationarity_certificate"] = cert;
  Json aub;
  aub["radii"] = Json::array();
  aub["moduli"] = Json::array();
  for (const double r : h.aubin.radii)
  {
    aub["radii"].push_back(number(r));
  }
  for (const double m : h.aubin.moduli)
  {
    aub["moduli"].push_back(number(m));
  }
  aub["empty_preimage"] = h.aubin.empty_preimage;
  aub["passed"] = h.aubin.passed;
  j["aubin_surrogate"] = aub;
  j["index_map"] = h.index_map;
  j["index_perturbed"] = h.index_perturbed;
  j["equal"] = h.equal;
  return j;
}

Json to_json(const ReductionReport& r)
{
  return {{"kind", r.kind},
          {"samples", r.samples},
          {"membership_mismatches", r.membership_mismatches},
          {"max_roundtrip_error", number(r.max_roundtrip_error)},
          {"max_commute_error", number(r.max_commute_error)},
          {"passed", r.passed}};
}

Json to_json(const DimlemWitness& w)
{
  Json j;
  j["base_dim"] = w.base_dim;
  j["face"] = w.face;
  j["dims"] = w.dims;
  j["x_seq"] = Json::array();
  j["u_seq"] = Json::array();
  for (const Vec& x : w.x_seq)
  {
    j["x_seq"].push_back(to_json(x));
  }
  for (const Vec& u : w.u_seq)
  {
    j["u_seq"].push_back(to_json(u));
  }
  return j;
}

Json to_json(const StabilityReport& r)
{
  Json j;
  j["id"] = r.id;
  j["x0"] = to_json(r.x0);
  j["y0"] = to_json(r.y0);
  j["z0"] = to_json(r.z0);
  j["discrete"] = r.discrete;
  j["discreteness_witness"] = optional_vec(r.discreteness_witness);
  j["ant"] = {{"applicable", r.ant_applicable},
              {"note", r.ant_note},
              {"disjoint", r.ant.disjoint},
              {"witness", optional_vec(r.ant.witness)}};
  j["index"] = r.index ? Json(*r.index) : Json(nullptr);
  j["index_error"] = r.index_error;
  j["aubin"] = to_json(r.aubin);
  j["strong_regularity"] = to_json(r.strong_regularity);
  j["tensions"] = r.tensions;
  return j;
}

Json runtimes_to_json(const StabilityReport& r)
{
  Json j = Json::object();
  for (const auto& [stage, seconds] : r.runtimes)
  {
    j[stage] = seconds;
  }
  return j;
}

void write_file_atomic(const std::string& path, const std::string& content)
{
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw Error(ErrorCode::InvalidInput, "cannot write " + tmp);
    }
    out << content;
    out.flush();
    if (!out)
    {
      throw Error(ErrorCode::InvalidInput, "write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
  {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::InvalidInput, "cannot rename " + tmp + " to " + path);
  }
}

Json read_json_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try
  {
    return Json::parse(ss.str());
  }
  catch (const nlohmann::json::exception& e)
  {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

}  // namespace nmlab
