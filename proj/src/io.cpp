#include "lsmlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lsmlab/version.hpp"

namespace lsmlab {

namespace {

using nlohmann::json;

double sanitize(double v) { return std::isfinite(v) ? v : (v > 0 ? 1e308 : -1e308); }

const json& require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end())
    throw std::runtime_error("schema error: missing field \"" + std::string(name) + "\"");
  return *it;
}

std::vector<double> double_array(const json& j, const char* name) {
  const json& a = require_field(j, name);
  if (!a.is_array())
    throw std::runtime_error("schema error: field \"" + std::string(name) + "\" must be an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& v : a) {
    if (!v.is_number())
      throw std::runtime_error("schema error: field \"" + std::string(name) +
                               "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> int_array(const json& j, const char* name) {
  const json& a = require_field(j, name);
  if (!a.is_array())
    throw std::runtime_error("schema error: field \"" + std::string(name) + "\" must be an array");
  std::vector<int> out;
  for (const auto& v : a) {
    if (!v.is_number_integer())
      throw std::runtime_error("schema error: field \"" + std::string(name) +
                               "\" must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

GridFunction grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> coords, values;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v))
      throw std::runtime_error("csv error: line " + std::to_string(line_no) +
                               " must hold coordinate,value");
    coords.push_back(x);
    values.push_back(v);
  }
  if (coords.size() < 2) throw std::runtime_error("csv error: need at least 2 rows");
  const double eps = coords[1] - coords[0];
  if (!(eps > 0.0)) throw std::runtime_error("csv error: coordinates must increase");
  for (std::size_t i = 1; i < coords.size(); ++i)
    if (std::abs(coords[i] - coords[i - 1] - eps) > 1e-9 * std::max(1.0, std::abs(eps)))
      throw std::runtime_error("csv error: non-uniform spacing at row " + std::to_string(i + 1));
  return GridFunction({coords[0]}, eps, {values.size()}, std::move(values));
}

}  // namespace

nlohmann::json to_json(const GridFunction& g) {
  return json{{"kind", "grid"},
              {"dim", g.dim()},
              {"origin", g.origin()},
              {"spacing", g.spacing()},
              {"shape", g.shape()},
              {"values", g.values()}};
}

nlohmann::json to_json(const LatticeFunction& f) {
  return json{{"kind", "lattice"},
              {"dim", f.dim()},
              {"lower", f.box().lower},
              {"upper", f.box().upper},
              {"values", f.values()}};
}

nlohmann::json to_json(const DensityModel& m) {
  const auto& fam = m.family();
  if (const auto* g = std::get_if<GaussianModel>(&fam))
    return json{{"family", "gaussian"}, {"mean", g->mean}, {"cov", g->cov}};
  if (const auto* u = std::get_if<UniformBoxModel>(&fam))
    return json{{"family", "uniform_box"}, {"lower", u->box.lower}, {"upper", u->box.upper}};
  if (const auto* e = std::get_if<ExpPLConcaveModel>(&fam))
    return json{{"family", "exp_pl_concave"}, {"knot_x", e->knot_x}, {"knot_phi", e->knot_phi}};
  if (const auto* p = std::get_if<ProductModel>(&fam)) {
    json factors = json::array();
    for (const auto& f : p->factors) factors.push_back(to_json(f));
    return json{{"family", "product"}, {"factors", std::move(factors)}};
  }
  const auto& t = std::get<TabulatedModel>(fam);
  return json{{"family", "tabulated"}, {"grid", to_json(t.grid)}};
}

nlohmann::json to_json(const CheckReport& r) {
  json j{{"passed", r.passed},
         {"worst_violation", sanitize(r.worst_violation)},
         {"tolerance", sanitize(r.tolerance)},
         {"scale", sanitize(r.scale)},
         {"pairs_checked", r.pairs_checked},
         {"indeterminate", r.indeterminate},
         {"witness", r.witness},
         {"pretty", {{"worst_violation_relative", sanitize(r.relative())}}}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

nlohmann::json to_json(const ReportPair& r) {
  return json{{"hypothesis", to_json(r.hypothesis)},
              {"conclusion", to_json(r.conclusion)},
              {"theorem_instance_ok", r.theorem_instance_ok()}};
}

nlohmann::json to_json(const PreservationReport& r) {
  return json{{"premise", to_json(r.premise)},
              {"conclusion", to_json(r.conclusion)},
              {"premise_ok", r.premise_ok},
              {"passed", r.passed}};
}

GridFunction grid_from_json(const nlohmann::json& j) {
  const int dim = require_field(j, "dim").get<int>();
  std::vector<double> origin = double_array(j, "origin");
  if (static_cast<int>(origin.size()) != dim)
    throw std::runtime_error("schema error: field \"origin\" length must equal \"dim\"");
  const double spacing = require_field(j, "spacing").get<double>();
  std::vector<int> shape_i = int_array(j, "shape");
  if (static_cast<int>(shape_i.size()) != dim)
    throw std::runtime_error("schema error: field \"shape\" length must equal \"dim\"");
  std::vector<std::size_t> shape;
  for (int s : shape_i) {
    if (s <= 0) throw std::runtime_error("schema error: field \"shape\" must be positive");
    shape.push_back(static_cast<std::size_t>(s));
  }
  return GridFunction(std::move(origin), spacing, std::move(shape), double_array(j, "values"));
}

LatticeFunction lattice_from_json(const nlohmann::json& j) {
  const int dim = require_field(j, "dim").get<int>();
  std::vector<int> lower = int_array(j, "lower");
  std::vector<int> upper = int_array(j, "upper");
  if (static_cast<int>(lower.size()) != dim || static_cast<int>(upper.size()) != dim)
    throw std::runtime_error("schema error: fields \"lower\"/\"upper\" length must equal \"dim\"");
  return LatticeFunction(std::move(lower), std::move(upper), double_array(j, "values"));
}

DensityModel model_from_json(const nlohmann::json& j) {
  const std::string family = require_field(j, "family").get<std::string>();
  if (family == "gaussian")
    return DensityModel::gaussian(double_array(j, "mean"), double_array(j, "cov"));
  if (family == "uniform_box")
    return DensityModel::uniform_box(double_array(j, "lower"), double_array(j, "upper"));
  if (family == "exp_pl_concave")
    return DensityModel::exp_pl_concave(double_array(j, "knot_x"), double_array(j, "knot_phi"));
  if (family == "product") {
    const json& factors = require_field(j, "factors");
    std::vector<DensityModel> fs;
    for (const auto& f : factors) fs.push_back(model_from_json(f));
    return DensityModel::product(std::move(fs));
  }
  if (family == "tabulated")
    return DensityModel::tabulated(grid_from_json(require_field(j, "grid")));
  throw std::runtime_error("schema error: unknown model family \"" + family + "\"");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedFunction load_function(const std::string& path) {
  if (ends_with(path, ".csv")) return grid_from_csv(read_file(path));
  json j = json::parse(read_file(path));
  if (j.contains("kind")) {
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "lattice") return lattice_from_json(j);
    if (kind == "grid") return grid_from_json(j);
    throw std::runtime_error("schema error: unknown kind \"" + kind + "\"");
  }
  if (j.contains("lower") && !j.contains("origin")) return lattice_from_json(j);
  return grid_from_json(j);
}

GridFunction load_grid(const std::string& path) {
  LoadedFunction f = load_function(path);
  if (const auto* g = std::get_if<GridFunction>(&f)) return *g;
  throw std::runtime_error(path + " holds a lattice function, expected a grid");
}

LatticeFunction load_lattice(const std::string& path) {
  LoadedFunction f = load_function(path);
  if (const auto* l = std::get_if<LatticeFunction>(&f)) return *l;
  throw std::runtime_error(path + " holds a grid function, expected a lattice");
}

DensityModel load_model(const std::string& path) {
  return model_from_json(json::parse(read_file(path)));
}

Density1D load_density_1d(const std::string& path, bool quiet) {
  GridFunction g = load_grid(path);
  if (g.dim() != 1) throw std::runtime_error(path + " is not a 1D density");
  const double mass = g.integral();
  if (std::abs(mass - 1.0) > 1e-6 && !quiet)
    std::cerr << "warning: " << path << " has mass " << mass << "; normalizing\n";
  return Density1D::from_grid(g);
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

nlohmann::json report_envelope(const std::string& check, std::uint64_t seed, double tol) {
  return json{{"check", check}, {"version", kVersion}, {"seed", seed}, {"tol", tol}};
}

}  // namespace lsmlab
