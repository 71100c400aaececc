#pragma once

// File formats and report serialization. Grids: {"dim", "origin",
// "spacing", "shape", "values"} row-major; lattices: {"dim", "lower",
// "upper", "values"}; CSV (coordinate,value) accepted for d=1. Floats are
// emitted in shortest round-trip precision, so save/load is bit-faithful.

#include <string>
#include <variant>

#include <json.hpp>

#include "lsmlab/check_report.hpp"
#include "lsmlab/convolve.hpp"
#include "lsmlab/density_model.hpp"
#include "lsmlab/lattice.hpp"
#include "lsmlab/transport1d.hpp"

namespace lsmlab {

nlohmann::json to_json(const GridFunction& g);
nlohmann::json to_json(const LatticeFunction& f);
nlohmann::json to_json(const DensityModel& m);
nlohmann::json to_json(const CheckReport& r);
nlohmann::json to_json(const ReportPair& r);
nlohmann::json to_json(const PreservationReport& r);

GridFunction grid_from_json(const nlohmann::json& j);
LatticeFunction lattice_from_json(const nlohmann::json& j);
DensityModel model_from_json(const nlohmann::json& j);

using LoadedFunction = std::variant<GridFunction, LatticeFunction>;

// Dispatches on the "kind" field (or "lower" vs "origin"); .csv files load
// as 1D grids. Schema violations raise std::runtime_error naming the field.
LoadedFunction load_function(const std::string& path);
GridFunction load_grid(const std::string& path);
LatticeFunction load_lattice(const std::string& path);
DensityModel load_model(const std::string& path);

// 1D density from a grid/CSV file; normalizes and warns on stderr when the
// mass is not 1 (set quiet to suppress).
Density1D load_density_1d(const std::string& path, bool quiet = false);

void save_json(const nlohmann::json& j, const std::string& path);
std::string read_file(const std::string& path);

// Report envelope: embeds tool version, seed, and tolerance so a run can
// be reproduced from its own output.
nlohmann::json report_envelope(const std::string& check, std::uint64_t seed, double tol);

}  // namespace lsmlab
