#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bsq/direct_scattering.hpp"
#include "bsq/pde_reference.hpp"
#include "bsq/sector4_asymptotics.hpp"

namespace bsq {

// Bad or missing configuration and file problems; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double circle = 1e-6;      // BSQ_TOL_CIRCLE
  double endpoint = 1e-4;    // BSQ_TOL_ENDPOINT
  double zero = 1e-10;       // BSQ_TOL_ZERO
  double mass = 1e-8;        // BSQ_TOL_MASS
  double high_mode = 1e-2;   // BSQ_TOL_HIGH_MODE
  double panel = 1e-12;      // BSQ_TOL_PANEL
  double constraint = 1e-6;  // BSQ_TOL_CONSTRAINT
};

struct DataSpec {
  std::string type = "bandlimited_gaussian";  // zero | gaussian | bandlimited_gaussian | soliton | csv
  double amplitude = 0.1, width = 2.0, velocity = 0.05;
  double xi_c = 0.75, tau = 0.05, x0 = 0.0;
  double speed = 1.02, L = 200.0;
  std::string path;  // csv columns x,u0,u1
};

struct RunConfig {
  DataSpec data;
  SolverOptions solver;
  int per_arc = 34;
  double exclusion = 1e-3;
  int panel_nodes = 24;
  std::vector<SearchBox> boxes = default_search_boxes();
  std::vector<SolitonZero> soliton_override;  // replaces the computed set when non-empty
  ZetaWindow window;
  std::vector<double> times{60.0, 120.0, 240.0};
  std::vector<std::pair<double, double>> points;  // explicit (x, t); otherwise the pde grid in the window
  EvolveOptions pde;
  Tolerances tol;
};

RunConfig default_config();
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json_text(const std::string& text, const std::filesystem::path& base = {});
// Overrides read from BSQ_TOL_* variables; malformed values raise ConfigError.
void apply_env_overrides(Tolerances& tol);
// Names and meanings of the recognised variables.
std::vector<std::pair<std::string, std::string>> env_override_names();

InitialData make_initial_data(const DataSpec& spec);

// Write to a temporary in the same directory, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;
};
std::string format_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

std::string soliton_json(const SolitonData& Z);
SolitonData parse_soliton_json(const std::string& text);

std::string validation_json(const ValidationReport& rep, const ReflectionData& refl, const EndpointLimits& ends,
                            const SolitonData& Z);

// Fixed column order of the CSV outputs.
CsvTable reflection_table(const ReflectionData& refl);
CsvTable asym_table(const std::vector<AsymptoticEvaluation>& evs);
CsvTable snapshot_table(const FieldSnapshot& s);
CsvTable spectrum_table(const BoussinesqEvolver& ev, const FieldSnapshot& s);
CsvTable compare_table(const std::vector<CompareReport>& reps);

}  // namespace bsq
