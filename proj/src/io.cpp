#include "bsq/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

namespace bsq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T get_field(const json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: field '" + where + key + "' has the wrong type");
  }
}

std::vector<double> get_list(const json& j, const char* key, const std::string& where, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const json& a = j.at(key);
  if (!a.is_array()) throw ConfigError("config: field '" + where + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw ConfigError("config: field '" + where + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

cplx get_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("config: field '" + where + "' must be a number or [re, im]");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

void require_positive(double v, const std::string& name) {
  if (!(v > 0) || !std::isfinite(v)) throw ConfigError("config: field '" + name + "' must be positive");
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig config_from_json_text(const std::string& text, const fs::path& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig c;

  if (j.contains("initial_data")) {
    const json& d = j.at("initial_data");
    const std::string w = "initial_data.";
    c.data.type = get_field<std::string>(d, "type", w, c.data.type);
    c.data.amplitude = get_field<double>(d, "amplitude", w, c.data.amplitude);
    c.data.width = get_field<double>(d, "width", w, c.data.width);
    c.data.velocity = get_field<double>(d, "velocity", w, c.data.velocity);
    c.data.xi_c = get_field<double>(d, "xi_c", w, c.data.xi_c);
    c.data.tau = get_field<double>(d, "tau", w, c.data.tau);
    c.data.x0 = get_field<double>(d, "x0", w, c.data.x0);
    c.data.speed = get_field<double>(d, "speed", w, c.data.speed);
    c.data.L = get_field<double>(d, "L", w, c.data.L);
    c.data.path = get_field<std::string>(d, "path", w, c.data.path);
    static const char* kinds[] = {"zero", "gaussian", "bandlimited_gaussian", "soliton", "csv"};
    bool known = false;
    for (const char* k : kinds) known = known || c.data.type == k;
    if (!known) throw ConfigError("config: field 'initial_data.type' has unknown value '" + c.data.type + "'");
    require_positive(c.data.width, w + "width");
    require_positive(c.data.L, w + "L");
    if (!std::isfinite(c.data.amplitude)) throw ConfigError("config: field 'initial_data.amplitude' must be finite");
    if (c.data.type == "bandlimited_gaussian") {
      require_positive(c.data.xi_c, w + "xi_c");
      require_positive(c.data.tau, w + "tau");
    }
    if (c.data.type == "soliton" && !(c.data.speed > 1.0))
      throw ConfigError("config: field 'initial_data.speed' must exceed 1");
    if (c.data.type == "csv") {
      if (c.data.path.empty()) throw ConfigError("config: field 'initial_data.path' is required for csv data");
      fs::path p(c.data.path);
      if (p.is_relative() && !base.empty()) p = base / p;
      if (!fs::exists(p)) throw ConfigError("config: field 'initial_data.path' names a missing file: " + p.string());
      c.data.path = p.string();
    }
  }

  if (j.contains("scattering")) {
    const json& s = j.at("scattering");
    const std::string w = "scattering.";
    c.solver.step = get_field<double>(s, "step", w, c.solver.step);
    c.solver.polish_step = get_field<double>(s, "polish_step", w, c.solver.polish_step);
    c.per_arc = get_field<int>(s, "per_arc", w, c.per_arc);
    c.exclusion = get_field<double>(s, "exclusion", w, c.exclusion);
    c.panel_nodes = get_field<int>(s, "panel_nodes", w, c.panel_nodes);
    require_positive(c.solver.step, w + "step");
    require_positive(c.solver.polish_step, w + "polish_step");
    require_positive(c.exclusion, w + "exclusion");
    if (c.per_arc < 2) throw ConfigError("config: field 'scattering.per_arc' must be at least 2");
    if (c.panel_nodes < 8) throw ConfigError("config: field 'scattering.panel_nodes' must be at least 8");
    if (s.contains("search_boxes")) {
      c.boxes.clear();
      for (const auto& b : s.at("search_boxes")) {
        if (!b.is_array() || b.size() != 4) throw ConfigError("config: field 'scattering.search_boxes' entries must be [re_lo, re_hi, im_lo, im_hi]");
        SearchBox sb{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
        if (!(sb.re_lo < sb.re_hi && sb.im_lo < sb.im_hi)) throw ConfigError("config: field 'scattering.search_boxes' has an empty box");
        c.boxes.push_back(sb);
      }
    }
  }

  if (j.contains("solitons")) {
    const json& z = j.at("solitons");
    if (!z.is_array()) throw ConfigError("config: field 'solitons' must be an array");
    for (std::size_t i = 0; i < z.size(); ++i) {
      const std::string w = "solitons[" + std::to_string(i) + "]";
      if (!z[i].contains("k0") || !z[i].contains("c")) throw ConfigError("config: field '" + w + "' needs k0 and c");
      SolitonZero s;
      s.k0 = get_complex(z[i].at("k0"), w + ".k0");
      s.c = get_complex(z[i].at("c"), w + ".c");
      if (s.k0.imag() != 0.0) s.d = d_from_c(s.k0, s.c);
      c.soliton_override.push_back(s);
    }
  }

  if (j.contains("asymptotics")) {
    const json& a = j.at("asymptotics");
    const std::string w = "asymptotics.";
    const auto win = get_list(a, "zeta_window", w, {c.window.lo, c.window.hi});
    if (win.size() != 2) throw ConfigError("config: field 'asymptotics.zeta_window' must have two entries");
    c.window = {win[0], win[1]};
    c.times = get_list(a, "times", w, c.times);
    if (a.contains("points")) {
      for (const auto& p : a.at("points")) {
        if (!p.is_array() || p.size() != 2) throw ConfigError("config: field 'asymptotics.points' entries must be [x, t]");
        c.points.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
    }
  }
  const double lo_limit = 1.0 / std::sqrt(3.0);
  if (!(c.window.lo > lo_limit && c.window.hi < 1.0 && c.window.lo < c.window.hi))
    throw ConfigError("config: field 'asymptotics.zeta_window' must lie inside (1/sqrt(3), 1)");
  for (double t : c.times)
    if (!(t >= 2.0)) throw ConfigError("config: field 'asymptotics.times' entries must be at least 2");

  if (j.contains("pde")) {
    const json& p = j.at("pde");
    const std::string w = "pde.";
    c.pde.L = get_field<double>(p, "L", w, c.pde.L);
    c.pde.n = get_field<int>(p, "n", w, c.pde.n);
    c.pde.dt = get_field<double>(p, "dt", w, c.pde.dt);
    c.pde.cutoff = get_field<double>(p, "cutoff", w, c.pde.cutoff);
    c.pde.dealias = get_field<bool>(p, "dealias", w, c.pde.dealias);
    require_positive(c.pde.L, w + "L");
    require_positive(c.pde.dt, w + "dt");
    require_positive(c.pde.cutoff, w + "cutoff");
    if (c.pde.n < 16 || c.pde.n % 2) throw ConfigError("config: field 'pde.n' must be an even integer >= 16");
    if (c.pde.cutoff >= 1.0) throw ConfigError("config: field 'pde.cutoff' must be below 1");
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    const std::string w = "tolerances.";
    c.tol.circle = get_field<double>(t, "circle", w, c.tol.circle);
    c.tol.endpoint = get_field<double>(t, "endpoint", w, c.tol.endpoint);
    c.tol.zero = get_field<double>(t, "zero", w, c.tol.zero);
    c.tol.mass = get_field<double>(t, "mass", w, c.tol.mass);
    c.tol.high_mode = get_field<double>(t, "high_mode", w, c.tol.high_mode);
    c.tol.panel = get_field<double>(t, "panel", w, c.tol.panel);
    c.tol.constraint = get_field<double>(t, "constraint", w, c.tol.constraint);
  }
  const std::pair<const char*, double> tols[] = {{"circle", c.tol.circle}, {"endpoint", c.tol.endpoint},
                                                 {"zero", c.tol.zero},     {"mass", c.tol.mass},
                                                 {"high_mode", c.tol.high_mode}, {"panel", c.tol.panel},
                                                 {"constraint", c.tol.constraint}};
  for (const auto& [n, v] : tols) require_positive(v, std::string("tolerances.") + n);
  return c;
}

RunConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config: file not found: " + path.string());
  return config_from_json_text(read_file(path), path.parent_path());
}

std::vector<std::pair<std::string, std::string>> env_override_names() {
  return {{"BSQ_TOL_CIRCLE", "max circle-relation and conjugation residual accepted by scatter"},
          {"BSQ_TOL_ENDPOINT", "max |r1(+-1) - 1| and |r2(+-1) + 1| accepted by scatter"},
          {"BSQ_TOL_ZERO", "Newton tolerance on |s11| for soliton zeros"},
          {"BSQ_TOL_MASS", "tolerance on the integral of u1"},
          {"BSQ_TOL_HIGH_MODE", "bound on sup |r1| along (0, i] for the high-mode validator"},
          {"BSQ_TOL_PANEL", "Chebyshev tail tolerance of the circle model of r1"},
          {"BSQ_TOL_CONSTRAINT", "bound on |q4 - conj(q5) - q2 conj(q6)| reported by asym"}};
}

void apply_env_overrides(Tolerances& tol) {
  const std::pair<const char*, double*> slots[] = {{"BSQ_TOL_CIRCLE", &tol.circle}, {"BSQ_TOL_ENDPOINT", &tol.endpoint},
                                                   {"BSQ_TOL_ZERO", &tol.zero},     {"BSQ_TOL_MASS", &tol.mass},
                                                   {"BSQ_TOL_HIGH_MODE", &tol.high_mode}, {"BSQ_TOL_PANEL", &tol.panel},
                                                   {"BSQ_TOL_CONSTRAINT", &tol.constraint}};
  for (const auto& [name, slot] : slots) {
    const char* v = std::getenv(name);
    if (!v || !*v) continue;
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v, &end);
    if (errno != 0 || end == v || *end != '\0' || !(x > 0) || !std::isfinite(x))
      throw ConfigError(std::string("environment: ") + name + " must be a positive number, got '" + v + "'");
    *slot = x;
  }
}

InitialData make_initial_data(const DataSpec& s) {
  if (s.type == "zero") return InitialData::zero(s.L);
  if (s.type == "gaussian") return InitialData::gaussian(s.amplitude, s.width, s.velocity, s.x0);
  if (s.type == "bandlimited_gaussian")
    return InitialData::bandlimited_gaussian(s.amplitude, s.width, s.velocity, s.xi_c, s.tau, s.x0);
  if (s.type == "soliton") return soliton_profile(s.speed, s.x0, s.L);
  if (s.type == "csv") {
    const CsvTable t = read_csv(s.path);
    std::size_t cx, c0, c1;
    try {
      cx = t.column("x");
      c0 = t.column("u0");
      c1 = t.column("u1");
    } catch (const std::exception&) {
      throw ConfigError("config: csv initial data needs columns x,u0,u1: " + s.path);
    }
    std::vector<double> x, u0, u1;
    for (const auto& r : t.rows) {
      x.push_back(r[cx]);
      u0.push_back(r[c0]);
      u1.push_back(r[c1]);
    }
    try {
      return InitialData::from_samples(x, u0, u1, "csv");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: csv initial data rejected: ") + e.what());
    }
  }
  throw ConfigError("config: unknown initial data type '" + s.type + "'");
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("io: cannot create directory " + dir.string() + ": " + ec.message());
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("io: cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp, ec);
      throw ConfigError("io: write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("io: cannot rename into " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("io: cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ConfigError("csv: missing column '" + name + "'");
}

std::string format_csv(const CsvTable& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += num(r[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size())
      throw ConfigError("csv: line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) + " fields");
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str()) throw ConfigError("csv: line " + std::to_string(lineno) + " has a non-numeric field");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ConfigError("csv: empty file");
  return t;
}

CsvTable read_csv(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("csv: file not found: " + path.string());
  return parse_csv(read_file(path));
}

std::string soliton_json(const SolitonData& Z) {
  json a = json::array();
  for (const auto& z : Z.zeros) {
    json e;
    e["k0"] = complex_json(z.k0);
    e["c"] = complex_json(z.c);
    if (z.d) e["d"] = complex_json(*z.d);
    e["s11_dot"] = complex_json(z.s11_dot);
    e["side"] = z.k0.real() > 0 ? "right" : "left";
    e["real"] = z.k0.imag() == 0.0;
    if (z.k0.imag() == 0.0) e["nonsingularity"] = complex_json(nonsingularity_value(z.k0, z.c));
    a.push_back(e);
  }
  json j;
  j["zeros"] = a;
  return j.dump(2) + "\n";
}

SolitonData parse_soliton_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("solitons: invalid JSON: ") + e.what());
  }
  if (!j.contains("zeros") || !j.at("zeros").is_array()) throw ConfigError("solitons: field 'zeros' must be an array");
  SolitonData Z;
  const json& a = j.at("zeros");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string w = "zeros[" + std::to_string(i) + "]";
    if (!a[i].contains("k0") || !a[i].contains("c")) throw ConfigError("solitons: field '" + w + "' needs k0 and c");
    SolitonZero z;
    z.k0 = get_complex(a[i].at("k0"), w + ".k0");
    z.c = get_complex(a[i].at("c"), w + ".c");
    if (a[i].contains("d")) z.d = get_complex(a[i].at("d"), w + ".d");
    else if (z.k0.imag() != 0.0) z.d = d_from_c(z.k0, z.c);
    if (a[i].contains("s11_dot")) z.s11_dot = get_complex(a[i].at("s11_dot"), w + ".s11_dot");
    Z.zeros.push_back(z);
  }
  return Z;
}

std::string validation_json(const ValidationReport& rep, const ReflectionData& refl, const EndpointLimits& ends,
                            const SolitonData& Z) {
  json j;
  j["mass_ok"] = rep.mass_ok;
  j["mass"] = rep.mass;
  j["no_high_modes"] = rep.no_high_modes;
  j["sup_r1_on_segment"] = rep.sup_r1_on_segment;
  j["generic_at_pm1"] = rep.generic_at_pm1;
  j["generic_probes"] = rep.generic_probes;
  j["generic_check_is_heuristic"] = true;
  j["zeros_in_regions"] = rep.zeros_in_regions;
  j["notes"] = rep.notes;
  j["all_ok"] = rep.all_ok();
  j["max_circle_residual"] = refl.max_circle_residual();
  j["max_conj_residual"] = refl.max_conj_residual();
  j["r1_at_plus1"] = complex_json(ends.r1_plus);
  j["r2_at_plus1"] = complex_json(ends.r2_plus);
  j["r1_at_minus1"] = complex_json(ends.r1_minus);
  j["r2_at_minus1"] = complex_json(ends.r2_minus);
  j["soliton_count"] = Z.zeros.size();
  return j.dump(2) + "\n";
}

CsvTable reflection_table(const ReflectionData& refl) {
  CsvTable t;
  t.header = {"arc", "theta", "r1_re", "r1_im", "r2_re", "r2_im", "circle_residual", "conj_residual"};
  for (const auto& s : refl.samples)
    t.rows.push_back({static_cast<double>(s.arc), s.theta, s.r1.real(), s.r1.imag(), s.r2.real(), s.r2.imag(),
                      s.circle_residual, s.conj_residual});
  return t;
}

CsvTable asym_table(const std::vector<AsymptoticEvaluation>& evs) {
  CsvTable t;
  t.header = {"x", "t", "zeta", "A1", "A2", "alpha1", "alpha2", "u_asym"};
  for (const auto& e : evs) t.rows.push_back({e.x, e.t, e.zeta, e.A1, e.A2, e.alpha1, e.alpha2, e.u});
  return t;
}

CsvTable snapshot_table(const FieldSnapshot& s) {
  CsvTable t;
  t.header = {"x", "u", "u_t"};
  for (std::size_t i = 0; i < s.x.size(); ++i) t.rows.push_back({s.x[i], s.u[i], s.ut[i]});
  return t;
}

CsvTable spectrum_table(const BoussinesqEvolver& ev, const FieldSnapshot& s) {
  CsvTable t;
  t.header = {"xi", "abs_u_hat"};
  const auto uh = ev.spectrum(s.u);
  const auto& xi = ev.wavenumbers();
  for (std::size_t i = 0; i < uh.size(); ++i) t.rows.push_back({xi[i], std::abs(uh[i]) * s.dx()});
  return t;
}

CsvTable compare_table(const std::vector<CompareReport>& reps) {
  CsvTable t;
  t.header = {"t", "x", "zeta", "u_pde", "u_asym", "abs_err"};
  for (const auto& r : reps)
    for (const auto& p : r.points) t.rows.push_back({r.t, p.x, p.zeta, p.u_pde, p.u_asym, std::abs(p.u_pde - p.u_asym)});
  return t;
}

}  // namespace bsq
