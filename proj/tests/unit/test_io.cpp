#include <cstdlib>
#include <random>

#include "doctest.h"

#include "bsq/io.hpp"

using namespace bsq;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("bsq_unit_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string config_error(const std::string& text) {
  try {
    config_from_json_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("csv round trip is exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1e3, 1e3);
  CsvTable t;
  t.header = {"a", "b", "c"};
  for (int i = 0; i < 50; ++i) t.rows.push_back({U(rng), U(rng) * 1e-200, std::ldexp(U(rng), -1000)});
  t.rows.push_back({0.0, -0.0, 1.0 / 3.0});
  const CsvTable back = parse_csv(format_csv(t));
  REQUIRE(back.header == t.header);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(back.rows[i][j] == t.rows[i][j]);
  CHECK(back.column("b") == 1);
  CHECK_THROWS_AS(back.column("zz"), ConfigError);
}

TEST_CASE("csv parse errors") {
  CHECK_THROWS_AS(parse_csv(""), ConfigError);
  CHECK_THROWS_AS(parse_csv("x,y\n1,2,3\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv("x,y\n1,abc\n"), ConfigError);
  const CsvTable t = parse_csv("# comment\r\nx,y\r\n1,2\r\n");
  CHECK(t.rows.size() == 1);
  CHECK(t.rows[0][1] == 2.0);
}

TEST_CASE("atomic write replaces the file and leaves no temporaries") {
  const fs::path d = scratch_dir("atomic");
  const fs::path p = d / "sub" / "out.txt";
  write_atomic(p, "first\n");
  CHECK(read_file(p) == "first\n");
  write_atomic(p, "second\n");
  CHECK(read_file(p) == "second\n");
  int n = 0;
  for (const auto& e : fs::directory_iterator(p.parent_path())) {
    (void)e;
    ++n;
  }
  CHECK(n == 1);
  // a directory in the way of the target cannot be replaced
  fs::create_directories(d / "blocked");
  fs::create_directories(d / "blocked" / "inner");
  CHECK_THROWS_AS(write_atomic(d / "blocked", "x"), ConfigError);
  CHECK(fs::is_directory(d / "blocked" / "inner"));
  fs::remove_all(d);
}

TEST_CASE("default config") {
  const RunConfig c = default_config();
  CHECK(c.data.type == "bandlimited_gaussian");
  CHECK(c.per_arc * 6 >= 200);
  CHECK(c.times == std::vector<double>{60.0, 120.0, 240.0});
  const RunConfig e = config_from_json_text("{}");
  CHECK(e.per_arc == c.per_arc);
  CHECK(e.window.lo == c.window.lo);
}

TEST_CASE("config values are read") {
  const RunConfig c = config_from_json_text(R"({
    "initial_data": {"type": "gaussian", "amplitude": 0.2, "width": 3},
    "scattering": {"per_arc": 10, "search_boxes": [[1.1, 3, -0.2, 0.2]]},
    "solitons": [{"k0": 1.5, "c": [0.1, 0.2]}, {"k0": [1.2, 0.3], "c": 0.5}],
    "asymptotics": {"zeta_window": [0.65, 0.9], "times": [50, 100], "points": [[70, 100]]},
    "pde": {"L": 300, "n": 1200},
    "tolerances": {"circle": 1e-5}
  })");
  CHECK(c.data.type == "gaussian");
  CHECK(c.data.amplitude == 0.2);
  CHECK(c.per_arc == 10);
  REQUIRE(c.boxes.size() == 1);
  CHECK(c.boxes[0].re_lo == 1.1);
  REQUIRE(c.soliton_override.size() == 2);
  CHECK(c.soliton_override[0].c == cplx(0.1, 0.2));
  CHECK_FALSE(c.soliton_override[0].d.has_value());
  CHECK(c.soliton_override[1].d.has_value());
  CHECK(c.window.lo == 0.65);
  CHECK(c.points.size() == 1);
  CHECK(c.pde.n == 1200);
  CHECK(c.tol.circle == 1e-5);
  CHECK(c.tol.zero == Tolerances{}.zero);
}

TEST_CASE("config errors name the field") {
  CHECK(config_error("{\"scattering\": {\"per_arc\": \"many\"}}").find("scattering.per_arc") != std::string::npos);
  CHECK(config_error("{\"initial_data\": {\"type\": \"sech\"}}").find("initial_data.type") != std::string::npos);
  CHECK(config_error("{\"initial_data\": {\"type\": \"csv\"}}").find("initial_data.path") != std::string::npos);
  CHECK(config_error("{\"initial_data\": {\"type\": \"csv\", \"path\": \"/no/such.csv\"}}").find("initial_data.path") !=
        std::string::npos);
  CHECK(config_error("{\"initial_data\": {\"width\": -1}}").find("initial_data.width") != std::string::npos);
  CHECK(config_error("{\"initial_data\": {\"type\": \"soliton\", \"speed\": 0.9}}").find("initial_data.speed") !=
        std::string::npos);
  CHECK(config_error("{\"asymptotics\": {\"zeta_window\": [0.5, 0.9]}}").find("asymptotics.zeta_window") !=
        std::string::npos);
  CHECK(config_error("{\"asymptotics\": {\"times\": [1]}}").find("asymptotics.times") != std::string::npos);
  CHECK(config_error("{\"pde\": {\"cutoff\": 1.1}}").find("pde.cutoff") != std::string::npos);
  CHECK(config_error("{\"pde\": {\"n\": 1001}}").find("pde.n") != std::string::npos);
  CHECK(config_error("{\"tolerances\": {\"mass\": 0}}").find("tolerances.mass") != std::string::npos);
  CHECK(config_error("{\"solitons\": [{\"k0\": 1.5}]}").find("solitons[0]") != std::string::npos);
  CHECK(config_error("{\"solitons\": [{\"k0\": \"x\", \"c\": 1}]}").find("solitons[0].k0") != std::string::npos);
  CHECK(config_error("[1, 2]").find("top level") != std::string::npos);
  CHECK(config_error("{bad").find("invalid JSON") != std::string::npos);
  CHECK_THROWS_AS(load_config("/no/such/config.json"), ConfigError);
}

TEST_CASE("csv initial data path is resolved against the config directory") {
  const fs::path d = scratch_dir("csvdata");
  CsvTable t;
  t.header = {"x", "u0", "u1"};
  for (int i = 0; i <= 200; ++i) {
    const double x = -10.0 + 0.1 * i;
    t.rows.push_back({x, 0.1 * std::exp(-x * x / 4.0), -0.1 * x * std::exp(-x * x / 4.0)});
  }
  write_atomic(d / "data.csv", format_csv(t));
  write_atomic(d / "cfg.json", R"({"initial_data": {"type": "csv", "path": "data.csv"}})");
  const RunConfig c = load_config(d / "cfg.json");
  CHECK(fs::path(c.data.path) == d / "data.csv");
  const InitialData data = make_initial_data(c.data);
  CHECK(data.eval(0.0).u0 == doctest::Approx(0.1).epsilon(1e-6));
  CsvTable bad;
  bad.header = {"x", "u"};
  bad.rows.push_back({0.0, 1.0});
  write_atomic(d / "bad.csv", format_csv(bad));
  DataSpec s;
  s.type = "csv";
  s.path = (d / "bad.csv").string();
  CHECK_THROWS_AS(make_initial_data(s), ConfigError);
  fs::remove_all(d);
}

TEST_CASE("environment overrides") {
  Tolerances t;
  ::setenv("BSQ_TOL_CIRCLE", "3e-7", 1);
  ::setenv("BSQ_TOL_HIGH_MODE", "", 1);
  apply_env_overrides(t);
  CHECK(t.circle == 3e-7);
  CHECK(t.high_mode == Tolerances{}.high_mode);
  ::setenv("BSQ_TOL_MASS", "-1", 1);
  CHECK_THROWS_AS(apply_env_overrides(t), ConfigError);
  ::setenv("BSQ_TOL_MASS", "1e-9x", 1);
  CHECK_THROWS_AS(apply_env_overrides(t), ConfigError);
  ::unsetenv("BSQ_TOL_MASS");
  ::unsetenv("BSQ_TOL_CIRCLE");
  ::unsetenv("BSQ_TOL_HIGH_MODE");
  const auto names = env_override_names();
  CHECK(names.size() == 7);
  for (const auto& [n, d] : names) {
    CHECK(n.rfind("BSQ_TOL_", 0) == 0);
    CHECK_FALSE(d.empty());
  }
}

TEST_CASE("soliton json round trip") {
  SolitonData Z;
  SolitonZero a;
  a.k0 = 1.5;
  a.c = cplx(0.1, -0.2);
  a.s11_dot = cplx(3.0, 0.5);
  SolitonZero b;
  b.k0 = cplx(-0.7, -0.1);
  b.c = cplx(0.3, 0.4);
  b.d = d_from_c(b.k0, b.c);
  Z.zeros = {a, b};
  const SolitonData back = parse_soliton_json(soliton_json(Z));
  REQUIRE(back.zeros.size() == 2);
  CHECK(back.zeros[0].k0 == a.k0);
  CHECK(back.zeros[0].c == a.c);
  CHECK(back.zeros[0].s11_dot == a.s11_dot);
  CHECK_FALSE(back.zeros[0].d.has_value());
  CHECK(back.zeros[1].k0 == b.k0);
  CHECK(*back.zeros[1].d == *b.d);
  CHECK(parse_soliton_json("{\"zeros\": []}").zeros.empty());
  CHECK_THROWS_AS(parse_soliton_json("{}"), ConfigError);
  CHECK_THROWS_AS(parse_soliton_json("{\"zeros\": [{\"k0\": 1}]}"), ConfigError);
}

TEST_CASE("output tables have a fixed column order") {
  CHECK(asym_table({}).header ==
        std::vector<std::string>{"x", "t", "zeta", "A1", "A2", "alpha1", "alpha2", "u_asym"});
  CHECK(compare_table({}).header == std::vector<std::string>{"t", "x", "zeta", "u_pde", "u_asym", "abs_err"});
  CHECK(reflection_table({}).header == std::vector<std::string>{"arc", "theta", "r1_re", "r1_im", "r2_re", "r2_im",
                                                                "circle_residual", "conj_residual"});
  FieldSnapshot s;
  CHECK(snapshot_table(s).header == std::vector<std::string>{"x", "u", "u_t"});
  AsymptoticEvaluation ev;
  ev.x = 75;
  ev.t = 100;
  ev.u = 0.25;
  const CsvTable t = asym_table({ev});
  CHECK(t.rows[0][t.column("u_asym")] == 0.25);
}
