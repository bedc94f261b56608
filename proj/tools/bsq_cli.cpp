#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "bsq/io.hpp"

namespace fs = std::filesystem;
using namespace bsq;

namespace {

constexpr int kOk = 0, kNumerical = 1, kConfig = 2;

struct Ctx {
  RunConfig cfg;
  fs::path out;
  int jobs = 1;
};

std::string tname(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

int cmd_scatter(const Ctx& c) {
  const InitialData data = make_initial_data(c.cfg.data);
  if (std::abs(data.mass_u1()) > c.cfg.tol.mass)
    throw ConfigError("scatter: field 'initial_data' violates the mass condition (integral of u1 = " +
                      std::to_string(data.mass_u1()) + ")");
  ScatteringSolver S(data, c.cfg.solver);
  const ReflectionData refl = reflection_coefficients(S, c.cfg.per_arc, c.cfg.exclusion, true);
  const EndpointLimits ends = endpoint_limits(S);
  SolitonData Z;
  if (!c.cfg.soliton_override.empty()) {
    Z.zeros = c.cfg.soliton_override;
  } else {
    std::vector<cplx> zeros;
    for (const auto& b : c.cfg.boxes)
      for (cplx k : find_s11_zeros(S, b, c.cfg.tol.zero)) zeros.push_back(k);
    Z = residue_constants(S, zeros);
  }
  ValidatorOptions vo;
  vo.mass_tol = c.cfg.tol.mass;
  vo.high_mode_tol = c.cfg.tol.high_mode;
  const ValidationReport rep = assumption_validators(S, Z, vo);

  write_atomic(c.out / "reflection.csv", format_csv(reflection_table(refl)));
  write_atomic(c.out / "solitons.json", soliton_json(Z));
  write_atomic(c.out / "validation.json", validation_json(rep, refl, ends, Z));

  int code = kOk;
  if (refl.max_circle_residual() > c.cfg.tol.circle || refl.max_conj_residual() > c.cfg.tol.circle) {
    std::cerr << "scatter: circle relation residual above tolerance (" << refl.max_circle_residual() << ", "
              << refl.max_conj_residual() << ")\n";
    code = kNumerical;
  }
  const double end_err = std::max({std::abs(ends.r1_plus - 1.0), std::abs(ends.r2_plus + 1.0),
                                   std::abs(ends.r1_minus - 1.0), std::abs(ends.r2_minus + 1.0)});
  if (!data.is_zero() && end_err > c.cfg.tol.endpoint) {
    std::cerr << "scatter: endpoint values off by " << end_err << "\n";
    code = kNumerical;
  }
  if (!rep.mass_ok || !rep.no_high_modes || !rep.zeros_in_regions) {
    std::cerr << "scatter: assumption validator failed\n";
    code = kNumerical;
  }
  if (!rep.generic_at_pm1) std::cerr << "scatter: warning: heuristic genericity probe at +-1 below floor\n";
  std::cout << "scatter: " << refl.samples.size() << " samples, " << Z.zeros.size() << " zeros, residual "
            << refl.max_circle_residual() << "\n";
  return code;
}

std::vector<AsymptoticEvaluation> sweep(const AsymptoticModel& M, const std::vector<std::pair<double, double>>& pts,
                                        int jobs) {
  std::vector<AsymptoticEvaluation> out(pts.size());
  std::vector<std::exception_ptr> errs(jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      try {
        for (std::size_t i = j; i < pts.size(); i += jobs) out[i] = M.evaluate(pts[i].first, pts[i].second);
      } catch (...) {
        errs[j] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

int cmd_asym(const Ctx& c) {
  const fs::path zpath = c.out / "solitons.json";
  if (!fs::exists(zpath)) throw ConfigError("asym: missing " + zpath.string() + " (run scatter first)");
  const SolitonData Z = parse_soliton_json(read_file(zpath));
  const InitialData data = make_initial_data(c.cfg.data);
  ScatteringSolver S(data, c.cfg.solver);
  CircleReflection C(S, c.cfg.panel_nodes, c.cfg.tol.panel);
  const AsymptoticModel M(C, Z, {}, c.cfg.window);

  std::vector<std::pair<double, double>> pts;
  if (!c.cfg.points.empty()) {
    for (const auto& [x, t] : c.cfg.points) {
      const double z = x / t;
      if (!(t >= 2.0) || z < c.cfg.window.lo || z > c.cfg.window.hi) {
        std::cerr << "asym: warning: skipping (x, t) = (" << x << ", " << t << "), outside the zeta window\n";
        continue;
      }
      pts.emplace_back(x, t);
    }
  } else {
    const double dx = 2.0 * c.cfg.pde.L / c.cfg.pde.n;
    for (double t : c.cfg.times)
      for (int i = 0; i < c.cfg.pde.n; ++i) {
        const double x = -c.cfg.pde.L + dx * i;
        const double z = x / t;
        if (z >= c.cfg.window.lo && z <= c.cfg.window.hi) pts.emplace_back(x, t);
      }
  }
  const auto evs = sweep(M, pts, c.jobs);
  write_atomic(c.out / "asym.csv", format_csv(asym_table(evs)));

  nlohmann::json diag = nlohmann::json::array();
  bool constraint_ok = true;
  for (int i = 0; i <= 4; ++i) {
    const double z = c.cfg.window.lo + (c.cfg.window.hi - c.cfg.window.lo) * i / 4.0;
    const SectorIngredients in = M.ingredients(z);
    nlohmann::json e;
    e["zeta"] = z;
    e["nuhat1"] = in.nu.nuhat1;
    e["nuhat2"] = in.nu.nuhat2;
    e["constraint_residual"] = in.q.constraint_residual;
    e["arg_P_ratio1"] = std::arg(in.P_ratio1);
    e["arg_P_ratio2"] = std::arg(in.P_ratio2);
    diag.push_back(e);
    if (in.q.constraint_residual > c.cfg.tol.constraint) constraint_ok = false;
  }
  write_atomic(c.out / "asym_diagnostics.json", diag.dump(2) + "\n");
  if (!constraint_ok) std::cerr << "asym: warning: q constraint residual above tolerance\n";
  std::cout << "asym: " << evs.size() << " points\n";
  return kOk;
}

int cmd_evolve(const Ctx& c) {
  const InitialData data = make_initial_data(c.cfg.data);
  BoussinesqEvolver ev(c.cfg.pde);
  const FieldSnapshot s0 = ev.initial(data);
  std::vector<double> stops = c.cfg.times;
  std::sort(stops.begin(), stops.end());
  try {
    const auto snaps = ev.run(s0, stops);
    for (const auto& s : snaps) {
      write_atomic(c.out / ("snapshot_t" + tname(s.t) + ".csv"), format_csv(snapshot_table(s)));
      write_atomic(c.out / ("spectrum_t" + tname(s.t) + ".csv"), format_csv(spectrum_table(ev, s)));
    }
    std::cout << "evolve: " << snaps.size() << " snapshots, mass drift " << snaps.back().mass() - s0.mass() << "\n";
  } catch (const InstabilityError& e) {
    CsvTable t;
    t.header = {"xi", "abs_u_hat"};
    for (std::size_t i = 0; i < e.spectrum().size(); ++i) t.rows.push_back({ev.wavenumbers()[i], e.spectrum()[i]});
    write_atomic(c.out / "instability_spectrum.csv", format_csv(t));
    std::cerr << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}

FieldSnapshot snapshot_from_csv(const fs::path& p, double t) {
  const CsvTable tab = read_csv(p);
  const std::size_t cx = tab.column("x"), cu = tab.column("u"), cut = tab.column("u_t");
  FieldSnapshot s;
  s.t = t;
  for (const auto& r : tab.rows) {
    s.x.push_back(r[cx]);
    s.u.push_back(r[cu]);
    s.ut.push_back(r[cut]);
  }
  if (s.x.size() < 2) throw ConfigError("compare: snapshot too short: " + p.string());
  const double dx = s.x[1] - s.x[0];
  s.L = -s.x.front();
  for (std::size_t i = 1; i < s.x.size(); ++i)
    if (std::abs(s.x[i] - s.x[i - 1] - dx) > 1e-9) throw ConfigError("compare: snapshot grid not uniform: " + p.string());
  if (std::abs(2.0 * s.L - dx * s.x.size()) > 1e-6 * s.L) throw ConfigError("compare: snapshot grid is not periodic: " + p.string());
  return s;
}

int cmd_compare(const Ctx& c) {
  const CsvTable asym = read_csv(c.out / "asym.csv");
  const std::size_t cx = asym.column("x"), ct = asym.column("t"), cz = asym.column("zeta"), cu = asym.column("u_asym");
  std::map<double, std::vector<ComparePoint>> by_t;
  for (const auto& r : asym.rows) by_t[r[ct]].push_back({r[cx], r[cz], 0.0, r[cu]});
  std::vector<CompareReport> reps;
  for (const auto& [t, pts] : by_t) {
    const fs::path p = c.out / ("snapshot_t" + tname(t) + ".csv");
    const FieldSnapshot s = snapshot_from_csv(p, t);
    try {
      reps.push_back(compare_values(pts, s));
    } catch (const DomainError& e) {
      throw ConfigError(std::string(e.what()) + " (" + p.string() + ")");
    }
  }
  write_atomic(c.out / "compare.csv", format_csv(compare_table(reps)));

  nlohmann::json j;
  nlohmann::json per = nlohmann::json::array();
  std::vector<double> ts, env, err;
  for (const auto& r : reps) {
    per.push_back({{"t", r.t}, {"points", r.points.size()}, {"max_err", r.max_err}, {"rms_err", r.rms_err},
                   {"max_u_pde", r.max_u_pde}, {"max_u_asym", r.max_u_asym}});
    if (r.max_u_pde > 0 && r.max_err > 0) {
      ts.push_back(r.t);
      env.push_back(r.max_u_pde);
      err.push_back(r.max_err);
    }
  }
  j["times"] = per;
  std::string summary = "t,points,max_err,rms_err,max_u_pde,max_u_asym\n";
  for (const auto& r : reps) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%g,%zu,%.6e,%.6e,%.6e,%.6e\n", r.t, r.points.size(), r.max_err, r.rms_err,
                  r.max_u_pde, r.max_u_asym);
    summary += buf;
  }
  if (ts.size() >= 2) {
    j["envelope_exponent"] = fit_exponent(ts, env);
    j["error_exponent"] = fit_exponent(ts, err);
    nlohmann::json ratios = nlohmann::json::array();
    for (std::size_t i = 1; i < err.size(); ++i) ratios.push_back(err[i] / err[i - 1]);
    j["error_ratios"] = ratios;
    char buf[160];
    std::snprintf(buf, sizeof buf, "envelope_exponent %.4f\nerror_exponent %.4f\n", fit_exponent(ts, env),
                  fit_exponent(ts, err));
    summary += buf;
  } else {
    j["envelope_exponent"] = nullptr;
    j["error_exponent"] = nullptr;
  }
  write_atomic(c.out / "compare.json", j.dump(2) + "\n");
  write_atomic(c.out / "compare_summary.txt", summary);
  std::cout << summary;
  return kOk;
}

int cmd_selftest(const Ctx&) {
  int fails = 0;
  auto line = [&](const char* name, bool ok, double v, double tol) {
    std::printf("%s %-34s value=%.3e tol=%.1e\n", ok ? "PASS" : "FAIL", name, v, tol);
    if (!ok) ++fails;
  };
  {
    const SaddleSet s = saddle_points(0.7);
    const double h = 1e-6;
    const double d = std::abs((phi(2, 1, 0.7, s.k4 + h) - phi(2, 1, 0.7, s.k4 - h)) / (2.0 * h));
    line("saddle point k4 stationary", d < 1e-8, d, 1e-8);
    const ZStar z = z_star(0.7);
    const cplx p = -kI * kOmega * s.k4 * z.z1;
    line("z1 star normalization", std::abs(p.imag()) < 1e-12 && p.real() > 0, std::abs(p.imag()), 1e-12);
  }
  {
    const ModelBeta m = model_beta1(cplx(0.3, -0.2), cplx(0.4, 0.1));
    line("model 1 beta product", std::abs(m.b12 * m.b21 - m.nuhat) < 1e-12, std::abs(m.b12 * m.b21 - m.nuhat), 1e-12);
    const cplx q2(0.2, 0.1), q5(0.3, -0.2), q6(-0.1, 0.25);
    const ModelBeta m2 = model_beta2(q2, std::conj(q5) + q2 * std::conj(q6), q5, q6);
    line("model 2 beta product", std::abs(m2.b12 * m2.b21 - m2.nuhat) < 1e-12, std::abs(m2.b12 * m2.b21 - m2.nuhat), 1e-12);
  }
  {
    const InitialData zero = InitialData::zero();
    ScatteringSolver S(zero);
    const cplx r = S.r1(std::polar(1.0, 1.0));
    line("zero data reflection", std::abs(r) == 0.0, std::abs(r), 0.0);
    const AsymptoticModel M(CircleReflection::zero(), SolitonData{});
    const double u = M.evaluate(0.75 * 100.0, 100.0).u;
    line("zero data asymptotics", u == 0.0, std::abs(u), 0.0);
  }
  {
    const double v = 1.2;
    ScatteringSolver S(soliton_profile(v, 0.0, 60.0));
    const auto zs = find_s11_zeros(S, {1.02, 4.0, -0.49, 0.51});
    const double err = zs.size() == 1 ? std::abs(zs[0] - (v + std::sqrt(v * v - 1.0))) : 1.0;
    line("one-soliton zero location", err < 1e-8, err, 1e-8);
  }
  {
    EvolveOptions o;
    o.L = 100.0;
    o.n = 400;
    BoussinesqEvolver ev(o);
    const FieldSnapshot s0 = ev.initial(InitialData::gaussian(0.05, 2.0, 0.0));
    const FieldSnapshot s = ev.evolve(s0, 5.0);
    const double drift = std::abs(s.mass() - s0.mass());
    line("pde mass conservation", drift < 1e-8 * 5.0, drift, 5e-8);
  }
  std::printf("%s\n", fails ? "selftest: FAILED" : "selftest: ok");
  return fails ? kNumerical : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boussinesq scattering, Sector IV asymptotics and PDE reference"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  int jobs = 1;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
  std::string env_help = "\nTolerance overrides (environment):\n";
  for (const auto& [n, d] : env_override_names()) env_help += "  " + n + "  " + d + "\n";
  app.footer(env_help);
  auto* sc = app.add_subcommand("scatter", "reflection coefficients, soliton zeros, validators");
  auto* as = app.add_subcommand("asym", "leading-order asymptotics over the zeta window");
  auto* ev = app.add_subcommand("evolve", "filtered pseudospectral PDE reference");
  auto* cp = app.add_subcommand("compare", "compare asym and evolve outputs");
  auto* st = app.add_subcommand("selftest", "quick internal consistency checks");
  for (auto* s : {sc, as, ev, cp, st}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    Ctx c;
    c.cfg = config_path.empty() ? default_config() : load_config(config_path);
    apply_env_overrides(c.cfg.tol);
    c.out = out_dir;
    c.jobs = jobs;
    if (*sc) return cmd_scatter(c);
    if (*as) return cmd_asym(c);
    if (*ev) return cmd_evolve(c);
    if (*cp) return cmd_compare(c);
    if (*st) return cmd_selftest(c);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kConfig;
}
