// conewave: batch front end.
//
//   conewave <forward|verify|invert|geom-check> [-c file] [-o dir] [--seed n] [--set key=value]...
//
// Exit status: 0 success, 1 a check exceeded its tolerance, 2 configuration
// error, 3 solver non-convergence. Outputs go to <root>/<output_dir>, where
// root is "." unless CONEWAVE_OUTPUT_ROOT is set (absolute output_dir wins).

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "conewave/error.hpp"
#include "conewave/fd_oracle.hpp"
#include "conewave/geometry.hpp"
#include "conewave/goursat.hpp"
#include "conewave/identity.hpp"
#include "conewave/inversion.hpp"
#include "conewave/lippmann_schwinger.hpp"
#include "conewave/report.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace cw;
using cli::RunConfig;
using report::json;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

using Keys = std::map<std::string, std::string>;

Keys common_keys(const std::string& sub) {
  return {{"output_dir", "out/" + sub}, {"seed", "1"}, {"exec", "parallel"}};
}

void add_ls_keys(Keys& k) {
  const forward::LsOptions d;
  k["ls.d_sigma"] = report::format_double(d.d_sigma);
  k["ls.n_r"] = std::to_string(d.n_r);
  k["ls.n_mu"] = std::to_string(d.n_mu);
  k["ls.n_psi"] = std::to_string(d.n_psi);
  k["ls.n_u"] = std::to_string(d.n_u);
  k["ls.n_theta"] = std::to_string(d.n_theta);
  k["ls.tol"] = report::format_double(d.tol);
  k["ls.max_iterations"] = std::to_string(d.max_iterations);
  k["ls.sweep"] = forward::to_string(d.sweep);
}

Exec exec_of(const RunConfig& c) {
  const auto& e = c.text("exec");
  if (e == "serial") return Exec::serial;
  if (e == "parallel") return Exec::parallel;
  throw ConfigError("config key 'exec': expected serial or parallel, got '" + e + "'");
}

forward::LsOptions ls_options(const RunConfig& c) {
  forward::LsOptions o;
  o.d_sigma = c.number("ls.d_sigma");
  o.n_r = c.integer("ls.n_r");
  o.n_mu = c.integer("ls.n_mu");
  o.n_psi = c.integer("ls.n_psi");
  o.n_u = c.integer("ls.n_u");
  o.n_theta = c.integer("ls.n_theta");
  o.tol = c.number("ls.tol");
  o.max_iterations = c.integer("ls.max_iterations");
  o.sweep = forward::sweep_from_string(c.text("ls.sweep"));
  o.exec = exec_of(c);
  return o;
}

CoefficientProfile profile_arg(const RunConfig& c, const std::string& key) {
  const auto& v = c.text(key);
  if (v == "zero") return CoefficientProfile::zero();
  return load_profile_csv(v);
}

fs::path output_dir(const RunConfig& c) {
  fs::path dir = c.text("output_dir");
  if (dir.is_absolute()) return dir;
  const char* root = std::getenv("CONEWAVE_OUTPUT_ROOT");
  return (root && *root ? fs::path(root) : fs::path(".")) / dir;
}

std::string csv_of(const ReceiverWaveform& w) {
  std::ostringstream os;
  write_waveform_csv(os, w);
  return os.str();
}

// Demo profiles: sin^2 bump in the focal sum, linear radial damping.
CoefficientProfile demo_ellipsoidal(double amp, double lo, double hi) {
  const double k = kPi / (hi - lo);
  return CoefficientProfile::ellipsoidal(Profile1D::analytic(
      [=](double s) { return s < lo ? 0.0 : amp * std::pow(std::sin(k * (s - lo)), 2); },
      [=](double s) { return s < lo ? 0.0 : amp * k * std::sin(2 * k * (s - lo)); }, 0.9, hi));
}

CoefficientProfile demo_radial(double a0, double r_max) {
  return CoefficientProfile::radial(Profile1D::analytic(
      [=](double r) { return a0 * (1 - r / r_max); }, [=](double) { return -a0 / r_max; }, 0.0, r_max));
}

// ---------------------------------------------------------------- forward

Keys forward_keys() {
  Keys k = common_keys("forward");
  add_ls_keys(k);
  k.insert({{"profile", "zero"},
            {"kind", "potential"},
            {"solver", "ls"},
            {"source", "0,0,0"},
            {"receiver", "1,0,0"},
            {"T", "2"},
            {"dt", "0.05"},
            {"goursat.h", "0.01"},
            {"goursat.tolerance", "0"},
            {"fd.h", "0.01"},
            {"fd.eps", "0.05"},
            {"fd.cfl", "0.5"}});
  return k;
}

int cmd_forward(const RunConfig& c) {
  const auto q = profile_arg(c, "profile");
  const auto kind = forward::kind_from_string(c.text("kind"));
  const auto& solver = c.text("solver");
  const double T = c.number("T");
  const Vec3 src = c.vec3("source"), rcv = c.vec3("receiver");
  ReceiverWaveform w;
  if (solver == "ls") {
    if (kind != forward::Kind::potential) throw ConfigError("solver ls supports kind = potential only");
    auto o = ls_options(c);
    w = forward::LsField(q, src, T, o).waveform(rcv, c.number("dt"));
  } else if (solver == "goursat") {
    if (src.norm() != 0.0 || rcv.norm() != 0.0)
      throw ConfigError("solver goursat needs source = receiver = 0,0,0");
    forward::RadialProblem p;
    p.kind = kind;
    p.coefficient = q;
    p.T = T;
    p.h = c.number("goursat.h");
    p.tolerance = c.number("goursat.tolerance");
    w = forward::radial_goursat_solve(p).at_origin;
  } else if (solver == "fd") {
    forward::FdOptions o;
    o.h = c.number("fd.h");
    o.eps = c.number("fd.eps");
    o.cfl = c.number("fd.cfl");
    o.exec = exec_of(c);
    w = forward::fd_oracle_solve(q, kind, src, rcv, T, o);
  } else {
    throw ConfigError("config key 'solver': expected ls, goursat or fd, got '" + solver + "'");
  }
  report::ArtifactWriter out(output_dir(c), c.resolved());
  out.write_csv("waveform.csv", csv_of(w));
  out.write_json("report.json", {{"waveform", report::to_json(w)}});
  out.finish({{"status", "ok"}});
  std::cout << "forward: " << w.values.size() << " samples, sup|v| = " << w.sup_norm() << " -> "
            << out.dir().string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- verify

Keys verify_keys() {
  Keys k = common_keys("verify");
  add_ls_keys(k);
  k.insert({{"suites", "lemma1,lemma2,iterms,atilde,delta_prime"},
            {"q1", "zero"},
            {"q2", "zero"},
            {"A1", "zero"},
            {"A2", "zero"},
            {"lemma1.tau", "1.2,1.4,1.6,1.8,2"},
            {"lemma2.tau", "0.6,0.7,0.8,0.9,1"},
            {"sigma", "0.2,0.4,0.6,0.8"},
            {"goursat.h", "0.005"},
            {"tol.lemma1", "0.05"},
            {"tol.lemma2", "0.05"},
            {"tol.iterms", "0.02"},
            {"tol.atilde", "0.05"},
            {"tol.delta_prime", "1e-8"}});
  return k;
}

bool write_identity(report::ArtifactWriter& out, const std::string& name, identity::IdentityReport r,
                    double tol, json& summary) {
  r.tolerances["rel_residual"] = tol;
  const bool ok = r.rel_residual <= tol;
  std::ostringstream csv;
  report::write_identity_csv(csv, r);
  out.write_csv(name + ".csv", csv.str());
  out.write_json(name + ".json", report::to_json(r));
  summary[name] = {{"rel_residual", r.rel_residual}, {"tolerance", tol}, {"pass", ok}};
  std::cout << name << ": rel residual " << r.rel_residual << " (tol " << tol << ") "
            << (ok ? "ok" : "FAILED") << '\n';
  return ok;
}

int cmd_verify(const RunConfig& c) {
  std::set<std::string> suites;
  for (const auto& s : c.words("suites")) {
    if (s != "lemma1" && s != "lemma2" && s != "iterms" && s != "atilde" && s != "delta_prime")
      throw ConfigError("config key 'suites': unknown suite '" + s + "'");
    suites.insert(s);
  }
  identity::PotentialOptions popt;
  popt.ls = ls_options(c);
  const double h = c.number("goursat.h");
  report::ArtifactWriter out(output_dir(c), c.resolved());
  json summary = json::object();
  bool ok = true;

  if (suites.count("lemma1") || suites.count("lemma2")) {
    const auto q1 = profile_arg(c, "q1"), q2 = profile_arg(c, "q2");
    if (suites.count("lemma1"))
      ok &= write_identity(out, "lemma1", identity::verify_lemma1(q1, q2, c.numbers("lemma1.tau"), popt),
                           c.number("tol.lemma1"), summary);
    if (suites.count("lemma2"))
      ok &= write_identity(out, "lemma2",
                           identity::verify_estimate_lemma2(q1, q2, c.numbers("lemma2.tau"), popt),
                           c.number("tol.lemma2"), summary);
  }
  if (suites.count("iterms") || suites.count("atilde")) {
    const auto A1 = profile_arg(c, "A1"), A2 = profile_arg(c, "A2");
    const auto sigma = c.numbers("sigma");
    if (sigma.empty()) throw ConfigError("config key 'sigma': need at least one value");
    if (suites.count("atilde"))
      ok &= write_identity(out, "atilde", identity::atilde_ode_residual(A1, A2, sigma, h),
                           c.number("tol.atilde"), summary);
    if (suites.count("iterms")) {
      const double smax = *std::max_element(sigma.begin(), sigma.end());
      const double T = std::ceil(2 * smax / h - 1e-9) * h;
      const identity::DampingPair pair(A1, A2, T, h);
      const double tol = c.number("tol.iterms");
      json rows = json::array();
      std::ostringstream csv;
      csv << "sigma,I1,I2,I3,I4,I5,data,sum_residual\n";
      bool pass = true;
      for (double s : sigma) {
        const auto b = identity::iterm_breakdown(pair, s);
        const double scale = std::max({std::abs(b.I1 + b.I2), std::abs(b.I3), std::abs(b.I4),
                                       std::abs(b.I5), std::abs(b.data)});
        pass &= b.sum_residual <= tol * scale;
        rows.push_back(report::to_json(b));
        csv << report::format_double(s);
        for (double v : {b.I1, b.I2, b.I3, b.I4, b.I5, b.data, b.sum_residual})
          csv << ',' << report::format_double(v);
        csv << '\n';
      }
      out.write_csv("iterms.csv", csv.str());
      out.write_json("iterms.json", {{"rows", rows}, {"tolerance", tol}});
      summary["iterms"] = {{"tolerance", tol}, {"pass", pass}};
      std::cout << "iterms: " << (pass ? "ok" : "FAILED") << '\n';
      ok &= pass;
    }
  }
  if (suites.count("delta_prime")) {
    const double tol = c.number("tol.delta_prime");
    std::ostringstream csv;
    csv << "r,constant,expected_constant,inverse_square,expected_inverse_square\n";
    double worst = 0.0;
    for (double r : {0.25, 0.5, 1.0, 2.0}) {
      const double a = identity::delta_prime_surface(r, [](const Vec3&) { return 1.0; });
      const double b = identity::delta_prime_surface(r, [](const Vec3& x) { return 1.0 / x.dot(x); });
      worst = std::max({worst, std::abs(a + 8 * kPi * r) / (8 * kPi * r), std::abs(b)});
      csv << report::format_double(r) << ',' << report::format_double(a) << ','
          << report::format_double(-8 * kPi * r) << ',' << report::format_double(b) << ",0\n";
    }
    const bool pass = worst <= tol;
    out.write_csv("delta_prime.csv", csv.str());
    out.write_json("delta_prime.json", {{"worst", worst}, {"tolerance", tol}, {"pass", pass}});
    summary["delta_prime"] = {{"worst", worst}, {"tolerance", tol}, {"pass", pass}};
    std::cout << "delta_prime: worst " << worst << ' ' << (pass ? "ok" : "FAILED") << '\n';
    ok &= pass;
  }
  summary["pass"] = ok;
  out.finish(summary);
  return ok ? 0 : kExitCheckFailed;
}

// ---------------------------------------------------------------- invert

Keys invert_keys() {
  Keys k = common_keys("invert");
  add_ls_keys(k);
  k.insert({{"mode", "ellipsoidal"},
            {"data", "demo"},
            {"truth", "demo"},
            {"A0", "0.3"},
            {"T", "2"},
            {"delta", "0.05"},
            {"tolerance", "1e-10"},
            {"max_iterations", "30"},
            {"relaxation", "1"},
            {"goursat.h", "0.01"},
            {"noise.snr", "0"},
            {"tol.profile", "0.05"}});
  return k;
}

int cmd_invert(const RunConfig& c) {
  const auto& mode = c.text("mode");
  if (mode != "ellipsoidal" && mode != "radial")
    throw ConfigError("config key 'mode': expected ellipsoidal or radial, got '" + mode + "'");
  const bool ell = mode == "ellipsoidal";
  const double T = c.number("T");

  CoefficientProfile truth = CoefficientProfile::zero();
  bool have_truth = false;
  if (c.text("truth") == "demo") {
    truth = ell ? demo_ellipsoidal(0.2, 1.2, 1.8) : demo_radial(0.3, 1.0);
    have_truth = true;
  } else if (c.text("truth") != "none") {
    truth = load_profile_csv(c.text("truth"));
    have_truth = true;
  }

  inversion::InversionConfig cfg;
  cfg.delta = c.number("delta");
  cfg.tolerance = c.number("tolerance");
  cfg.max_iterations = c.integer("max_iterations");
  cfg.relaxation = c.number("relaxation");
  cfg.ls = ls_options(c);
  cfg.goursat_step = c.number("goursat.h");

  ReceiverWaveform d;
  if (c.text("data") == "demo") {
    if (!have_truth) throw ConfigError("data = demo needs a truth profile");
    d = ell ? forward::lippmann_schwinger_solve(truth, Vec3{}, kFocus, T, cfg.ls)
            : forward::radial_damping_solve(truth, T, cfg.goursat_step).at_origin;
  } else {
    d = load_waveform_csv(c.text("data"));
  }
  if (c.number("noise.snr") > 0.0)
    d = inversion::add_gaussian_noise(d, c.number("noise.snr"), static_cast<std::uint64_t>(c.integer("seed")));

  const double A0 = c.text("A0") == "truth" ? truth(Vec3{}) : c.number("A0");
  const auto res = ell ? inversion::reconstruct_ellipsoidal_potential(d, cfg)
                       : inversion::reconstruct_radial_damping(d, A0, cfg);

  report::ArtifactWriter out(output_dir(c), c.resolved());
  out.write_csv("data.csv", csv_of(d));
  std::ostringstream layers;
  report::write_reconstruction_csv(layers, res);
  out.write_csv("layers.csv", layers.str());
  std::ostringstream prof;
  if (res.profile.is_zero()) {
    prof << "# symmetry = " << mode << "\ncoordinate,value\n"
         << report::format_double(ell ? 1.0 - cfg.delta : 0.0) << ",0\n"
         << report::format_double(res.valid_to) << ",0\n";
  } else {
    write_profile_csv(prof, res.profile);
  }
  out.write_csv("profile.csv", prof.str());

  json rep = report::to_json(res);
  bool ok = true;
  if (have_truth) {
    double err = 0.0, scale = 0.0;
    std::ostringstream cmp;
    cmp << "coordinate,recovered,truth\n";
    for (int i = 0; i <= 400; ++i) {
      const double s = res.valid_from + (res.valid_to - res.valid_from) * i / 400;
      const Vec3 x = ell ? Vec3{0.5 * (s + 1), 0, 0} : Vec3{s, 0, 0};
      const double a = res.profile(x), b = truth(x);
      err = std::max(err, std::abs(a - b));
      scale = std::max(scale, std::abs(b));
      cmp << report::format_double(s) << ',' << report::format_double(a) << ','
          << report::format_double(b) << '\n';
    }
    const double rel = scale > 0.0 ? err / scale : err;
    ok = rel <= c.number("tol.profile");
    rep["profile_error"] = {{"sup_abs", err}, {"relative", rel}, {"tolerance", c.number("tol.profile")}};
    out.write_csv("comparison.csv", cmp.str());
    std::cout << "invert " << mode << ": relative sup error " << rel << ' ' << (ok ? "ok" : "FAILED") << '\n';
  }
  out.write_json("report.json", rep);
  out.finish({{"pass", ok}});
  return ok ? 0 : kExitCheckFailed;
}

// ---------------------------------------------------------------- geom-check

Keys geom_keys() {
  Keys k = common_keys("geom-check");
  k.insert({{"n_points", "10000"}, {"tol.exact", "1e-12"}, {"tol.area", "1e-6"}, {"min_order", "2"}});
  return k;
}

int cmd_geom_check(const RunConfig& c) {
  const int n = c.integer("n_points");
  if (n < 1) throw ConfigError("config key 'n_points' must be positive");
  std::mt19937_64 rng(static_cast<std::uint64_t>(c.integer("seed")));
  std::uniform_real_distribution<double> u(-3.0, 3.0), ut(0.51, 3.0), ua(0.0, kPi);
  double trip = 0.0, focal = 0.0, weight = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const auto p = geometry::cartesian_to_prolate(x);
    const Vec3 y = geometry::prolate_to_cartesian(p.point);
    trip = std::max(trip, (y - x).norm() / std::max(1.0, x.norm()));
    const double ch = std::cosh(p.point.rho);
    focal = std::max(focal, std::abs(x.norm() + (x - kFocus).norm() - ch) / ch);
    const double tau = ut(rng);
    const geometry::ProlatePoint q{std::acosh(2 * tau), 2 * ua(rng), ua(rng)};
    const Vec3 z = geometry::prolate_to_cartesian(q);
    const double direct = (z * (2 * tau) - kFocus * z.norm()).norm();
    weight = std::max(weight, std::abs(geometry::ellipsoid_weight(tau, q) - direct) / direct);
  }

  const auto exec = exec_of(c);
  auto one = [](const Vec3&) { return 1.0; };
  const double area = geometry::spheroid_area(1.0), vol = geometry::spheroid_volume(1.0);
  std::ostringstream csv;
  csv << "quantity,n,value,exact,rel_error\n";
  double prev_a = 0.0, order_a = INFINITY, last_a = 0.0, last_v = 0.0;
  for (int m = 2; m <= 32; m *= 2) {
    const double a = geometry::surface_integral(1.0, one, {m, 2 * m, 1}, exec);
    const double v = geometry::volume_integral(1.0, one, {m, 2 * m, m}, exec);
    const double ea = std::abs(a - area) / area, ev = std::abs(v - vol) / vol;
    if (prev_a > 0.0 && ea > 1e-14) order_a = std::min(order_a, std::log2(prev_a / ea));
    prev_a = ea;
    last_a = ea;
    last_v = ev;
    csv << "area," << m << ',' << report::format_double(a) << ',' << report::format_double(area) << ','
        << report::format_double(ea) << '\n';
    csv << "volume," << m << ',' << report::format_double(v) << ',' << report::format_double(vol) << ','
        << report::format_double(ev) << '\n';
  }
  const double tol = c.number("tol.exact"), tol_area = c.number("tol.area");
  const json checks{
      {"roundtrip", {{"worst", trip}, {"tolerance", tol}, {"pass", trip <= tol}}},
      {"focal_sum", {{"worst", focal}, {"tolerance", tol}, {"pass", focal <= tol}}},
      {"ellipsoid_weight", {{"worst", weight}, {"tolerance", tol}, {"pass", weight <= tol}}},
      {"area", {{"rel_error", last_a}, {"tolerance", tol_area}, {"pass", last_a <= tol_area}}},
      {"volume", {{"rel_error", last_v}, {"tolerance", tol_area}, {"pass", last_v <= tol_area}}},
      {"area_order", {{"observed", order_a}, {"minimum", c.number("min_order")}, {"pass", order_a >= c.number("min_order")}}}};
  bool ok = true;
  for (const auto& [name, v] : checks.items()) {
    const bool pass = v.at("pass").get<bool>();
    ok &= pass;
    std::cout << name << ": " << (pass ? "ok" : "FAILED") << '\n';
  }
  report::ArtifactWriter out(output_dir(c), c.resolved());
  out.write_csv("quadrature.csv", csv.str());
  out.write_json("geom_check.json", {{"checks", checks}, {"n_points", n}});
  out.finish({{"pass", ok}});
  return ok ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conewave: forward solvers, identity checks and layer-stripping reconstructions"};
  app.require_subcommand(1);
  struct Sub {
    std::string name, help;
    Keys (*keys)();
    int (*run)(const RunConfig&);
  };
  const std::vector<Sub> subs{{"forward", "compute a receiver waveform", forward_keys, cmd_forward},
                              {"verify", "check identities term by term", verify_keys, cmd_verify},
                              {"invert", "layer-stripping reconstruction", invert_keys, cmd_invert},
                              {"geom-check", "prolate geometry and quadrature checks", geom_keys,
                               cmd_geom_check}};
  std::string config_path, out_dir, seed;
  std::vector<std::string> overrides;
  std::vector<CLI::App*> cmds;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    cmd->add_option("-c,--config", config_path, "key = value configuration file");
    cmd->add_option("-o,--output", out_dir, "output directory (overrides output_dir)");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--set", overrides, "key=value override, repeatable");
    cmds.push_back(cmd);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!cmds[i]->parsed()) continue;
    try {
      RunConfig cfg(subs[i].keys());
      if (!config_path.empty()) cfg.load_file(config_path);
      for (const auto& o : overrides) cfg.apply_override(o);
      if (!out_dir.empty()) cfg.set("output_dir", out_dir, "--output");
      if (!seed.empty()) cfg.set("seed", seed, "--seed");
      return subs[i].run(cfg);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const NonConvergence& e) {
      std::cerr << "non-convergence: " << e.what() << '\n';
      return kExitNonConvergence;
    } catch (const DomainError& e) {
      std::cerr << "invalid parameters: " << e.what() << '\n';
      return kExitConfig;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitCheckFailed;
    }
  }
  return kExitConfig;
}
