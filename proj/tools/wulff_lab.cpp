// wulff_lab: command-line front end for the anisotropic momentum quotient toolkit.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "wulff_lab/config.hpp"
#include "wulff_lab/wulff_lab.hpp"

namespace wl = wulff_lab;
using nlohmann::json;

namespace {

enum Exit { ok = 0, violation = 1, config_error = 2, numeric_failure = 3 };

struct Flags {
  std::string config, norm, out, format, suite, svg_dir;
  std::vector<std::string> shapes;
  double p = 0, T = 0, tolerance = 0;
  int grid = 0, cases = 0, iterations = 0, modes = 0;
  std::uint64_t seed = 0;
  std::vector<double> output_times, eps, phi, ts;
};

struct Command {
  CLI::App* app = nullptr;
  std::map<std::string, CLI::Option*> opts;
  [[nodiscard]] bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_common(Command& c, Flags& f) {
  auto* a = c.app;
  c.opts["config"] = a->add_option("--config", f.config, "JSON configuration file (flags override its values)");
  c.opts["norm"] = a->add_option("--norm", f.norm, "euclidean | elliptic:a,b | lp:q");
  c.opts["shape"] = a->add_option("--shape", f.shapes, "shape quick form, repeatable (wulff:r[,cx,cy], box:..., ...)");
  c.opts["p"] = a->add_option("--p", f.p, "momentum exponent, p > 1");
  c.opts["grid"] = a->add_option("--grid", f.grid, "angular grid size for smooth curves (power of two >= 64)");
  c.opts["seed"] = a->add_option("--seed", f.seed, "64-bit seed");
  c.opts["out"] = a->add_option("--out", f.out, "output path ('-' for stdout)");
  c.opts["format"] = a->add_option("--format", f.format, "csv | json");
}

wl::RunConfig resolve(const Command& c, const Flags& f) {
  wl::RunConfig cfg;
  if (c.given("config")) wl::load_json_file(cfg, f.config);
  auto wrap = [](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const wl::Error& e) {
      throw wl::ConfigError("config key '" + key + "': " + e.what());
    }
  };
  if (c.given("norm")) wrap("norm", [&] { cfg.norm = wl::parse_norm(f.norm); });
  if (c.given("shape"))
    wrap("shape", [&] {
      cfg.shapes.clear();
      for (const auto& s : f.shapes) cfg.shapes.push_back(wl::parse_shape(s));
    });
  if (c.given("p")) cfg.p = f.p;
  if (c.given("grid")) cfg.grid = f.grid;
  if (c.given("seed")) cfg.seed = f.seed;
  if (c.given("out")) cfg.out = f.out;
  if (c.given("format")) cfg.format = f.format;
  if (c.given("T")) cfg.T = f.T;
  if (c.given("times")) cfg.output_times = f.output_times;
  if (c.given("svg-dir")) cfg.svg_dir = f.svg_dir;
  if (c.given("eps")) cfg.eps = f.eps;
  if (c.given("suite")) cfg.suite = f.suite;
  if (c.given("cases")) cfg.cases = f.cases;
  if (c.given("tolerance")) cfg.tolerance = f.tolerance;
  if (c.given("phi")) cfg.phi = f.phi;
  if (c.given("t")) cfg.ts = f.ts;
  if (c.given("iterations")) cfg.iterations = f.iterations;
  if (c.given("modes")) cfg.modes = f.modes;
  wl::validate(cfg);
  return cfg;
}

void emit(const wl::RunConfig& cfg, const std::string& text) {
  if (cfg.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw wl::ConfigError("config key 'out': cannot write '" + cfg.out + "'");
  os << text;
}

const wl::ShapeSpec& single_shape(const wl::RunConfig& cfg, bool need_curve) {
  if (cfg.shapes.size() != 1) throw wl::ConfigError("config key 'shape': this command takes exactly one shape");
  if (need_curve && !cfg.shapes.front().is_curve())
    throw wl::ConfigError("config key 'shape': this command needs a smooth curve (wulff, fourier or ellipse)");
  return cfg.shapes.front();
}

// ---------------------------------------------------------------------------

int cmd_compute(const wl::RunConfig& cfg) {
  if (cfg.shapes.empty()) throw wl::ConfigError("config key 'shape': at least one shape is required");
  std::ostringstream os;
  json rows = json::array();
  wl::io::CsvWriter w(os);
  if (cfg.format == "csv") w.header(wl::io::report_columns());
  for (const auto& s : cfg.shapes) {
    const auto body = wl::build(s, cfg.norm, cfg.grid_or(1024));
    const auto rep = wl::functional_value(body, cfg.norm, cfg.p);
    if (cfg.format == "csv") {
      wl::io::write_report_row(w, wl::to_string(s), rep);
    } else {
      json r = wl::io::to_json(rep);
      r["shape"] = wl::to_string(s);
      rows.push_back(r);
    }
  }
  if (cfg.format == "json") os << rows.dump(2) << '\n';
  emit(cfg, os.str());
  return ok;
}

int cmd_flow(const wl::RunConfig& cfg) {
  const auto& s = single_shape(cfg, true);
  const auto norm = wl::FinslerNorm2::from_spec(cfg.norm);
  const auto curve = wl::build_curve(s, cfg.norm, cfg.grid_or(512));
  auto times = cfg.output_times;
  if (times.empty())
    for (int i = 0; i <= 12; ++i) times.push_back(cfg.T * i / 12.0);
  for (double t : times)
    if (t < 0.0 || t > cfg.T) throw wl::ConfigError("config key 'output_times': times must lie in [0, T]");
  const auto trace = wl::run(curve, norm, cfg.p, cfg.T, times);
  std::ostringstream os;
  if (cfg.format == "csv") wl::io::write_flow_csv(os, trace);
  else os << wl::io::flow_json(trace).dump(2) << '\n';
  if (!cfg.svg_dir.empty()) {
    std::filesystem::create_directories(cfg.svg_dir);
    for (std::size_t i = 0; i < trace.states.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "flow_%03zu.svg", i);
      std::ofstream(std::filesystem::path(cfg.svg_dir) / name) << wl::io::svg_snapshot(trace.states[i].curve, norm);
    }
  }
  emit(cfg, os.str());
  return ok;
}

int cmd_variation(const wl::RunConfig& cfg) {
  const auto& s = single_shape(cfg, true);
  const auto norm = wl::FinslerNorm2::from_spec(cfg.norm);
  const auto curve = wl::build_curve(s, cfg.norm, cfg.grid_or(1024));
  const std::vector<double> phi = cfg.phi.empty() ? std::vector<double>{1.0, 0.0, 0.0, 0.3, 0.2} : cfg.phi;
  if (phi.size() % 2 == 0) throw wl::ConfigError("config key 'phi': expected [c0, a1, b1, a2, b2, ...]");
  const auto field = wl::PerturbationField::from(
      curve.grid(),
      [&](double th) {
        double v = phi[0];
        for (std::size_t k = 1; 2 * k <= phi.size() - 1; ++k)
          v += phi[2 * k - 1] * std::cos(k * th) + phi[2 * k] * std::sin(k * th);
        return v;
      },
      "fourier");
  const std::vector<double> ts = cfg.ts.empty() ? std::vector<double>{1e-2, 5e-3, 2.5e-3, 1.25e-3} : cfg.ts;
  std::vector<std::pair<std::string, std::vector<wl::DerivativeRow>>> blocks;
  for (auto target : {wl::VariationTarget::volume, wl::VariationTarget::perimeter, wl::VariationTarget::momentum,
                      wl::VariationTarget::quotient})
    blocks.emplace_back(wl::to_string(target), wl::validate_derivative(target, curve, norm, cfg.p, field, ts));
  {
    // derivative of the quotient along the inverse anisotropic mean curvature flow
    const double tau = 1e-4;
    const double predicted = wl::dF_quotient_iamcf(curve, norm, cfg.p);
    const double fd = wl::flow_quotient_derivative_fd(curve, norm, cfg.p, tau);
    const double err = std::abs(fd - predicted);
    blocks.push_back({"dF_iamcf",
                      {{tau, fd, predicted, predicted != 0.0 ? fd / predicted : std::nan(""),
                        std::abs(predicted) > 0.0 ? err / std::abs(predicted) : err, std::nan("")}}});
  }
  std::ostringstream os;
  if (cfg.format == "csv") {
    wl::io::write_derivative_csv(os, blocks);
  } else {
    json out = json::array();
    for (const auto& [name, rows] : blocks)
      for (const auto& r : rows)
        out.push_back({{"target", name},
                       {"t", wl::io::jnum(r.t)},
                       {"value", wl::io::jnum(r.value)},
                       {"predicted", wl::io::jnum(r.predicted)},
                       {"ratio", wl::io::jnum(r.ratio)},
                       {"rel_error", wl::io::jnum(r.rel_error)},
                       {"order", wl::io::jnum(r.order)}});
    os << out.dump(2) << '\n';
  }
  emit(cfg, os.str());
  return ok;
}

int cmd_cut(const wl::RunConfig& cfg) {
  const auto& s = single_shape(cfg, false);
  if (s.dimension() != 2) throw wl::ConfigError("config key 'shape': cuts are planar");
  const auto norm = wl::FinslerNorm2::from_spec(cfg.norm);
  const auto poly = wl::detail::as_polygon(wl::build(s, cfg.norm, cfg.grid_or(1024)));
  std::vector<double> eps = cfg.eps;
  if (eps.empty()) {
    const auto base = wl::functional_value(poly, norm, cfg.p);
    const Eigen::Vector2d d = wl::cut_direction(poly, norm, base.x_max);
    eps = wl::halving_sequence(0.1 * wl::detail::width_along(poly, d), 8);
  }
  const auto rows = wl::cut_experiment(poly, norm, cfg.p, eps);
  std::ostringstream os;
  if (cfg.format == "csv") wl::io::write_cut_csv(os, rows);
  else os << wl::io::cut_json(rows).dump(2) << '\n';
  emit(cfg, os.str());
  return ok;
}

int cmd_verify(const wl::RunConfig& cfg) {
  std::vector<wl::Suite> suites;
  if (cfg.suite == "all") {
    for (auto s : {wl::Suite::main, wl::Suite::iso, wl::Suite::hk, wl::Suite::ratio, wl::Suite::secineq,
                   wl::Suite::excessdescent, wl::Suite::cuts, wl::Suite::dichotomy, wl::Suite::betta})
      suites.push_back(s);
  } else {
    try {
      suites.push_back(wl::parse_suite(cfg.suite));
    } catch (const wl::Error& e) {
      throw wl::ConfigError(std::string("config key 'suite': ") + e.what());
    }
  }
  wl::SuiteOptions opt;
  opt.grid = cfg.grid_or(1024);
  std::ostringstream os;
  json reports = json::array();
  bool all_passed = true;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    auto rep = wl::run_suite(suites[i], cfg.norm, cfg.p, cfg.cases, cfg.seed, opt);
    if (cfg.tolerance) rep.tolerance = *cfg.tolerance;
    all_passed = all_passed && rep.passed();
    std::cerr << rep.name << ": " << (rep.passed() ? "pass" : "FAIL") << " worst margin " << wl::io::num(rep.worst_margin)
              << " (tolerance " << wl::io::num(rep.tolerance) << ") at " << rep.worst_shape << '\n';
    if (cfg.format == "csv") {
      std::ostringstream block;
      wl::io::write_suite_csv(block, rep);
      std::string text = block.str();
      if (i > 0) text.erase(0, text.find('\n') + 1);  // one header for all suites
      os << text;
    } else {
      reports.push_back(wl::io::suite_json(rep));
    }
  }
  if (cfg.format == "json") os << reports.dump(2) << '\n';
  emit(cfg, os.str());
  return all_passed ? ok : violation;
}

int cmd_search(const wl::RunConfig& cfg) {
  const auto& s = single_shape(cfg, true);
  const auto norm = wl::FinslerNorm2::from_spec(cfg.norm);
  wl::SearchConfig sc;
  sc.grid = cfg.grid_or(512);
  sc.modes = cfg.modes;
  sc.max_iterations = cfg.iterations;
  const auto init = wl::build_curve(s, cfg.norm, sc.grid);
  const auto res = wl::minimize(norm, cfg.p, init, sc);
  const json record = wl::shape_record(cfg.norm, cfg.p, res.final_spec);
  std::cerr << "search: F = " << wl::io::num(res.final_F) << " after " << res.iterations << " iterations"
            << (res.converged ? " (converged)" : "") << ", Wulff fit distance " << wl::io::num(res.fit.distance)
            << ", center norm " << wl::io::num(res.fit.center.norm()) << '\n';
  std::ostringstream os;
  if (cfg.format == "csv") {
    wl::io::write_trajectory_csv(os, res);
    if (cfg.out != "-") std::ofstream(cfg.out + ".shape.json") << record.dump(2) << '\n';
  } else {
    json traj = json::array();
    for (double v : res.trajectory) traj.push_back(wl::io::jnum(v));
    json out = {{"trajectory", traj},
                {"final_F", wl::io::jnum(res.final_F)},
                {"iterations", res.iterations},
                {"converged", res.converged},
                {"fit", {{"r", wl::io::jnum(res.fit.r)},
                         {"center", {wl::io::jnum(res.fit.center.x()), wl::io::jnum(res.fit.center.y())}},
                         {"distance", wl::io::jnum(res.fit.distance)}}},
                {"record", record}};
    os << out.dump(2) << '\n';
  }
  emit(cfg, os.str());
  return ok;
}

int cmd_paper_examples(const wl::RunConfig& cfg) {
  const auto [a, b] = wl::planar_axes(cfg.norm);
  const auto norm = wl::FinslerNorm2::from_spec(cfg.norm);
  const std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025, 0.0125} : cfg.eps;
  const double p = cfg.p;
  json r_rows = json::array(), e_rows = json::array();
  std::ostringstream os;
  wl::io::CsvWriter w(os);
  if (cfg.format == "csv") {
    os << "# R_eps\n";
    w.header({"eps", "M_F_exact", "M_F_quadrature", "leading_term", "r_max", "a_over_eps", "E_F"});
  }
  for (double e : eps) {
    const wl::Polygon2 rect = wl::box2(1.0 / e, e);
    const auto rep = wl::functional_value(rect, norm, p);
    // edgewise closed form, valid for p = 2 and axis-aligned elliptic norms
    const double exact = (p == 2.0 && cfg.norm.kind != wl::NormKind::lp)
                             ? 4 * a * a / (3 * b * e * e * e) + 4 * a / e + 4 * b * e + 4 * b * b * e * e * e / (3 * a)
                             : std::nan("");
    const double leading = 4 * a * a / (3 * b * e * e * e);
    if (cfg.format == "csv") {
      w.row(e, exact, rep.M_F, leading, rep.r_max, a / e, rep.E_F);
    } else {
      r_rows.push_back({{"eps", wl::io::jnum(e)}, {"M_F_exact", wl::io::jnum(exact)},
                        {"M_F_quadrature", wl::io::jnum(rep.M_F)}, {"leading_term", wl::io::jnum(leading)},
                        {"r_max", wl::io::jnum(rep.r_max)}, {"a_over_eps", wl::io::jnum(a / e)},
                        {"E_F", wl::io::jnum(rep.E_F)}});
    }
  }
  if (cfg.format == "csv") {
    os << "\n# E_eps\n";
    w.header({"eps", "E_F", "E_F_over_eps"});
  }
  for (double e : eps) {
    const auto curve = wl::build_curve(wl::e_eps_shape(e, a, b), cfg.norm, cfg.grid_or(1024));
    const auto rep = wl::functional_value(curve, norm, p, false);
    if (cfg.format == "csv") w.row(e, rep.E_F, rep.E_F / e);
    else e_rows.push_back({{"eps", wl::io::jnum(e)}, {"E_F", wl::io::jnum(rep.E_F)}, {"E_F_over_eps", wl::io::jnum(rep.E_F / e)}});
  }
  if (cfg.format == "json") os << json{{"R_eps", r_rows}, {"E_eps", e_rows}}.dump(2) << '\n';
  emit(cfg, os.str());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic momentum quotient toolkit"};
  app.require_subcommand(1);
  Flags f;
  std::map<std::string, Command> cmds;
  auto make = [&](const std::string& name, const std::string& help) -> Command& {
    Command& c = cmds[name];
    c.app = app.add_subcommand(name, help);
    add_common(c, f);
    return c;
  };

  make("compute", "functional report per shape");
  {
    auto& c = make("flow", "inverse anisotropic mean curvature flow");
    c.opts["T"] = c.app->add_option("--T", f.T, "time horizon");
    c.opts["times"] = c.app->add_option("--times", f.output_times, "output times")->delimiter(',');
    c.opts["svg-dir"] = c.app->add_option("--svg-dir", f.svg_dir, "write one SVG snapshot per output time here");
  }
  {
    auto& c = make("variation", "first-variation formulas against finite differences");
    c.opts["phi"] = c.app->add_option("--phi", f.phi, "speed coefficients c0,a1,b1,a2,b2,...")->delimiter(',');
    c.opts["t"] = c.app->add_option("--t", f.ts, "finite-difference steps")->delimiter(',');
  }
  {
    auto& c = make("cut", "halfspace cuts at the farthest point");
    c.opts["eps"] = c.app->add_option("--eps", f.eps, "cut depths")->delimiter(',');
  }
  {
    auto& c = make("verify", "randomized verification suites");
    c.opts["suite"] = c.app->add_option("--suite", f.suite, "main|iso|hk|ratio|secineq|excessdescent|cuts|dichotomy|betta|all");
    c.opts["cases"] = c.app->add_option("--cases", f.cases, "random cases per suite");
    c.opts["tolerance"] = c.app->add_option("--tolerance", f.tolerance, "override the suite tolerance");
  }
  {
    auto& c = make("search", "minimize the quotient over Fourier support functions");
    c.opts["iterations"] = c.app->add_option("--iterations", f.iterations, "maximum iterations");
    c.opts["modes"] = c.app->add_option("--modes", f.modes, "Fourier modes");
  }
  {
    auto& c = make("paper-examples", "the thin rectangle and ellipse example tables");
    c.opts["eps"] = c.app->add_option("--eps", f.eps, "epsilon values")->delimiter(',');
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  try {
    for (auto& [name, c] : cmds) {
      if (!c.app->parsed()) continue;
      const auto cfg = resolve(c, f);
      if (name == "compute") return cmd_compute(cfg);
      if (name == "flow") return cmd_flow(cfg);
      if (name == "variation") return cmd_variation(cfg);
      if (name == "cut") return cmd_cut(cfg);
      if (name == "verify") return cmd_verify(cfg);
      if (name == "search") return cmd_search(cfg);
      if (name == "paper-examples") return cmd_paper_examples(cfg);
    }
  } catch (const wl::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return config_error;
  } catch (const wl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == wl::ErrorKind::invalid_argument ? config_error : numeric_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numeric_failure;
  }
  return ok;
}
