#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "essspec/ellipticity.hpp"
#include "essspec/output.hpp"
#include "essspec/schur.hpp"

namespace essspec::cli {

using nlohmann::json;

namespace {

json to_json(complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const Poly& p) {
  json arr = json::array();
  for (const complex c : p.coeffs()) arr.push_back(to_json(c));
  return arr;
}

json to_json(const std::vector<complex>& zs) {
  json arr = json::array();
  for (const complex z : zs) arr.push_back(to_json(z));
  return arr;
}

json to_json(const Window& w) { return json::array({w.re_min, w.re_max, w.im_min, w.im_max}); }

json to_json(const EllipticityReport& r, bool with_dn) {
  json j;
  if (with_dn) {
    j["kappa"] = r.kappa;
    j["case"] = case_name(r.order_case);
    j["dn_margin"] = r.dn_margin;
  }
  j["entry_margins"] = json::object();
  for (const auto& [k, v] : r.entry_margins) j["entry_margins"][k] = v;
  j["assumption_b_ok"] = r.assumption_b_ok;
  j["pass"] = r.pass;
  return j;
}

json pencil_json(const SpectralPencil& P) { return json{{"A", to_json(P.A)}, {"B", to_json(P.B)}}; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw Error("write to '" + path + "' failed");
}

std::optional<OmegaReport> try_omega(const OperatorMatrix& T, const std::vector<double>& x, std::string* why) {
  try {
    return omega_condition(T, x);
  } catch (const Error& ex) {
    if (why) *why = ex.what();
    return std::nullopt;
  }
}

}  // namespace

Window parse_window(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw Error("--window: '" + tok + "' is not a number");
    }
    if (used != tok.size() || !std::isfinite(d)) throw Error("--window: '" + tok + "' is not a finite number");
    v.push_back(d);
  }
  if (v.size() != 4) throw Error("--window expects re_min,re_max,im_min,im_max");
  if (!(v[0] < v[1]) || !(v[2] < v[3])) throw Error("--window: empty box");
  return Window{v[0], v[1], v[2], v[3]};
}

json check_report(const Config& cfg) {
  const OperatorMatrix T = cfg.build_operator();
  const auto& tol = cfg.tolerances;
  const SampleGrid grid = make_sample_grid(cfg.grids);
  json rep;

  const EllipticityReport dn = check_dn_ellipticity(T, grid, tol.margin_tol);
  rep["ellipticity"] = to_json(dn, true);
  bool pass = dn.pass;

  if (T.order_case() == OrderCase::Balanced) {
    rep["entrywise"] = {{"applicable", false}};
  } else {
    const EllipticityReport ew = check_entrywise(T, grid, tol.margin_tol);
    rep["entrywise"] = to_json(ew, false);
    rep["entrywise"]["applicable"] = true;
    rep["entrywise"]["agrees_with_dn"] = ew.pass == dn.pass;
  }

  json stab;
  const auto xi_grid = default_stabilization_grid();
  const complex probe = default_probe(T, xi_grid);
  stab["probe"] = to_json(probe);
  stab["x"] = json::array({5.0, 10.0, 20.0, 40.0});
  stab["stab_tol"] = tol.stab_tol;
  try {
    json metrics = json::array();
    double prev = std::numeric_limits<double>::infinity();
    bool nonincreasing = true;
    double last = 0.0;
    for (double x : {5.0, 10.0, 20.0, 40.0}) {
      last = std::max(stabilization_metric(T, probe, x, xi_grid, tol.pole_guard),
                      stabilization_metric(T, probe, -x, xi_grid, tol.pole_guard));
      metrics.push_back(last);
      nonincreasing = nonincreasing && last <= prev;
      prev = last;
    }
    stab["metric"] = metrics;
    stab["nonincreasing"] = nonincreasing;
    stab["pass"] = nonincreasing && last <= tol.stab_tol;
  } catch (const PoleError& ex) {
    stab["error"] = ex.what();
    stab["pass"] = false;
  }
  pass = pass && stab["pass"].get<bool>();
  rep["stabilization"] = stab;

  std::string why;
  if (auto om = try_omega(T, grid.x, &why)) {
    rep["omega"] = {{"applicable", true}, {"omega1", om->omega1}, {"omega2", om->omega2},
                    {"bound", om->bound},  {"holds", om->holds}};
  } else {
    rep["omega"] = {{"applicable", false}, {"reason", why}};
  }

  rep["orders"] = {{"m", T.m()}, {"n", T.b().is_zero() ? json(nullptr) : json(T.n())},
                   {"p", T.c().is_zero() ? json(nullptr) : json(T.p())}, {"q", T.q()}};
  rep["pencil"] = pencil_json(build_pencil(limiting_matrix(T)));
  rep["pass"] = pass;
  return rep;
}

int cmd_check(const Config& cfg, std::ostream& out) {
  const json rep = check_report(cfg);
  out << rep.dump(2) << "\n";
  return rep["pass"].get<bool>() ? kExitPass : kExitFail;
}

int cmd_spectrum(const Config& cfg, const SpectrumFlags& flags, std::ostream& out, std::ostream& err) {
  if (flags.xi_points < 3) throw Error("--xi-points must be at least 3");
  std::string comment;
  if (flags.force) {
    comment = "checks skipped (--force): ellipticity, assumption B, stabilization";
  } else {
    const json rep = check_report(cfg);
    if (!rep["pass"].get<bool>()) {
      err << "spectrum: check failed; rerun with --force to trace anyway\n" << rep.dump(2) << "\n";
      return kExitFail;
    }
  }

  const OperatorMatrix T = cfg.build_operator();
  const LimitingMatrix L = limiting_matrix(T);
  const SpectralPencil P = build_pencil(L);
  const double xi_plot = choose_xi_plot(P, flags.window);
  const auto grid = tanh_grid(xi_plot, flags.xi_points);

  std::string why;
  const auto om = try_omega(T, make_sample_grid(cfg.grids).x, &why);
  ExceptionalOptions eopts;
  eopts.coarse_tol = cfg.tolerances.coarse_tol;
  eopts.refine_tol = cfg.tolerances.refine_tol;
  eopts.search = !(om && om->holds);
  const ExceptionalSet exc = exceptional_sets(L, grid, eopts);

  TraceOptions topts;
  topts.excl_tol = cfg.tolerances.excl_tol;
  const SpectrumCurve curve = trace_spectrum(P, exc, grid, flags.window, topts);
  const CurveReport cr = curve_invariant_check(curve, P);

  if (!flags.out_csv.empty()) write_file(flags.out_csv, spectrum_csv(curve, comment));
  if (!flags.out_svg.empty()) write_file(flags.out_svg, spectrum_svg(curve, flags.window));

  json lam = json::array();
  for (const auto& p : exc.lambda_set)
    lam.push_back({{"lambda", to_json(p.lambda)}, {"xi_a", p.xi_a}, {"xi_d", p.xi_d},
                   {"residual", p.residual}, {"tangential", p.tangential}});
  std::size_t in_window = 0;
  for (const auto& s : curve.samples)
    for (const auto& f : s.flags) in_window += f.clipped ? 0 : 1;

  json rep;
  rep["pencil"] = pencil_json(P);
  rep["window"] = to_json(flags.window);
  rep["xi_plot"] = xi_plot;
  rep["xi_points"] = flags.xi_points;
  rep["lambda_set"] = lam;
  rep["lambda_search"] = eopts.search ? "searched" : "skipped: omega-condition holds";
  if (om) rep["omega"] = {{"omega1", om->omega1}, {"omega2", om->omega2}, {"bound", om->bound}, {"holds", om->holds}};
  rep["curve"] = {{"samples", cr.samples},
                  {"roots_in_window", in_window},
                  {"max_residual", cr.max_residual},
                  {"max_symmetry_defect", cr.max_symmetry_defect},
                  {"max_branch_step", cr.max_branch_step}};
  if (flags.force) rep["forced"] = true;
  if (!flags.out_csv.empty()) rep["csv"] = flags.out_csv;
  if (!flags.out_svg.empty()) rep["svg"] = flags.out_svg;
  out << rep.dump(2) << "\n";
  return kExitPass;
}

int cmd_validate(const Config& cfg, const ValidateFlags& flags, std::ostream& out, std::ostream& /*err*/) {
  const OperatorMatrix T = cfg.build_operator();
  const SpectralPencil P = build_pencil(limiting_matrix(T));
  EigenOptions eo;
  eo.qr_tol = cfg.tolerances.qr_tol;
  const auto dist_tol = flags.dist_tol ? flags.dist_tol : cfg.tolerances.dist_tol;
  const ValidationReport r = validate_spectrum(T, P, flags.scheme, flags.L, flags.M, flags.window, dist_tol, eo);

  if (!flags.out_csv.empty()) write_file(flags.out_csv, eigenvalues_csv(r.eigenvalues));

  json rep;
  rep["scheme"] = scheme_name(flags.scheme);
  rep["L"] = flags.L;
  rep["M"] = flags.M;
  rep["window"] = to_json(flags.window);
  rep["converged"] = r.converged;
  rep["eigenvalue_count"] = r.eigenvalues.size();
  rep["in_window"] = r.in_window;
  rep["matched"] = r.matched;
  rep["matched_fraction"] = r.matched_fraction;
  rep["max_matched_distance"] = r.max_matched_distance;
  rep["dist_tol"] = dist_tol ? json(*dist_tol) : json("adaptive");
  rep["max_dist_tol"] = r.max_dist_tol;
  rep["outliers"] = to_json(r.outliers);
  if (flags.scheme == Scheme::Fourier && T.is_constant())
    rep["max_grid_root_distance"] = grid_root_distance(r.eigenvalues, P, flags.L, flags.M);
  rep["eigenvalues"] = to_json(r.eigenvalues);
  out << rep.dump(2) << "\n";
  return r.converged ? kExitPass : kExitFail;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Essential spectra of 2x2 mixed-order operator matrices", "essspec"};
  app.require_subcommand(1);

  std::string config_path;
  SpectrumFlags sflags;
  ValidateFlags vflags;
  std::string window_text = "-3,0.2,-20,20";
  std::string scheme_text = "FOURIER";
  double dist_tol = 0.0;
  double delta = 0.98, eta = 0.01, c0 = 1.15;
  bool perturbed = false;
  std::string out_config;

  auto* check = app.add_subcommand("check", "Check the assumptions; JSON report on stdout");
  check->add_option("config", config_path, "Config file")->required();

  auto add_spectrum_flags = [&](CLI::App* sub) {
    sub->add_option("--xi-points", sflags.xi_points, "Number of xi samples")->capture_default_str();
    sub->add_option("--window", window_text, "re_min,re_max,im_min,im_max")->capture_default_str();
    sub->add_option("--out-csv", sflags.out_csv, "CSV output path");
    sub->add_option("--out-svg", sflags.out_svg, "SVG output path");
    sub->add_flag("--force", sflags.force, "Trace even when checks fail");
  };
  auto* spectrum = app.add_subcommand("spectrum", "Trace the essential spectrum");
  spectrum->add_option("config", config_path, "Config file")->required();
  add_spectrum_flags(spectrum);

  auto* validate = app.add_subcommand("validate", "Compare with eigenvalues of a periodic discretization");
  validate->add_option("config", config_path, "Config file")->required();
  validate->add_option("--scheme", scheme_text, "FOURIER or FD")
      ->check(CLI::IsMember({"FOURIER", "FD"}))
      ->capture_default_str();
  validate->add_option("--L", vflags.L, "Half-length of the domain")->capture_default_str();
  validate->add_option("--M", vflags.M, "Grid points per component")->capture_default_str();
  validate->add_option("--window", window_text, "re_min,re_max,im_min,im_max")->capture_default_str();
  auto* dist_opt = validate->add_option("--dist-tol", dist_tol, "Fixed matching tolerance");
  validate->add_option("--out-csv", vflags.out_csv, "Eigenvalue CSV output path");

  auto* film = app.add_subcommand("film", "Falling-film preset: write the config, then trace");
  film->add_option("--delta", delta)->capture_default_str();
  film->add_option("--eta", eta)->capture_default_str();
  film->add_option("--c0", c0)->capture_default_str();
  film->add_flag("--perturbed", perturbed, "Add 0.1*exp(-x^2) to every coefficient");
  film->add_option("--out-config", out_config, "Where to write the config");
  add_spectrum_flags(film);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Config cfg;
  try {
    if (*film) {
      cfg = film_config(delta, eta, c0, perturbed);
      cfg = parse_config(emit_config(cfg));
      if (!out_config.empty()) write_file(out_config, emit_config(cfg));
    } else {
      cfg = load_config(config_path);
    }
    sflags.window = parse_window(window_text);
    vflags.window = sflags.window;
    vflags.scheme = scheme_text == "FD" ? Scheme::FD : Scheme::Fourier;
    if (dist_opt->count() > 0) {
      if (!(dist_tol > 0.0)) throw Error("--dist-tol must be positive");
      vflags.dist_tol = dist_tol;
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*check) return cmd_check(cfg, out);
    if (*validate) return cmd_validate(cfg, vflags, out, err);
    return cmd_spectrum(cfg, sflags, out, err);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace essspec::cli
