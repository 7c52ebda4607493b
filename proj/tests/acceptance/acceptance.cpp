// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "essspec/ellipticity.hpp"
#include "essspec/numerics.hpp"
#include "essspec/output.hpp"
#include "essspec/spectrum.hpp"
#include "essspec/validate.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace essspec;
using nlohmann::json;

namespace {

// Pinned tolerances and budgets.
constexpr double kOmegaTol = 1e-6;
constexpr double kPencilRelTol = 1e-10;
constexpr double kOriginRootTol = 1e-10;
constexpr double kLambdaTol = 1e-8;
constexpr double kOracleTol16 = 1e-8;
constexpr double kOracleTol128 = 1e-7;
constexpr int kRandomSystems = 250;
constexpr double kEigTol = 1e-8;
constexpr double kTraceTol = 1e-10;
constexpr double kQuadTol = 1e-12;
constexpr double kSchurTol = 1e-12;
constexpr double kStabTail = 1e-30;
constexpr double kResidualTol = 1e-10;
constexpr double kSymmetryTol = 1e-10;
constexpr double kMatchedMin = 0.9;
constexpr double kBudgetCheck = 5.0;
constexpr double kBudgetOracle16 = 5.0;
constexpr double kBudgetOracle128 = 60.0;
constexpr double kBudgetEquivalence = 30.0;
constexpr double kBudgetTotal = 300.0;

const std::string kPresets = ESSSPEC_PRESET_DIR;
constexpr double kDelta = 0.98, kEta = 0.01, kC0 = 1.15;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cli_run(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "essspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  return code;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

OperatorMatrix diagonal_operator() {
  return OperatorMatrix(DiffSymbol({CoeffFn(0.0), CoeffFn(0.0), CoeffFn(-1.0)}), DiffSymbol(), DiffSymbol(),
                        DiffSymbol({CoeffFn(0.0), CoeffFn(1.0)}));
}

SpectralPencil pencil_of(const OperatorMatrix& T) { return build_pencil(limiting_matrix(T)); }

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  std::string out;
  const int code = cli_run({"check", kPresets + "/film.json"}, &out);
  const double dt = seconds_since(t0);
  o.require(code == 0, "exit " + std::to_string(code));
  if (code != 0 && out.empty()) return o;
  const json r = json::parse(out);
  o.require(r["ellipticity"]["case"] == "OFFDIAG", "case");
  o.require(r["ellipticity"]["kappa"] == 4, "kappa");
  const json& w = r["omega"];
  o.require(w.value("holds", false), "omega does not hold");
  const double w1 = 5.0 / (2.0 * kDelta);
  const double w2 = std::abs(kC0 - 17.0 / 21.0);
  const double bound = std::sqrt(9.0 * kEta * w1 / kDelta);
  if (w.contains("omega1")) {
    o.require(std::abs(w["omega1"].get<double>() - w1) <= kOmegaTol, "omega1");
    o.require(std::abs(w["omega2"].get<double>() - w2) <= kOmegaTol, "omega2");
    o.require(std::abs(w["bound"].get<double>() - bound) <= kOmegaTol, "bound");
  } else {
    o.require(false, "omega values missing");
  }
  o.require(dt < kBudgetCheck, fmt("%.2fs", dt));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("%.2fs", dt);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const SpectralPencil P = pencil_of(testing_support::film_operator());
  // Coefficients of λ² + αλ + β by power of iξ.
  const double alpha[3] = {5.0 / (2.0 * kDelta), -(2.0 * kC0 - 17.0 / 21.0), -9.0 * kEta / (2.0 * kDelta)};
  const double beta[5] = {0.0, 5.0 / (2.0 * kDelta) * (1.0 - kC0), 1.0 / 7.0 + kC0 * (kC0 - 17.0 / 21.0),
                          9.0 * kEta / (2.0 * kDelta) * (kC0 - 4.0 / 9.0), 5.0 / (6.0 * kDelta)};
  double worst = 0.0;
  for (int j = 0; j < 3; ++j)
    worst = std::max(worst, std::abs(P.A.coeff(j) - alpha[j]) / std::abs(alpha[j]));
  for (int j = 1; j < 5; ++j) worst = std::max(worst, std::abs(P.B.coeff(j) - beta[j]) / std::abs(beta[j]));
  o.require(std::abs(P.B.coeff(0)) == 0.0, "beta(0) != 0");
  o.require(P.A.degree() == 2 && P.B.degree() == 4, "degrees");
  o.require(worst <= kPencilRelTol, fmt("coeff rel err %.3g", worst));

  const LimitingMatrix L = limiting_matrix(testing_support::film_operator());
  const auto grid = tanh_grid(choose_xi_plot(P, Window{}), 2001);
  const auto curve = trace_spectrum(P, exceptional_sets(L, grid), grid, Window{});
  const auto& mid = curve.samples[1000];
  const std::vector<complex> want{0.0, -5.0 / (2.0 * kDelta)};
  const double d = mid.xi == 0.0 ? match_distance(std::vector<complex>(mid.roots.begin(), mid.roots.end()), want)
                                 : 1e300;
  o.require(d <= kOriginRootTol, fmt("origin roots off by %.3g", d));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("max rel err %.2e", worst);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto grid = default_stabilization_grid();
  const auto film = exceptional_sets(limiting_matrix(testing_support::film_operator()), grid);
  o.require(film.lambda_set.empty(), "film Lambda not empty");
  const auto diag = exceptional_sets(limiting_matrix(diagonal_operator()), grid);
  o.require(diag.lambda_set.size() == 1, "diagonal |Lambda| = " + std::to_string(diag.lambda_set.size()));
  if (diag.lambda_set.size() == 1)
    o.require(std::abs(diag.lambda_set[0].lambda) <= kLambdaTol, "diagonal Lambda != {0}");
  if (o.pass) o.detail = fmt("film |Lambda| = 0; diagonal Lambda = {%.1e}", std::abs(diag.lambda_set[0].lambda));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const OperatorMatrix T = testing_support::film_operator();
  const SpectralPencil P = pencil_of(T);
  for (const auto& [M, tol, budget] : {std::tuple{16, kOracleTol16, kBudgetOracle16},
                                       std::tuple{128, kOracleTol128, kBudgetOracle128}}) {
    const auto t0 = Clock::now();
    const auto rep = validate_spectrum(T, P, Scheme::Fourier, std::numbers::pi, M, Window{});
    const double dist = grid_root_distance(rep.eigenvalues, P, std::numbers::pi, M);
    const double dt = seconds_since(t0);
    const std::string tag = "M=" + std::to_string(M);
    o.require(rep.converged, tag + " not converged");
    o.require(dist <= tol, tag + fmt(" dist %.3g", dist));
    o.require(rep.matched_fraction == 1.0, tag + fmt(" fraction %.3f", rep.matched_fraction));
    o.require(dt < budget, tag + fmt(" %.2fs", dt));
    o.detail += (o.detail.empty() ? "" : "; ") + tag + fmt(" dist %.1e", dist) + fmt(" %.2fs", dt);
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = Clock::now();
  auto g = testing_support::rng(2718);
  const SampleGrid grid = make_sample_grid();
  int agree = 0, elliptic = 0;
  for (int n = 0; n < kRandomSystems; ++n) {
    const auto sys = testing_support::random_system(g);
    const bool dn = check_dn_ellipticity(sys.T, grid).pass;
    const bool ew = check_entrywise(sys.T, grid).pass;
    agree += dn == ew;
    elliptic += dn;
  }
  const double dt = seconds_since(t0);
  o.require(agree == kRandomSystems, std::to_string(kRandomSystems - agree) + " disagreements");
  o.require(elliptic > 0 && elliptic < kRandomSystems, "verdicts not mixed");
  o.require(dt < kBudgetEquivalence, fmt("%.2fs", dt));
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(agree) + "/" + std::to_string(kRandomSystems) +
              " agree, " + std::to_string(elliptic) + " elliptic" + fmt(", %.2fs", dt);
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto g = testing_support::rng(101);
  for (std::size_t n : {8u, 32u, 64u}) {
    std::vector<complex> ev(n);
    for (auto& z : ev) z = testing_support::random_complex(g, 3.0);
    ComplexMatrix S = ComplexMatrix::identity(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) S(r, c) += testing_support::random_complex(g, 0.5 / std::sqrt(double(n)));
    ComplexMatrix D(n);
    for (std::size_t k = 0; k < n; ++k) D(k, k) = ev[k];
    const ComplexMatrix A = S * D * inverse(S);
    const auto r = eigenvalues(A);
    const double d = match_distance(r.eigenvalues, ev);
    complex sum{};
    for (const complex z : r.eigenvalues) sum += z;
    const double tr = std::abs(sum - A.trace()) / std::max(1.0, std::abs(A.trace()));
    const std::string tag = "n=" + std::to_string(n);
    o.require(r.converged, tag + " not converged");
    o.require(d <= kEigTol, tag + fmt(" dist %.3g", d));
    o.require(tr <= kTraceTol, tag + fmt(" trace %.3g", tr));
  }
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const std::array<complex, 3> c{testing_support::random_complex(g, 2.0), testing_support::random_complex(g, 5.0),
                                   testing_support::random_complex(g, 5.0)};
    const auto closed = quadratic_roots(c[0], c[1], c[2]);
    double scale = 1.0;
    for (const complex z : closed) scale = std::max(scale, std::abs(z));
    worst = std::max(worst,
                     match_distance(std::vector<complex>(closed.begin(), closed.end()), companion_roots(c)) / scale);
  }
  o.require(worst <= kQuadTol, fmt("quadratic gap %.3g", worst));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("quadratic gap %.1e", worst);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const OperatorMatrix T = testing_support::film_operator();
  const LimitingMatrix L = limiting_matrix(T);
  const SpectralPencil P = build_pencil(L);
  const double inf = std::numeric_limits<double>::infinity();
  auto g = testing_support::rng(99);
  double worst = 0.0;
  int used = 0;
  while (used < 1000) {
    const double xi = testing_support::uniform(g, -20.0, 20.0);
    const complex lam = testing_support::random_complex(g, 20.0);
    if (std::abs(L.d.at_xi(xi) - lam) < 1e-3 || std::abs(L.a.at_xi(xi) - lam) < 1e-3) continue;
    ++used;
    const double scale = P.scale(lam, xi);
    const complex p = P.at(lam, xi);
    const complex s1 = schur_symbol(T, SchurKind::First, lam, inf, xi);
    const complex s2 = schur_symbol(T, SchurKind::Second, lam, inf, xi);
    worst = std::max({worst, std::abs((L.d.at_xi(xi) - lam) * s1 - p) / scale,
                      std::abs((L.a.at_xi(xi) - lam) * s2 - p) / scale});
  }
  o.require(worst <= kSchurTol, fmt("identity gap %.3g", worst));
  double route = 0.0;
  for (SchurKind k : {SchurKind::First, SchurKind::Second}) {
    const SpectralPencil Q = pencil_from_schur(T, k);
    for (int j = 0; j <= 4; ++j) {
      route = std::max(route, std::abs(P.A.coeff(j) - Q.A.coeff(j)));
      route = std::max(route, std::abs(P.B.coeff(j) - Q.B.coeff(j)));
    }
  }
  o.require(route <= kSchurTol, fmt("route gap %.3g", route));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("identity %.1e", worst) + fmt(", routes %.1e", route);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto grid = default_stabilization_grid();
  const OperatorMatrix T = testing_support::film_operator(true);
  const complex probe = default_probe(T, grid);
  const double m3 = stabilization_metric(T, probe, 3.0, grid);
  const double m6 = stabilization_metric(T, probe, 6.0, grid);
  const double m10 = stabilization_metric(T, probe, 10.0, grid);
  o.require(m3 > m6 && m6 > m10, "not strictly decreasing");
  o.require(m10 <= kStabTail, fmt("metric(10) = %.3g", m10));
  const OperatorMatrix T0 = testing_support::film_operator(false);
  for (double x : {3.0, 6.0, 10.0})
    o.require(stabilization_metric(T0, probe, x, grid) == 0.0, fmt("constant metric nonzero at %g", x));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("%.2e", m3) + fmt(" > %.2e", m6) + fmt(" > %.2e", m10);
  return o;
}

Outcome criterion9() {
  Outcome o;
  double residual = 0.0, symmetry = 0.0;
  for (const OperatorMatrix& T : {testing_support::film_operator(), diagonal_operator()}) {
    const LimitingMatrix L = limiting_matrix(T);
    const SpectralPencil P = build_pencil(L);
    for (const Window& w : {Window{}, Window{-0.2, 0.1, -0.2, 0.2}}) {
      const auto grid = tanh_grid(choose_xi_plot(P, w), 2001);
      const auto curve = trace_spectrum(P, exceptional_sets(L, grid), grid, w);
      const CurveReport r = curve_invariant_check(curve, P);
      o.require(r.max_residual <= kResidualTol, fmt("residual %.3g", r.max_residual));
      o.require(r.max_symmetry_defect <= kSymmetryTol, fmt("symmetry %.3g", r.max_symmetry_defect));
      residual = std::max(residual, r.max_residual);
      symmetry = std::max(symmetry, r.max_symmetry_defect);
    }
  }
  const auto dir = std::filesystem::temp_directory_path() / "essspec_acceptance";
  std::filesystem::create_directories(dir);
  for (const std::string window : {"-3,0.2,-20,20", "-0.2,0.1,-0.2,0.2"}) {
    std::string csv[2], svg[2];
    for (int k = 0; k < 2; ++k) {
      const auto c = dir / ("fig" + std::to_string(k) + ".csv");
      const auto s = dir / ("fig" + std::to_string(k) + ".svg");
      const int code = cli_run({"spectrum", kPresets + "/film.json", "--window=" + window, "--out-csv", c.string(),
                                "--out-svg", s.string()});
      o.require(code == 0, "spectrum exit " + std::to_string(code));
      csv[k] = slurp(c);
      svg[k] = slurp(s);
    }
    o.require(!csv[0].empty() && !svg[0].empty(), "empty output");
    o.require(csv[0] == csv[1] && svg[0] == svg[1], "window " + window + " not byte-identical");
  }
  std::filesystem::remove_all(dir);
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("residual %.1e", residual) + fmt(", symmetry %.1e", symmetry);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const OperatorMatrix T = testing_support::film_operator(true);
  const SpectralPencil P = pencil_of(T);
  double prev = -1.0;
  for (int M : {128, 256}) {
    const auto t0 = Clock::now();
    const auto rep = validate_spectrum(T, P, Scheme::Fourier, 20.0, M, Window{});
    const double dt = seconds_since(t0);
    const std::string tag = "M=" + std::to_string(M);
    o.require(rep.converged, tag + " not converged");
    if (M == 256) o.require(rep.matched_fraction >= kMatchedMin, tag + fmt(" fraction %.3f", rep.matched_fraction));
    o.require(rep.matched_fraction >= prev, "fraction decreased");
    prev = rep.matched_fraction;
    o.detail += (o.detail.empty() ? "" : "; ") + tag + fmt(" fraction %.3f", rep.matched_fraction) + " (" +
                std::to_string(rep.matched) + "/" + std::to_string(rep.in_window) + ")" + fmt(" %.2fs", dt);
  }
  return o;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (k + 1 == criteria.size()) {
      const double total = seconds_since(t0);
      o.require(total < kBudgetTotal, fmt("total %.1fs", total));
      o.detail += fmt("; total %.1fs", total);
    }
    failures += !o.pass;
    std::printf("criterion %2zu: %s  %s\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
