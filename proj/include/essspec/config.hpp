#pragma once

// JSON configuration: parameters, the four operator entries as coefficient
// records, grid overrides and tolerances.
//
//   {
//     "params": {"delta": 0.98},
//     "entries": {"a": [{"power": 2, "limit": "9*eta/(2*delta)",
//                        "perturbation": "0.1*exp(-x^2)"}], "b": [], ...},
//     "grids": {"x_max": 50, "x_points": 201, "xi_max": 1000, "xi_points": 200},
//     "tolerances": {"decay_tol": 1e-6, ...}
//   }

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "essspec/ellipticity.hpp"
#include "essspec/symbols.hpp"

namespace essspec {

/// Schema or invariant violation. path() is a JSON pointer into the
/// offending document ("" for operator-level failures).
class ConfigError : public ValidationError {
public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

struct TermSpec {
  int power = 0;
  std::string limit;
  std::optional<std::string> perturbation;

  friend bool operator==(const TermSpec&, const TermSpec&) = default;
};

struct Tolerances {
  double decay_tol = 1e-6;
  double x_far = 50.0;
  double margin_tol = 1e-8;
  double pole_tol = 1e-12;
  double pole_guard = 0.5;
  double coarse_tol = 1e-2;
  double refine_tol = 1e-10;
  double root_tol = 1e-10;
  double qr_tol = 1e-12;
  double excl_tol = 1e-6;
  double stab_tol = 1e-6;
  std::optional<double> dist_tol;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct Config {
  std::map<std::string, double> params;
  /// Indexed by Entry (a, b, c, d).
  std::array<std::vector<TermSpec>, 4> entries;
  GridOptions grids;
  Tolerances tolerances;

  const std::vector<TermSpec>& entry(Entry e) const { return entries[static_cast<int>(e)]; }

  /// Parses every expression and builds the operator; enforces m ≥ q > 0.
  OperatorMatrix build_operator() const;
};

/// Parses and fully validates: schema, expressions, constant limits,
/// distinct powers, operator orders, and the decay check.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);
std::string emit_config(const Config& c);

/// The falling-film operator with constant coefficients at their limits;
/// perturbed adds 0.1·exp(-x²) to every coefficient.
Config film_config(double delta = 0.98, double eta = 0.01, double c0 = 1.15, bool perturbed = false);

/// Evaluated view used to compare configs: per entry, the (power, limit,
/// perturbation samples on a fixed x grid) triples.
bool equivalent(const Config& a, const Config& b, double tol = 0.0);

}  // namespace essspec
