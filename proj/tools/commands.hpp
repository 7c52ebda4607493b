#pragma once

// Subcommands of the essspec CLI. Exit codes: 0 pass, 1 failed assumption
// or check, 2 usage, I/O or configuration error.

#include <iosfwd>
#include <optional>
#include <string>

#include "essspec/config.hpp"
#include "essspec/spectrum.hpp"
#include "essspec/validate.hpp"
#include "json.hpp"

namespace essspec::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Parses "re_min,re_max,im_min,im_max". Throws Error on bad input.
Window parse_window(const std::string& text);

/// Ellipticity, assumption B, stabilization at x ∈ {5, 10, 20, 40}, the
/// omega-condition when the film template matches, and the pencil.
nlohmann::json check_report(const Config& cfg);

struct SpectrumFlags {
  int xi_points = 2001;
  Window window{};
  std::string out_csv;
  std::string out_svg;
  bool force = false;
};

struct ValidateFlags {
  Scheme scheme = Scheme::Fourier;
  double L = 20.0;
  int M = 256;
  Window window{};
  std::optional<double> dist_tol;
  std::string out_csv;
};

int cmd_check(const Config& cfg, std::ostream& out);
int cmd_spectrum(const Config& cfg, const SpectrumFlags& flags, std::ostream& out, std::ostream& err);
int cmd_validate(const Config& cfg, const ValidateFlags& flags, std::ostream& out, std::ostream& err);

/// Full command line (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace essspec::cli
