#pragma once

// Byte-deterministic CSV and SVG renderings of traced curves and
// eigenvalue lists.

#include <string>
#include <string_view>
#include <vector>

#include "essspec/spectrum.hpp"

namespace essspec {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Header `xi,branch,re_lambda,im_lambda,ok,near_sigma_d,near_sigma_a,in_lambda_set`,
/// one row per (sample, branch), clipped rows included. A non-empty comment
/// is written first as `# comment` lines.
std::string spectrum_csv(const SpectrumCurve& curve, std::string_view comment = {});

/// `re,im` rows.
std::string eigenvalues_csv(const std::vector<complex>& eigs);

/// SVG 1.1: frame and axes from the window, one polyline per branch (split
/// where it leaves the window), circles at in-window samples coloured by
/// branch or by flag.
std::string spectrum_svg(const SpectrumCurve& curve, const Window& window);

}  // namespace essspec
