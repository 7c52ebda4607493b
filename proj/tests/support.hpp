#pragma once

#include <complex>
#include <cstdint>
#include <array>
#include <random>
#include <vector>

#include "essspec/config.hpp"
#include "essspec/expr.hpp"
#include "essspec/symbols.hpp"

namespace testing_support {

using complex = std::complex<double>;

// Reference values for the film operator at δ = 0.98, η = 0.01, c0 = 1.15,
// evaluated in 30-digit arithmetic from the operator entries by hand
// expansion of det(M∞ - λ), independently of the library.
namespace film {
inline constexpr double kDelta = 0.98;
inline constexpr double kEta = 0.01;
inline constexpr double kC0 = 1.15;
inline constexpr double kOmega1 = 2.5510204081632653;  // 5/(2δ)
inline constexpr double kOmega2 = 0.3404761904761905;  // |c0 - 17/21|
inline constexpr double kBound = 0.4840220908420989;   // sqrt(9η·ω1/δ)
// A(ξ) = -(a∞ + d∞) by power of iξ.
inline constexpr double kA[3] = {2.5510204081632653, -1.4904761904761905, -0.04591836734693878};
// B(ξ) = a∞d∞ - b∞c∞ by power of iξ (constant term 0).
inline constexpr double kB[5] = {0.0, -0.3826530612244898, 0.5344047619047619, 0.03239795918367347,
                                 0.8503401360544218};
inline constexpr double kTbAtInfXi1Re = 2.5714285714285714;
inline constexpr double kTbAtInfXi1Im = -0.7074829931972789;
inline constexpr double kPrincipalTaXi2 = -0.18367346938775510;
inline constexpr double kDetMXi1Re = 0.8503401360544218;
inline constexpr double kDetMXi1Im = -0.05280612244897959;
inline constexpr double kPrincipalSchurXi1Im = -0.7394262052647146;
}  // namespace film

inline essspec::OperatorMatrix film_operator(bool perturbed = false) {
  return essspec::film_config(film::kDelta, film::kEta, film::kC0, perturbed).build_operator();
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline complex random_complex(std::mt19937_64& g, double scale = 1.0) {
  return {uniform(g, -scale, scale), uniform(g, -scale, scale)};
}

inline double rel_err(complex a, complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

struct RandomSystem {
  essspec::OperatorMatrix T;
  bool degenerate = false;
};

// Constant-limit 2×2 system with m ≥ q > 0 and m+q ≠ n+p. Leading
// coefficients have modulus in [0.1, 10] and random phase. A degenerate
// instance replaces the leading coefficient of one decisive entry with
// exp(-x²), whose limit 0 breaks ellipticity at x = ∞.
inline RandomSystem random_system(std::mt19937_64& g, double degenerate_rate = 0.1) {
  using namespace essspec;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); };
  for (;;) {
    const int m = pick(1, 4);
    const int q = pick(1, m);
    const bool b_zero = uniform(g, 0, 1) < 0.1;
    const bool c_zero = uniform(g, 0, 1) < 0.1;
    const int n = pick(0, 4);
    const int p = pick(0, 4);
    if (!b_zero && !c_zero && m + q == n + p) continue;

    auto symbol = [&](int order, bool zero) {
      if (zero) return DiffSymbol();
      std::vector<CoeffFn> cs;
      for (int j = 0; j < order; ++j) cs.emplace_back(random_complex(g));
      cs.emplace_back(std::polar(std::pow(10.0, uniform(g, -1.0, 1.0)), uniform(g, 0.0, 6.283185307179586)));
      return DiffSymbol(std::move(cs));
    };
    std::array<DiffSymbol, 4> s{symbol(m, false), symbol(n, b_zero), symbol(p, c_zero), symbol(q, false)};

    const bool offdiag = !b_zero && !c_zero && n + p > m + q;
    const bool degenerate = uniform(g, 0, 1) < degenerate_rate;
    if (degenerate) {
      const int which = offdiag ? pick(1, 2) : (pick(0, 1) == 0 ? 0 : 3);
      auto cs = std::vector<CoeffFn>(s[which].coeffs().begin(), s[which].coeffs().end());
      cs.back() = CoeffFn(0.0, parse_expr("exp(-x^2)"));
      s[which] = DiffSymbol(std::move(cs));
    }
    return {OperatorMatrix(s[0], s[1], s[2], s[3]), degenerate};
  }
}

}  // namespace testing_support
