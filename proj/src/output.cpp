#include "essspec/output.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace essspec {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  if (v == 0.0) v = 0.0;  // prints -0 as 0
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string spectrum_csv(const SpectrumCurve& curve, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    std::istringstream lines{std::string(comment)};
    for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
  }
  out += "xi,branch,re_lambda,im_lambda,ok,near_sigma_d,near_sigma_a,in_lambda_set\n";
  auto bit = [](bool b) { return b ? "1" : "0"; };
  for (const auto& s : curve.samples) {
    for (int b = 0; b < 2; ++b) {
      const auto& f = s.flags[b];
      out += format_double(s.xi) + "," + std::to_string(b) + "," + format_double(s.roots[b].real()) + "," +
             format_double(s.roots[b].imag()) + "," + bit(f.ok) + "," + bit(f.near_sigma_d) + "," +
             bit(f.near_sigma_a) + "," + bit(f.in_lambda_set) + "\n";
    }
  }
  return out;
}

std::string eigenvalues_csv(const std::vector<complex>& eigs) {
  std::string out = "re,im\n";
  for (const complex z : eigs) out += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
  return out;
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 640.0;
constexpr double kPad = 48.0;

// Branch 0, branch 1, near σ(T̄_d), near σ(T̄_a), Λ, axes.
constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#7f7f7f"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  return s == "-0.000" ? "0.000" : s;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Frame {
  Window w;
  double px(double re) const { return kPad + (re - w.re_min) / (w.re_max - w.re_min) * (kWidth - 2 * kPad); }
  double py(double im) const { return kHeight - kPad - (im - w.im_min) / (w.im_max - w.im_min) * (kHeight - 2 * kPad); }
};

}  // namespace

std::string spectrum_svg(const SpectrumCurve& curve, const Window& window) {
  const Frame fr{window};
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(kWidth) << "\" height=\""
    << fixed(kHeight) << "\" viewBox=\"0 0 " << fixed(kWidth) << " " << fixed(kHeight) << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << fixed(kWidth) << "\" height=\"" << fixed(kHeight)
    << "\" fill=\"#ffffff\"/>\n"
    << "<rect x=\"" << fixed(kPad) << "\" y=\"" << fixed(kPad) << "\" width=\"" << fixed(kWidth - 2 * kPad)
    << "\" height=\"" << fixed(kHeight - 2 * kPad) << "\" fill=\"none\" stroke=\"" << kPalette[5] << "\"/>\n";

  const char* axis = kPalette[5];
  if (window.re_min <= 0.0 && window.re_max >= 0.0)
    o << "<line x1=\"" << fixed(fr.px(0)) << "\" y1=\"" << fixed(kPad) << "\" x2=\"" << fixed(fr.px(0))
      << "\" y2=\"" << fixed(kHeight - kPad) << "\" stroke=\"" << axis << "\" stroke-dasharray=\"4 3\"/>\n";
  if (window.im_min <= 0.0 && window.im_max >= 0.0)
    o << "<line x1=\"" << fixed(kPad) << "\" y1=\"" << fixed(fr.py(0)) << "\" x2=\"" << fixed(kWidth - kPad)
      << "\" y2=\"" << fixed(fr.py(0)) << "\" stroke=\"" << axis << "\" stroke-dasharray=\"4 3\"/>\n";

  o << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#000000\">\n"
    << "<text x=\"" << fixed(kPad) << "\" y=\"" << fixed(kHeight - kPad + 16) << "\">" << label(window.re_min)
    << "</text>\n"
    << "<text x=\"" << fixed(kWidth - kPad) << "\" y=\"" << fixed(kHeight - kPad + 16)
    << "\" text-anchor=\"end\">" << label(window.re_max) << "</text>\n"
    << "<text x=\"" << fixed(kPad - 4) << "\" y=\"" << fixed(kHeight - kPad) << "\" text-anchor=\"end\">"
    << label(window.im_min) << "i</text>\n"
    << "<text x=\"" << fixed(kPad - 4) << "\" y=\"" << fixed(kPad + 10) << "\" text-anchor=\"end\">"
    << label(window.im_max) << "i</text>\n"
    << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"" << fixed(kHeight - 12)
    << "\" text-anchor=\"middle\">Re λ</text>\n"
    << "<text x=\"14\" y=\"" << fixed(kHeight / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << fixed(kHeight / 2) << ")\">Im λ</text>\n"
    << "</g>\n";

  for (int b = 0; b < 2; ++b) {
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        o << "<polyline fill=\"none\" stroke=\"" << kPalette[b] << "\" stroke-width=\"1.5\" points=\"" << pts
          << "\"/>\n";
      pts.clear();
    };
    for (const auto& s : curve.samples) {
      const complex r = s.roots[b];
      if (!window.contains(r)) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += fixed(fr.px(r.real())) + "," + fixed(fr.py(r.imag()));
    }
    flush();
  }

  for (const auto& s : curve.samples) {
    for (int b = 0; b < 2; ++b) {
      const complex r = s.roots[b];
      if (!window.contains(r)) continue;
      const auto& f = s.flags[b];
      const char* color = kPalette[b];
      double radius = 1.2;
      if (f.in_lambda_set) {
        color = kPalette[4];
        radius = 4.0;
      } else if (f.near_sigma_d) {
        color = kPalette[2];
        radius = 3.0;
      } else if (f.near_sigma_a) {
        color = kPalette[3];
        radius = 3.0;
      }
      o << "<circle cx=\"" << fixed(fr.px(r.real())) << "\" cy=\"" << fixed(fr.py(r.imag())) << "\" r=\""
        << fixed(radius) << "\" fill=\"" << color << "\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace essspec
