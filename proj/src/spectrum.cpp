#include "shuttle/spectrum.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace shuttle {

Spectrum control_spectrum(const PiecewiseControls& controls) {
  const int n = controls.slices();
  const int p = static_cast<int>(controls.values.cols());
  if (n < 1) throw std::invalid_argument("empty pulse table");

  const int bins = n / 2 + 1;
  Spectrum out;
  out.freq_ghz.resize(bins);
  out.magnitude.resize(bins, p);
  out.phase.resize(bins, p);

  using cd = std::complex<double>;
  std::vector<cd> coeff(p);
  for (int k = 0; k < bins; ++k) {
    const cd w = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
    cd wn = 1.0;
    for (auto& c : coeff) c = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < p; ++m) coeff[m] += controls.values(j, m) * wn;
      wn *= w;
    }
    out.freq_ghz[k] = static_cast<double>(k) / (n * controls.dt);
    for (int m = 0; m < p; ++m) {
      out.magnitude(k, m) = std::abs(coeff[m]) / n;
      out.phase(k, m) = std::arg(coeff[m]);
    }
  }

  int dominant = 0;
  double best = -1.0;
  for (int k = 0; k < bins; ++k) {
    const double total = out.magnitude.row(k).sum();
    if (total > best) {
      best = total;
      dominant = k;
    }
  }
  out.dominant_bin = dominant;
  out.relative_phase.resize(p);
  for (int m = 0; m < p; ++m) {
    double d = out.phase(dominant, m) - out.phase(dominant, 0);
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    out.relative_phase[m] = d;
  }
  return out;
}

}  // namespace shuttle
