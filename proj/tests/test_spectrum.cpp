#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shuttle/spectrum.hpp"

using namespace shuttle;

TEST_CASE("constant pulse concentrates at zero frequency") {
  PiecewiseControls c;
  c.dt = 0.01;
  c.control_names = {"omega12", "omega23"};
  c.values = Eigen::MatrixXd::Zero(128, 2);
  c.values.col(0).setConstant(0.4);

  const Spectrum s = control_spectrum(c);
  CHECK(s.dominant_bin == 0);
  CHECK(s.freq_ghz[0] == 0.0);
  CHECK(s.magnitude(0, 0) == doctest::Approx(0.4));
  for (int k = 1; k < s.freq_ghz.size(); ++k)
    CHECK(s.magnitude(k, 0) <= 1e-12);
}

TEST_CASE("bin-frequency sinusoid gives a single dominant bin") {
  const int n = 256;
  const int k0 = 17;
  PiecewiseControls c;
  c.dt = 0.005;
  c.control_names = {"a", "b"};
  c.values.resize(n, 2);
  for (int j = 0; j < n; ++j) {
    const double arg = 2.0 * std::numbers::pi * k0 * j / n;
    c.values(j, 0) = std::cos(arg);
    c.values(j, 1) = std::sin(arg);  // quadrature partner
  }

  const Spectrum s = control_spectrum(c);
  CHECK(s.dominant_bin == k0);
  CHECK(s.freq_ghz[k0] == doctest::Approx(k0 / (n * c.dt)));
  CHECK(s.magnitude(k0, 0) == doctest::Approx(0.5));
  for (int k = 0; k < s.freq_ghz.size(); ++k)
    if (k != k0) CHECK(s.magnitude(k, 0) <= 1e-12);

  // sin lags cos by pi/2 at the dominant component.
  CHECK(s.relative_phase[0] == 0.0);
  CHECK(s.relative_phase[1] == doctest::Approx(-std::numbers::pi / 2.0));
}
