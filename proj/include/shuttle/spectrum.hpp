#ifndef SHUTTLE_SPECTRUM_HPP
#define SHUTTLE_SPECTRUM_HPP

#include "shuttle/propagator.hpp"

namespace shuttle {

// One-sided discrete Fourier transform of the pulse samples.  Bin k maps
// to frequency k/(N*dt) GHz; magnitudes are |X_k| / N.
struct Spectrum {
  Eigen::VectorXd freq_ghz;   // N/2 + 1 bins
  Eigen::MatrixXd magnitude;  // bins x p
  Eigen::MatrixXd phase;      // bins x p, radians
  int dominant_bin = 0;       // argmax of summed magnitudes over controls
  // Phase of each control relative to the first, at the dominant bin,
  // wrapped to (-pi, pi].
  Eigen::VectorXd relative_phase;
};

Spectrum control_spectrum(const PiecewiseControls& controls);

}  // namespace shuttle

#endif
