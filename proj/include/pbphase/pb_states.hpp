#pragma once

#include <Eigen/Dense>

#include "pbphase/fock.hpp"

namespace pbphase {

/// Phase state |φ_m>_s on the (s+1)-dimensional space, φ_m = φ0 + 2πm/(s+1).
struct PbParams {
  int s = 1;
  int m = 0;
  double phi0 = 0.0;

  double phase() const;
  void validate() const;
};

/// (s+1)^{-1/2} Σ_{n<=s} e^{i n φ_m} |n>, embedded at `cutoff` (default s).
FockVector pb_eigenstate(const PbParams& p, int cutoff = -1);

/// Equal-weight state with an arbitrary reference phase phi.
FockVector phase_state(int s, double phi, int cutoff = -1);

/// Σ_m φ_m |φ_m><φ_m| in the Fock basis.
Eigen::MatrixXcd pb_phase_operator(int s, double phi0 = 0.0);

}  // namespace pbphase
