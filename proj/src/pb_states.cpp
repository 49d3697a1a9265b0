#include "pbphase/pb_states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pbphase {

double PbParams::phase() const { return phi0 + 2.0 * std::numbers::pi * m / (s + 1); }

void PbParams::validate() const {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  if (m < 0 || m > s) throw std::invalid_argument("m must lie in [0, s]");
  if (!std::isfinite(phi0)) throw std::invalid_argument("phi0 must be finite");
}

FockVector phase_state(int s, double phi, int cutoff) {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  if (cutoff < 0) cutoff = s;
  if (cutoff < s)
    throw std::invalid_argument("cutoff " + std::to_string(cutoff) + " cannot hold s=" +
                                std::to_string(s));
  std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1);
  const double amp = 1.0 / std::sqrt(s + 1.0);
  for (int n = 0; n <= s; ++n) a[static_cast<std::size_t>(n)] = std::polar(amp, n * phi);
  return FockVector({cutoff, 1}, std::move(a), Norm::normalized);
}

FockVector pb_eigenstate(const PbParams& p, int cutoff) {
  p.validate();
  return phase_state(p.s, p.phase(), cutoff);
}

Eigen::MatrixXcd pb_phase_operator(int s, double phi0) {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  const auto d = static_cast<Eigen::Index>(s + 1);
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(d, d);
  for (int m = 0; m <= s; ++m) {
    const PbParams p{s, m, phi0};
    const FockVector v = pb_eigenstate(p);
    Eigen::Map<const Eigen::VectorXcd> col(v.amplitudes().data(), d);
    op += p.phase() * (col * col.adjoint());
  }
  return 0.5 * (op + op.adjoint());
}

}  // namespace pbphase
