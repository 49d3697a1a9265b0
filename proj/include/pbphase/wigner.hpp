#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pbphase/fock.hpp"

namespace pbphase {

/// Quadratures in units with ħ = 1/2 and a^† = x - i p.
struct PhaseSpacePoint {
  double q = 0.0;
  double p = 0.0;
};

/// Position wavefunction <x|n> with <x|0> = (2/π)^{1/4} e^{-x²}, from the
/// normalized three-term recurrence.
double hermite_wavefunction(int n, double x);

/// All of <x|0> .. <x|n_max>.
std::vector<double> hermite_wavefunctions(int n_max, double x);

/// Closed-form Wigner function of a single-mode density matrix, using the
/// Laguerre form of the Fock kernels. The p sign follows the e^{+ipx/ħ}
/// transform, so advancing the phase of the amplitudes (e^{inφ}) turns the
/// pattern clockwise.
class WignerKernel {
 public:
  explicit WignerKernel(const FockDensity& rho);

  double operator()(double q, double p) const;
  // Same sum without assuming Hermiticity; returns the imaginary residue.
  double imaginary_residue(double q, double p) const;
  int cutoff() const { return cutoff_; }

 private:
  int cutoff_;
  Eigen::MatrixXcd rho_;
  std::vector<double> norm_;  // (-1)^n sqrt(n!/(n+d)!) at [d*(c+1)+n]
};

double wigner_point(const FockDensity& rho, PhaseSpacePoint pt);

struct IntegralValue {
  double value = 0.0;
  double error = 0.0;
};

/// Direct numerical integration of (1/π)∫dx <q+x/2|ψ><ψ|q-x/2> e^{2ipx}.
/// Independent of the Laguerre kernel; used as its oracle.
IntegralValue wigner_point_integral(const FockVector& psi, PhaseSpacePoint pt);

struct GridSpec {
  double q_min = -5.0, q_max = 5.0;
  double p_min = -5.0, p_max = 5.0;
  int nq = 101, np = 101;

  static GridSpec square(double extent, int n) { return {-extent, extent, -extent, extent, n, n}; }
  void validate() const;
};

/// W sampled on a uniform lattice; values(i, j) = W(q_i, p_j).
struct WignerGrid {
  GridSpec spec;
  Eigen::MatrixXd values;

  double q_at(int i) const;
  double p_at(int j) const;
  // Bilinear interpolation; points outside the lattice clamp to the border.
  double interpolate(double q, double p) const;
  // Riemann sum over the lattice (cell area times the sum of samples).
  double riemann_sum() const;
};

WignerGrid wigner_grid(const FockDensity& rho, const GridSpec& spec);

/// Pattern turned by `angle` (counter-clockwise in the q-p plane):
/// out(x) = in(R(-angle) x), sampled on the same lattice.
WignerGrid rotated(const WignerGrid& grid, double angle);

struct QuadratureSpec {
  enum class Scheme {
    // uniform panels of tensor Gauss-Legendre, doubled until successive
    // refinements agree
    tensor_gauss_legendre,
    // adaptive Gauss-Kronrod in q; along p the integrand is split exactly at
    // the nodal points of W, so each piece is smooth
    adaptive,
  };
  Scheme scheme = Scheme::adaptive;
  double radius_margin = 2.0;
  int panel_order = 6;
  double tolerance = 1e-6;
  int max_panels = 2048;      // per side, tensor scheme
  double line_spacing = 0.02;  // nodal search step along p, adaptive scheme
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double half_width = 0.0;
  long evaluations = 0;
};

/// (∫|W| - 1)/2, evaluated as the integral of max(-W, 0) over a square of
/// half-width support_radius + margin (equal for trace-1 states).
double negativity_volume(const FockDensity& rho, const QuadratureSpec& quad = {});
QuadratureResult negativity_volume_detailed(const FockDensity& rho, const QuadratureSpec& quad = {});

/// ∫W over the same domain; equals the trace.
QuadratureResult phase_space_integral(const FockDensity& rho, const QuadratureSpec& quad = {});

inline constexpr double kRadiusThreshold = 1e-3;

/// Outermost t >= 0 along the ray at `angle` where |W| crosses the threshold:
/// outward window check, inward scan, then bisection to 1e-10.
double effective_radius(const FockDensity& rho, double angle = 0.0,
                        double threshold = kRadiusThreshold);

/// Largest effective radius over 16 rays; sizes the quadrature domain.
double support_radius(const FockDensity& rho, double threshold = kRadiusThreshold);

}  // namespace pbphase
