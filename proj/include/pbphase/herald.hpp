#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbphase/fock.hpp"
#include "pbphase/operators.hpp"
#include "pbphase/wigner.hpp"

namespace pbphase {

/// One operating point of the heralded phase-state source: a two-mode
/// squeezed vacuum on (mode s, mode A), the splitter cascade B_{1,s}..B_{s-1,s}
/// over modes 1..s, displacements D_j(α_j), and s inefficient detectors.
///
/// Tensor layout: modes 1..s are indices 0..s-1, mode A is index s (last).
struct HeraldConfig {
  int s = 4;
  double r = 0.1;  // squeezing; q = tanh r
  double eta = 1.0;
  int cutoff = 5;
  DisplacementScheme displacement = DisplacementScheme::series(5);
  int tmsv_terms = 6;
  int m = 0;  // phase plate on mode A targets |φ_m>_s
  double leakage_bound = 1e-6;
  QuadratureSpec quadrature{};

  double q() const;
  void validate() const;
};

struct CircuitState {
  FockVector psi;
  std::vector<cplx> alphas;
  double leakage = 0.0;
  std::vector<std::string> warnings;
};

struct HeraldResult {
  std::vector<cplx> alphas;
  double P = 0.0;
  double F = 0.0;
  FockDensity rho_A;
  double V = 0.0;
  double leakage = 0.0;
  std::vector<std::string> warnings;
};

/// Creation-operator weights of mode s's photons on modes 1..s after the
/// splitter cascade (Heisenberg picture).
Eigen::VectorXcd splitter_weights(int s);

/// f_{s,j} such that the heralded amplitude of |j>_A at order q^j is
/// f_{s,j} e_{s-j}(α). Probe: run the first-order circuit with every α = t,
/// read off the t^{s-j} coefficient and divide by C(s, s-j).
std::vector<double> symmetric_factors(int s);

/// Heralded amplitudes c_j (j = 0..s) of the first-order circuit for the given
/// displacements, keeping only single-occupancy detector patterns; the
/// amplitude of |j>_A is sqrt(1-q²) q^j c_j + higher orders.
std::vector<cplx> first_order_amplitudes(int s, std::span<const cplx> alphas);

/// Monic polynomial Π(x - α_j) = Σ_k (-1)^k e_k x^{s-k} with
/// e_k = (f_{s,s}/f_{s,s-k}) q^k, which equalizes c_0 = q c_1 = ... = q^s c_s.
std::vector<cplx> alpha_polynomial(int s, double q);

/// All roots (companion matrix, Newton-polished), canonically ordered.
std::vector<cplx> solve_alphas(std::span<const cplx> poly);

CircuitState build_state(const HeraldConfig& cfg);

/// Probability that all s detectors click.
double click_probability(const HeraldConfig& cfg);

/// Overlap of the heralded mode-A state with |φ_m>_s.
double herald_fidelity(const HeraldConfig& cfg);

struct ConditionalNegativity {
  FockDensity rho_A;
  double V;
};
ConditionalNegativity conditional_negativity(const HeraldConfig& cfg);

/// Everything for one point; `with_negativity` = false skips the quadrature.
HeraldResult evaluate_herald(const HeraldConfig& cfg, bool with_negativity = true);

struct SweepRow {
  int s = 0;
  double r = 0.0;
  double eta = 0.0;
  double P = 0.0;
  double F = 0.0;
  double V = 0.0;
  double leakage = 0.0;
  std::vector<cplx> alphas;
  std::optional<FockDensity> rho_A;
  std::string error;  // empty on success
};

/// Rows ordered by s, then eta, then r. Failures are recorded per row.
std::vector<SweepRow> herald_sweep(const HeraldConfig& base, std::span<const int> s_values,
                                   std::span<const double> r_values,
                                   std::span<const double> eta_values, bool with_negativity = true);

/// Least-squares slope of log10 y against log10 x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace pbphase
