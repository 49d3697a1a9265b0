#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pbphase/fock.hpp"

namespace pbphase {

/// Exact photon-count distribution behind the 50-50 splitter;
/// probs(n1, n2) for 0 <= n1, n2 <= max_photons.
struct OutcomeDistribution {
  int s = 0;
  Eigen::MatrixXd probs;

  int max_photons() const { return static_cast<int>(probs.rows()) - 1; }
  double operator()(int n1, int n2) const;
};

struct CountTable {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double phi_j = 0.0;
  int s = 0;

  std::int64_t operator()(int n1, int n2) const;
};

/// Coefficients of Σ_k c_k |φ_k>_s (φ0 = 0), normalized with c_0 real >= 0.
struct SuperpositionCoeffs {
  int s = 0;
  std::vector<cplx> c;

  /// Normalizes and fixes the global phase.
  static SuperpositionCoeffs make(std::vector<cplx> c);
  /// c_0 = r, c_1 = sqrt(1-r²) e^{iθ}.
  static SuperpositionCoeffs qubit(double r, double theta);
};

/// Observed outcome frequencies; trials = +inf marks exact probabilities.
struct ObservedFrequencies {
  Eigen::MatrixXd freq;
  double trials = 0.0;

  static ObservedFrequencies from(const CountTable& t);
  static ObservedFrequencies exact(const OutcomeDistribution& d);
  double operator()(int n1, int n2) const;
};

/// Two-mode amplitudes after the balanced splitter, cutoff = sum of the inputs' cutoffs.
FockVector interference_amplitudes(const FockVector& left, const FockVector& right);
OutcomeDistribution interference_probs(const FockVector& left, const FockVector& right);

FockVector superposition_state(const SuperpositionCoeffs& coeffs);

/// Reference |φ_j>_s in mode 1, the unknown superposition in mode 2.
OutcomeDistribution superposition_probs(double phi_j, const SuperpositionCoeffs& coeffs);

/// Reference phases φ_j = 2πj/(s+1), j = 0..s.
std::vector<double> reference_phases(int s);

/// Multinomial sample of `trials` outcomes. Stream: SplitMix64(seed) seeds a
/// std::mt19937_64; each draw takes the top 53 bits as a uniform in [0,1) and
/// inverts the cumulative distribution in row-major (n1, n2) order.
CountTable sample_outcomes(const OutcomeDistribution& dist, std::int64_t trials,
                           std::uint64_t seed, double phi_j = 0.0);

/// Seed for the index-th independent table derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct PhaseEstimate {
  double phi_k = 0.0;     // in [0, 2π)
  double std_error = 0.0;
  std::vector<double> candidates;  // both ±acos branches for one setting
  bool resolved = false;
};

/// Single-photon contrast (N10 - N01)/(N10 + N01) = cos(φ_j - φ_k). With one
/// setting the sign of φ_j - φ_k is ambiguous and both candidates are returned.
PhaseEstimate estimate_phase(const ObservedFrequencies& obs, double phi_j, int s);

/// Two settings whose phases differ by anything but a multiple of π fix the sign.
PhaseEstimate estimate_phase(const ObservedFrequencies& a, double phi_a,
                             const ObservedFrequencies& b, double phi_b, int s);

struct CoefficientSetting {
  double phi_j = 0.0;
  ObservedFrequencies data;
};

struct EstimatorOptions {
  double tolerance = 1e-10;  // on the objective
  int max_iterations = 50000;
};

struct CoefficientEstimate {
  SuperpositionCoeffs coeffs;
  double objective = 0.0;
  int iterations = 0;
  bool identifiable = true;
  std::string method;
  std::vector<std::string> warnings;
};

/// [(s+1)²-1](s+1) >= 2s: probabilities outnumber the free real parameters.
bool parameter_count_ok(int s);

/// Least squares over the unit sphere between model and observed
/// frequencies, started from a linear inversion for c c^†; s = 1 with a φ_j = 0
/// setting uses the closed-form inversion instead.
CoefficientEstimate estimate_coefficients(std::span<const CoefficientSetting> settings, int s,
                                          const EstimatorOptions& opts = {});

}  // namespace pbphase
