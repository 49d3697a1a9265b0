#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pbphase {

using cplx = std::complex<double>;

/// Per-mode photon-number cutoff (inclusive) and number of modes.
struct TruncationConfig {
  int cutoff = 1;
  int modes = 1;

  std::size_t local_dim() const { return static_cast<std::size_t>(cutoff) + 1; }
  std::size_t size() const;
  bool operator==(const TruncationConfig&) const = default;
};

enum class Norm { normalized, subnormalized };

/// Pure multimode state as a dense amplitude tensor over truncated photon
/// numbers. Row-major: the last mode varies fastest.
///
/// States flagged `normalized` have unit squared norm within 1e-12; heralded
/// and truncated states are `subnormalized` and are never rescaled implicitly.
/// `leakage` carries the squared norm lost to truncation by the operations
/// that produced this state.
class FockVector {
 public:
  FockVector(TruncationConfig config, std::vector<cplx> amplitudes,
             Norm norm = Norm::subnormalized, double leakage = 0.0);

  static FockVector zero(TruncationConfig config);
  static FockVector basis(TruncationConfig config, std::span<const int> occupation);
  static FockVector single_mode(std::span<const cplx> amplitudes, int cutoff,
                                Norm norm = Norm::subnormalized);

  const TruncationConfig& config() const { return config_; }
  int cutoff() const { return config_.cutoff; }
  int modes() const { return config_.modes; }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::size_t size() const { return amps_.size(); }

  cplx operator[](std::size_t flat) const { return amps_[flat]; }
  cplx at(std::span<const int> occupation) const;

  std::size_t stride(int mode) const;
  std::size_t flat_index(std::span<const int> occupation) const;
  std::vector<int> occupation(std::size_t flat) const;

  double squared_norm() const;
  bool is_normalized() const { return norm_ == Norm::normalized; }
  double leakage() const { return leakage_; }

  FockVector normalized() const;
  // Re-embed a single-mode state at another cutoff; shrinking requires the
  // dropped amplitudes to vanish.
  FockVector with_cutoff(int cutoff) const;
  // Highest photon number with a nonzero amplitude in any mode.
  int max_photon_number(double tol = 0.0) const;

 private:
  TruncationConfig config_;
  std::vector<cplx> amps_;
  Norm norm_;
  double leakage_;
};

/// Single-mode density matrix in the Fock basis. `declared_trace` is 1 for a
/// normalized state and the heralding probability for subnormalized ones.
/// The single-argument form declares a normalized state.
class FockDensity {
 public:
  explicit FockDensity(Eigen::MatrixXcd matrix);
  FockDensity(Eigen::MatrixXcd matrix, double declared_trace);

  static FockDensity pure(const FockVector& psi);

  int cutoff() const { return static_cast<int>(matrix_.rows()) - 1; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  cplx operator()(int m, int n) const { return matrix_(m, n); }
  double declared_trace() const { return declared_trace_; }
  double trace() const { return matrix_.trace().real(); }

  double min_eigenvalue() const;
  bool is_psd(double tol = 1e-10) const { return min_eigenvalue() >= -tol; }
  FockDensity normalized() const;

 private:
  Eigen::MatrixXcd matrix_;
  double declared_trace_;
};

FockVector tensor_product(const FockVector& a, const FockVector& b);

cplx inner_product(const FockVector& a, const FockVector& b);

/// ⟨ψ|ρ|ψ⟩ / tr ρ.
double fidelity_pure(const FockDensity& rho, const FockVector& psi);

/// Slice of `state` at the given photon counts; the result lives on the
/// remaining modes (order preserved) and its squared norm is the probability
/// of that exact outcome.
FockVector project_pattern(const FockVector& state, const std::map<int, int>& detected);

/// Apply a (rows x cutoff+1) matrix to one mode. Rows beyond the cutoff are
/// dropped and their weight is added to the result's leakage.
FockVector apply_single_mode(const FockVector& state, int mode, const Eigen::MatrixXcd& op);

struct ConditionalState {
  FockDensity rho;     // trace 1
  double probability;  // ⟨Ψ|(⊗E ⊗ I)|Ψ⟩
};

/// Heralding probabilities at or below this floor are treated as zero.
inline constexpr double kProbabilityFloor = 1e-300;

/// Reduced state of `kept_mode` conditioned on measuring every other mode with
/// the given POVM elements (one per non-kept mode, in mode order).
ConditionalState conditional_density(const FockVector& state,
                                     std::span<const Eigen::MatrixXcd> povm_per_mode,
                                     int kept_mode);

}  // namespace pbphase
