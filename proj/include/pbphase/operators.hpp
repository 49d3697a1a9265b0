#pragma once

#include <Eigen/Dense>

#include "pbphase/fock.hpp"

namespace pbphase {

/// 2x2 unitary acting on a pair of modes, (a'_i, a'_j)^T = U (a_i, a_j)^T.
///
/// States are transformed by substituting creation operators row-wise,
/// a_i^† -> U(0,0) a_i^† + U(0,1) a_j^† and a_j^† -> U(1,0) a_i^† + U(1,1) a_j^†,
/// which reproduces the 50-50 expansion (a1^† - a2^†)^l (a1^† + a2^†)^m literally.
class TwoModeUnitary {
 public:
  explicit TwoModeUnitary(const Eigen::Matrix2cd& u);

  const Eigen::Matrix2cd& matrix() const { return u_; }
  TwoModeUnitary adjoint() const { return TwoModeUnitary(u_.adjoint()); }

 private:
  Eigen::Matrix2cd u_;
};

/// B_{k,s} of the phase-state generation circuit, 1 <= k <= s-1.
TwoModeUnitary beam_splitter_pb(int k, int s);

/// Balanced splitter [[1, -1], [1, 1]] / sqrt(2).
TwoModeUnitary bs_5050();

/// Exact action of `u` on modes (i, j), expanded per photon-number block.
/// Components pushed above the cutoff are dropped and recorded as leakage.
FockVector apply_two_mode_unitary(const FockVector& state, int i, int j, const TwoModeUnitary& u);

/// Heisenberg-picture action on a vector of creation-operator coefficients:
/// returns w' with Σ_k w'_k a_k^† equal to the substituted Σ_k w_k a_k^†.
Eigen::VectorXcd propagate_creation(const Eigen::VectorXcd& w, int i, int j,
                                    const TwoModeUnitary& u);

/// Truncated two-mode squeezed vacuum sqrt(1-q^2) Σ_{n<terms} q^n |n,n>.
/// `terms` defaults to cutoff+1 and is capped there.
FockVector tmsv(double q, int cutoff, int terms = -1);

struct DisplacementScheme {
  enum class Kind { series, exact };
  Kind kind = Kind::exact;
  int order = 5;

  static DisplacementScheme series(int order) { return {Kind::series, order}; }
  static DisplacementScheme exact() { return {Kind::exact, 0}; }
};

/// Annihilation operator on the truncated space (cutoff+1 square).
Eigen::MatrixXcd annihilation(int cutoff);

/// D(α) restricted to the truncated space: either Σ_{n<=order} G^n/n! or
/// exp(G), with G = α a^† - α* a built from truncated ladder operators.
Eigen::MatrixXcd displacement_op(cplx alpha, int cutoff, DisplacementScheme scheme);

/// Weight that D(α) would push above the cutoff when applied to `state` on
/// `mode`, estimated with the exact displacement on an enlarged space.
double displacement_leakage(const FockVector& state, int mode, cplx alpha);

/// Multiply the photon-number-n amplitude of `mode` by exp(-i n theta).
FockVector phase_plate(const FockVector& state, int mode, double theta);

/// Click / no-click POVM of an inefficient detector:
/// E = η Σ_{k>=1} (1-η)^{k-1} |k><k|, truncated at the cutoff.
struct DetectorPovm {
  double eta;
  int cutoff;
  Eigen::MatrixXcd click;
  Eigen::MatrixXcd no_click;
  double tail_weight;  // Σ_{k>cutoff} η(1-η)^{k-1}, the truncated click weight
};

DetectorPovm detector_povm(double eta, int cutoff);

}  // namespace pbphase
