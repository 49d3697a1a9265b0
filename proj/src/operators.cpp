#include "pbphase/operators.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "pbphase/error.hpp"

namespace pbphase {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// sqrt(a! b! / (m! n!)) without overflow for the photon numbers used here.
double factorial_ratio_sqrt(int a, int b, int m, int n) {
  return std::exp(0.5 * (std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(m + 1.0) -
                         std::lgamma(n + 1.0)));
}

cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

TwoModeUnitary::TwoModeUnitary(const Eigen::Matrix2cd& u) : u_(u) {
  if (!u_.allFinite()) throw std::invalid_argument("non-finite two-mode matrix");
  if ((u_.adjoint() * u_ - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("two-mode matrix is not unitary");
}

TwoModeUnitary beam_splitter_pb(int k, int s) {
  if (k < 1 || k > s - 1)
    throw std::out_of_range("beam splitter index k=" + std::to_string(k) +
                            " outside [1, s-1] for s=" + std::to_string(s));
  const double n = s - k + 1;
  const double t = std::sqrt((s - k) / n);
  const double r = 1.0 / std::sqrt(n);
  Eigen::Matrix2cd u;
  u << t, -r, r, t;
  return TwoModeUnitary(u);
}

TwoModeUnitary bs_5050() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  u << h, -h, h, h;
  return TwoModeUnitary(u);
}

FockVector apply_two_mode_unitary(const FockVector& state, int i, int j,
                                  const TwoModeUnitary& u) {
  const int modes = state.modes();
  if (i == j || i < 0 || j < 0 || i >= modes || j >= modes)
    throw std::out_of_range("apply_two_mode_unitary: invalid mode pair");
  const int c = state.cutoff();
  const Eigen::Matrix2cd& U = u.matrix();

  // Transfer table: input (m, n) -> list of (a, b, coefficient).
  struct Term {
    int a, b;
    cplx coef;
  };
  std::vector<std::vector<Term>> table(static_cast<std::size_t>((c + 1) * (c + 1)));
  for (int m = 0; m <= c; ++m) {
    for (int n = 0; n <= c; ++n) {
      auto& terms = table[static_cast<std::size_t>(m * (c + 1) + n)];
      // (U00 x + U01 y)^m (U10 x + U11 y)^n, x = a_i^†, y = a_j^†
      std::vector<cplx> poly(static_cast<std::size_t>(m + n + 1));  // index: power of x
      for (int p = 0; p <= m; ++p) {
        const cplx left = binomial(m, p) * ipow(U(0, 0), p) * ipow(U(0, 1), m - p);
        for (int r = 0; r <= n; ++r) {
          const cplx right = binomial(n, r) * ipow(U(1, 0), r) * ipow(U(1, 1), n - r);
          poly[static_cast<std::size_t>(p + r)] += left * right;
        }
      }
      for (int a = 0; a <= m + n; ++a) {
        const int b = m + n - a;
        const cplx coef = poly[static_cast<std::size_t>(a)] * factorial_ratio_sqrt(a, b, m, n);
        if (coef != cplx{}) terms.push_back({a, b, coef});
      }
    }
  }

  const std::size_t si = state.stride(i), sj = state.stride(j);
  std::vector<cplx> out(state.size());
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    const cplx amp = state[idx];
    if (amp == cplx{}) continue;
    const int m = static_cast<int>((idx / si) % (c + 1));
    const int n = static_cast<int>((idx / sj) % (c + 1));
    const std::size_t base = idx - static_cast<std::size_t>(m) * si - static_cast<std::size_t>(n) * sj;
    for (const Term& t : table[static_cast<std::size_t>(m * (c + 1) + n)]) {
      if (t.a > c || t.b > c) continue;
      out[base + static_cast<std::size_t>(t.a) * si + static_cast<std::size_t>(t.b) * sj] +=
          amp * t.coef;
    }
  }
  FockVector tmp(state.config(), std::move(out));
  // The full map is unitary, so whatever norm is missing went above the cutoff.
  const double leak = std::max(0.0, state.squared_norm() - tmp.squared_norm());
  std::vector<cplx> amps(tmp.amplitudes().begin(), tmp.amplitudes().end());
  const Norm norm = (state.is_normalized() && leak < 1e-13) ? Norm::normalized : Norm::subnormalized;
  return FockVector(state.config(), std::move(amps), norm,
                    state.leakage() + (leak < 1e-15 ? 0.0 : leak));
}

Eigen::VectorXcd propagate_creation(const Eigen::VectorXcd& w, int i, int j,
                                    const TwoModeUnitary& u) {
  if (i == j || i < 0 || j < 0 || i >= w.size() || j >= w.size())
    throw std::out_of_range("propagate_creation: invalid mode pair");
  const Eigen::Matrix2cd& U = u.matrix();
  Eigen::VectorXcd out = w;
  out(i) = w(i) * U(0, 0) + w(j) * U(1, 0);
  out(j) = w(i) * U(0, 1) + w(j) * U(1, 1);
  return out;
}

FockVector tmsv(double q, int cutoff, int terms) {
  if (!(q >= 0.0) || !(q < 1.0)) throw std::invalid_argument("tmsv requires 0 <= q < 1");
  if (terms < 0 || terms > cutoff + 1) terms = cutoff + 1;
  FockVector v = FockVector::zero({cutoff, 2});
  std::vector<cplx> a(v.size());
  const double pre = std::sqrt(1.0 - q * q);
  double qn = 1.0;
  for (int n = 0; n < terms; ++n) {
    const int occ[2] = {n, n};
    a[v.flat_index(occ)] = pre * qn;
    qn *= q;
  }
  // Norm lost to truncation: q^(2 terms).
  return FockVector({cutoff, 2}, std::move(a), Norm::subnormalized, std::pow(q, 2.0 * terms));
}

Eigen::MatrixXcd annihilation(int cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd displacement_op(cplx alpha, int cutoff, DisplacementScheme scheme) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  const Eigen::MatrixXcd a = annihilation(cutoff);
  const Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
  const auto d = static_cast<Eigen::Index>(cutoff + 1);
  if (scheme.kind == DisplacementScheme::Kind::exact) return gen.exp();

  if (scheme.order < 1) throw std::invalid_argument("series order must be >= 1");
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d);
  for (int n = 1; n <= scheme.order; ++n) {
    term = (term * gen / static_cast<double>(n)).eval();
    sum += term;
  }
  return sum;
}

double displacement_leakage(const FockVector& state, int mode, cplx alpha) {
  const int c = state.cutoff();
  const int big = c + 12;
  const Eigen::MatrixXcd full = displacement_op(alpha, big, DisplacementScheme::exact());
  const Eigen::MatrixXcd cols = full.leftCols(c + 1);
  // apply_single_mode reports the weight of rows beyond the cutoff as leakage
  const FockVector fresh(state.config(),
                         std::vector<cplx>(state.amplitudes().begin(), state.amplitudes().end()));
  return apply_single_mode(fresh, mode, cols).leakage();
}

FockVector phase_plate(const FockVector& state, int mode, double theta) {
  if (mode < 0 || mode >= state.modes()) throw std::out_of_range("mode out of range");
  const int c = state.cutoff();
  std::vector<cplx> phase(static_cast<std::size_t>(c) + 1);
  for (int n = 0; n <= c; ++n) phase[static_cast<std::size_t>(n)] = std::polar(1.0, -n * theta);
  const std::size_t st = state.stride(mode);
  std::vector<cplx> out(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t idx = 0; idx < out.size(); ++idx)
    out[idx] *= phase[(idx / st) % static_cast<std::size_t>(c + 1)];
  if (state.is_normalized()) {
    // unit-modulus factors; re-validate against round-off
    double n2 = 0.0;
    for (const cplx& x : out) n2 += std::norm(x);
    return FockVector(state.config(), std::move(out),
                      std::abs(n2 - 1.0) <= 1e-12 ? Norm::normalized : Norm::subnormalized,
                      state.leakage());
  }
  return FockVector(state.config(), std::move(out), Norm::subnormalized, state.leakage());
}

DetectorPovm detector_povm(double eta, int cutoff) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("detector efficiency outside [0,1]");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  const auto d = static_cast<Eigen::Index>(cutoff + 1);
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 1; k <= cutoff; ++k) e(k, k) = eta * std::pow(1.0 - eta, k - 1);
  const Eigen::MatrixXcd i = Eigen::MatrixXcd::Identity(d, d);
  return {eta, cutoff, e, i - e, std::pow(1.0 - eta, cutoff) * (eta > 0.0 ? 1.0 : 0.0)};
}

}  // namespace pbphase
