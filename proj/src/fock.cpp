#include "pbphase/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pbphase/error.hpp"

namespace pbphase {

std::size_t TruncationConfig::size() const {
  std::size_t n = 1;
  for (int k = 0; k < modes; ++k) n *= local_dim();
  return n;
}

namespace {

void check_config(const TruncationConfig& c) {
  if (c.cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  if (c.modes < 1) throw std::invalid_argument("mode count must be >= 1");
}

void require_same(const TruncationConfig& a, const TruncationConfig& b, const char* what) {
  if (!(a == b)) throw ConfigMismatch(std::string(what) + ": truncation configs differ");
}

}  // namespace

FockVector::FockVector(TruncationConfig config, std::vector<cplx> amplitudes, Norm norm,
                       double leakage)
    : config_(config), amps_(std::move(amplitudes)), norm_(norm), leakage_(leakage) {
  check_config(config_);
  if (amps_.size() != config_.size())
    throw std::invalid_argument("amplitude count does not match truncation config");
  for (const cplx& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("non-finite amplitude");
  }
  if (norm_ == Norm::normalized && std::abs(squared_norm() - 1.0) > 1e-12)
    throw std::invalid_argument("state flagged normalized has squared norm " +
                                std::to_string(squared_norm()));
}

FockVector FockVector::zero(TruncationConfig config) {
  check_config(config);
  return FockVector(config, std::vector<cplx>(config.size()));
}

FockVector FockVector::basis(TruncationConfig config, std::span<const int> occupation) {
  FockVector v = zero(config);
  v.amps_[v.flat_index(occupation)] = 1.0;
  v.norm_ = Norm::normalized;
  return v;
}

FockVector FockVector::single_mode(std::span<const cplx> amplitudes, int cutoff, Norm norm) {
  if (static_cast<int>(amplitudes.size()) > cutoff + 1)
    throw std::invalid_argument("more amplitudes than the cutoff admits");
  std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1);
  std::copy(amplitudes.begin(), amplitudes.end(), a.begin());
  return FockVector({cutoff, 1}, std::move(a), norm);
}

std::size_t FockVector::stride(int mode) const {
  std::size_t s = 1;
  for (int k = config_.modes - 1; k > mode; --k) s *= config_.local_dim();
  return s;
}

std::size_t FockVector::flat_index(std::span<const int> occupation) const {
  if (static_cast<int>(occupation.size()) != config_.modes)
    throw std::invalid_argument("occupation length does not match mode count");
  std::size_t idx = 0;
  for (int n : occupation) {
    if (n < 0 || n > config_.cutoff) throw std::out_of_range("photon number outside cutoff");
    idx = idx * config_.local_dim() + static_cast<std::size_t>(n);
  }
  return idx;
}

std::vector<int> FockVector::occupation(std::size_t flat) const {
  std::vector<int> occ(static_cast<std::size_t>(config_.modes));
  for (int k = config_.modes - 1; k >= 0; --k) {
    occ[static_cast<std::size_t>(k)] = static_cast<int>(flat % config_.local_dim());
    flat /= config_.local_dim();
  }
  return occ;
}

cplx FockVector::at(std::span<const int> occupation) const {
  return amps_[flat_index(occupation)];
}

double FockVector::squared_norm() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return s;
}

FockVector FockVector::normalized() const {
  const double n2 = squared_norm();
  if (n2 <= 0.0) throw NumericalError("cannot normalize a zero vector");
  const double inv = 1.0 / std::sqrt(n2);
  std::vector<cplx> a = amps_;
  for (cplx& x : a) x *= inv;
  return FockVector(config_, std::move(a), Norm::normalized, leakage_);
}

FockVector FockVector::with_cutoff(int cutoff) const {
  if (config_.modes != 1) throw std::invalid_argument("with_cutoff expects a single-mode state");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= config_.cutoff; ++n) {
    if (n <= cutoff) {
      a[static_cast<std::size_t>(n)] = amps_[static_cast<std::size_t>(n)];
    } else if (amps_[static_cast<std::size_t>(n)] != cplx{}) {
      throw ConfigMismatch("cutoff " + std::to_string(cutoff) +
                           " cannot hold the state's photon content");
    }
  }
  return FockVector({cutoff, 1}, std::move(a), norm_, leakage_);
}

int FockVector::max_photon_number(double tol) const {
  int best = 0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (std::abs(amps_[i]) <= tol) continue;
    for (int n : occupation(i)) best = std::max(best, n);
  }
  return best;
}

FockDensity::FockDensity(Eigen::MatrixXcd matrix)
    : FockDensity(std::move(matrix), 1.0) {}

FockDensity::FockDensity(Eigen::MatrixXcd matrix, double declared_trace)
    : matrix_(std::move(matrix)), declared_trace_(declared_trace) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
    throw std::invalid_argument("density matrix must be square and non-empty");
  if (!matrix_.allFinite()) throw std::invalid_argument("non-finite density matrix entry");
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(trace() - declared_trace_) > 1e-10 * std::max(1.0, std::abs(declared_trace_)))
    throw std::invalid_argument("density matrix trace differs from its declared trace");
}

FockDensity FockDensity::pure(const FockVector& psi) {
  if (psi.modes() != 1) throw std::invalid_argument("pure density expects a single-mode state");
  const auto amps = psi.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
  Eigen::MatrixXcd m = v * v.adjoint();
  return FockDensity(m, psi.squared_norm());
}

double FockDensity::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

FockDensity FockDensity::normalized() const {
  const double t = trace();
  if (t <= 0.0) throw NumericalError("cannot normalize a zero-trace density");
  return FockDensity(matrix_ / t, 1.0);
}

FockVector tensor_product(const FockVector& a, const FockVector& b) {
  if (a.cutoff() != b.cutoff()) throw ConfigMismatch("tensor_product: cutoffs differ");
  const TruncationConfig joint{a.cutoff(), a.modes() + b.modes()};
  std::vector<cplx> out(joint.size());
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == cplx{}) continue;
    for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = a[i] * b[j];
  }
  const Norm norm =
      a.is_normalized() && b.is_normalized() ? Norm::normalized : Norm::subnormalized;
  return FockVector(joint, std::move(out), norm, a.leakage() + b.leakage());
}

cplx inner_product(const FockVector& a, const FockVector& b) {
  require_same(a.config(), b.config(), "inner_product");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity_pure(const FockDensity& rho, const FockVector& psi) {
  if (psi.modes() != 1) throw std::invalid_argument("fidelity_pure expects a single-mode state");
  if (psi.cutoff() != rho.cutoff()) throw ConfigMismatch("fidelity_pure: cutoffs differ");
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw NumericalError("fidelity_pure: zero-trace density");
  const auto amps = psi.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
  const cplx f = v.dot(rho.matrix() * v);  // dot conjugates the left operand
  return std::clamp(f.real() / tr, 0.0, 1.0);
}

FockVector project_pattern(const FockVector& state, const std::map<int, int>& detected) {
  const int modes = state.modes();
  for (const auto& [mode, count] : detected) {
    if (mode < 0 || mode >= modes) throw std::out_of_range("detected mode out of range");
    if (count < 0 || count > state.cutoff())
      throw std::out_of_range("detected photon count outside cutoff");
  }
  const int remaining = modes - static_cast<int>(detected.size());
  if (remaining < 1) throw std::invalid_argument("project_pattern leaves no modes");

  const TruncationConfig out_cfg{state.cutoff(), remaining};
  std::vector<cplx> out(out_cfg.size());
  const std::size_t d = state.config().local_dim();
  for (std::size_t o = 0; o < out.size(); ++o) {
    // Decode o over remaining modes, merging in the detected counts.
    std::size_t rest = o;
    std::vector<int> occ(static_cast<std::size_t>(modes));
    for (int k = modes - 1; k >= 0; --k) {
      auto it = detected.find(k);
      if (it != detected.end()) {
        occ[static_cast<std::size_t>(k)] = it->second;
      } else {
        occ[static_cast<std::size_t>(k)] = static_cast<int>(rest % d);
        rest /= d;
      }
    }
    out[o] = state.at(occ);
  }
  return FockVector(out_cfg, std::move(out), Norm::subnormalized, state.leakage());
}

FockVector apply_single_mode(const FockVector& state, int mode, const Eigen::MatrixXcd& op) {
  if (mode < 0 || mode >= state.modes()) throw std::out_of_range("mode out of range");
  const auto d = static_cast<Eigen::Index>(state.config().local_dim());
  if (op.cols() != d || op.rows() < d)
    throw ConfigMismatch("single-mode operator shape does not match the cutoff");

  const std::size_t stride = state.stride(mode);
  const std::size_t block = stride * static_cast<std::size_t>(d);
  const std::size_t outer = state.size() / block;
  std::vector<cplx> out(state.size());
  double leak = 0.0;
  Eigen::VectorXcd in(d);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < stride; ++i) {
      const std::size_t base = o * block + i;
      for (Eigen::Index n = 0; n < d; ++n) in(n) = state[base + static_cast<std::size_t>(n) * stride];
      const Eigen::VectorXcd r = op * in;
      for (Eigen::Index n = 0; n < d; ++n) out[base + static_cast<std::size_t>(n) * stride] = r(n);
      for (Eigen::Index n = d; n < r.size(); ++n) leak += std::norm(r(n));
    }
  }
  return FockVector(state.config(), std::move(out), Norm::subnormalized, state.leakage() + leak);
}

ConditionalState conditional_density(const FockVector& state,
                                     std::span<const Eigen::MatrixXcd> povm_per_mode,
                                     int kept_mode) {
  const int modes = state.modes();
  if (kept_mode < 0 || kept_mode >= modes) throw std::out_of_range("kept mode out of range");
  if (static_cast<int>(povm_per_mode.size()) != modes - 1)
    throw std::invalid_argument("need one POVM element per measured mode");

  FockVector filtered = state;
  int p = 0;
  for (int k = 0; k < modes; ++k) {
    if (k == kept_mode) continue;
    filtered = apply_single_mode(filtered, k, povm_per_mode[static_cast<std::size_t>(p++)]);
  }

  // ρ(a,b) = Σ_rest Φ(rest, a) conj(Ψ(rest, b))
  const auto d = static_cast<Eigen::Index>(state.config().local_dim());
  const std::size_t stride = state.stride(kept_mode);
  const std::size_t block = stride * static_cast<std::size_t>(d);
  const std::size_t outer = state.size() / block;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < stride; ++i) {
      const std::size_t base = o * block + i;
      for (Eigen::Index a = 0; a < d; ++a) {
        const cplx phi = filtered[base + static_cast<std::size_t>(a) * stride];
        if (phi == cplx{}) continue;
        for (Eigen::Index b = 0; b < d; ++b)
          rho(a, b) += phi * std::conj(state[base + static_cast<std::size_t>(b) * stride]);
      }
    }
  }
  // Round-off can leave a tiny anti-Hermitian part when the POVM elements
  // are Hermitian; symmetrize before validation.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double prob = rho.trace().real();
  if (!(prob > kProbabilityFloor))
    throw DegenerateHerald("heralding probability is below the floor (P = " +
                           std::to_string(prob) + ")");
  return {FockDensity(rho / prob, 1.0), prob};
}

}  // namespace pbphase
