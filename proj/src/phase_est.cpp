#include "pbphase/phase_est.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "pbphase/error.hpp"
#include "pbphase/operators.hpp"
#include "pbphase/pb_states.hpp"

namespace pbphase {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

bool same_angle(double a, double b, double tol = 1e-12) {
  const double d = wrap_angle(a - b);
  return d < tol || kTwoPi - d < tol;
}

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

double OutcomeDistribution::operator()(int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 > max_photons() || n2 > max_photons()) return 0.0;
  return probs(n1, n2);
}

std::int64_t CountTable::operator()(int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 >= counts.rows() || n2 >= counts.cols()) return 0;
  return counts(n1, n2);
}

SuperpositionCoeffs SuperpositionCoeffs::make(std::vector<cplx> c) {
  if (c.size() < 2) throw std::invalid_argument("need at least two coefficients");
  double n2 = 0.0;
  for (const cplx& x : c) n2 += std::norm(x);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::invalid_argument("coefficients must be nonzero");
  const double inv = 1.0 / std::sqrt(n2);
  std::size_t ref = 0;
  while (ref + 1 < c.size() && std::abs(c[ref]) * inv < 1e-14) ++ref;
  const cplx gauge = std::polar(inv, -std::arg(c[ref]));
  for (cplx& x : c) x *= gauge;
  c[ref] = std::abs(c[ref]);
  return {static_cast<int>(c.size()) - 1, std::move(c)};
}

SuperpositionCoeffs SuperpositionCoeffs::qubit(double r, double theta) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("r must lie in [0, 1]");
  return make({r, std::polar(std::sqrt(1.0 - r * r), theta)});
}

ObservedFrequencies ObservedFrequencies::from(const CountTable& t) {
  if (t.trials <= 0) throw std::invalid_argument("count table has no trials");
  return {t.counts.cast<double>() / static_cast<double>(t.trials), static_cast<double>(t.trials)};
}

ObservedFrequencies ObservedFrequencies::exact(const OutcomeDistribution& d) {
  return {d.probs, std::numeric_limits<double>::infinity()};
}

double ObservedFrequencies::operator()(int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 >= freq.rows() || n2 >= freq.cols()) return 0.0;
  return freq(n1, n2);
}

FockVector interference_amplitudes(const FockVector& left, const FockVector& right) {
  if (left.modes() != 1 || right.modes() != 1)
    throw std::invalid_argument("interference inputs must be single-mode");
  // Room for every photon of both inputs in one output port.
  const int cutoff = left.cutoff() + right.cutoff();
  const FockVector joint = tensor_product(left.with_cutoff(cutoff), right.with_cutoff(cutoff));
  FockVector out = apply_two_mode_unitary(joint, 0, 1, bs_5050());
  if (out.leakage() > 1e-12) throw ConfigMismatch("cutoff too small for the interfering photons");
  return out;
}

OutcomeDistribution interference_probs(const FockVector& left, const FockVector& right) {
  const FockVector out = interference_amplitudes(left, right);
  const int d = out.cutoff() + 1;
  OutcomeDistribution dist{std::max(left.cutoff(), right.cutoff()), Eigen::MatrixXd(d, d)};
  double total = 0.0;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const int occ[2] = {a, b};
      double p = std::norm(out.at(occ));
      if (p < 0.0 && p >= -1e-14) p = 0.0;
      dist.probs(a, b) = p;
      total += p;
    }
  }
  const double expected = left.squared_norm() * right.squared_norm();
  if (std::abs(total - expected) > 1e-10)
    throw NumericalError("interference distribution lost probability mass");
  return dist;
}

std::vector<double> reference_phases(int s) {
  std::vector<double> phases(static_cast<std::size_t>(s) + 1);
  for (int j = 0; j <= s; ++j) phases[static_cast<std::size_t>(j)] = PbParams{s, j, 0.0}.phase();
  return phases;
}

FockVector superposition_state(const SuperpositionCoeffs& coeffs) {
  const int s = coeffs.s;
  std::vector<cplx> amps(static_cast<std::size_t>(s) + 1);
  for (int k = 0; k <= s; ++k) {
    const FockVector basis = pb_eigenstate({s, k, 0.0});
    for (int n = 0; n <= s; ++n)
      amps[static_cast<std::size_t>(n)] += coeffs.c[static_cast<std::size_t>(k)] * basis[static_cast<std::size_t>(n)];
  }
  return FockVector::single_mode(amps, s).normalized();
}

OutcomeDistribution superposition_probs(double phi_j, const SuperpositionCoeffs& coeffs) {
  return interference_probs(phase_state(coeffs.s, phi_j), superposition_state(coeffs));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t x = base ^ (0xD1B54A32D192ED03ULL * (index + 1));
  return splitmix64(x);
}

CountTable sample_outcomes(const OutcomeDistribution& dist, std::int64_t trials,
                           std::uint64_t seed, double phi_j) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const auto rows = dist.probs.rows(), cols = dist.probs.cols();
  std::vector<double> cdf(static_cast<std::size_t>(rows * cols));
  double acc = 0.0;
  for (Eigen::Index a = 0; a < rows; ++a)
    for (Eigen::Index b = 0; b < cols; ++b) cdf[static_cast<std::size_t>(a * cols + b)] = (acc += dist.probs(a, b));
  if (!(acc > 0.0)) throw std::invalid_argument("distribution has no mass");

  std::uint64_t state = seed;
  std::mt19937_64 gen(splitmix64(state));
  CountTable t{decltype(CountTable::counts)::Zero(rows, cols), trials, seed, phi_j, dist.s};
  for (std::int64_t i = 0; i < trials; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // skip zero-probability cells sitting at the boundary
    if (it == cdf.end()) it = std::prev(cdf.end());
    const auto flat = static_cast<Eigen::Index>(it - cdf.begin());
    ++t.counts(flat / cols, flat % cols);
  }
  return t;
}

PhaseEstimate estimate_phase(const ObservedFrequencies& obs, double phi_j, int s) {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  const double f10 = obs(1, 0), f01 = obs(0, 1);
  const double single = f10 + f01;
  if (!(single > 0.0) || (std::isfinite(obs.trials) && single * obs.trials < 1.0))
    throw LowInformation("no counts in the single-photon cells (1,0)/(0,1); increase trials");
  const double contrast = std::clamp((f10 - f01) / single, -1.0, 1.0);
  const double delta = std::acos(contrast);
  PhaseEstimate e;
  e.candidates = {wrap_angle(phi_j - delta), wrap_angle(phi_j + delta)};
  e.phi_k = e.candidates[0];
  e.resolved = same_angle(e.candidates[0], e.candidates[1], 1e-12);
  e.std_error = std::isfinite(obs.trials) ? 1.0 / std::sqrt(single * obs.trials) : 0.0;
  return e;
}

PhaseEstimate estimate_phase(const ObservedFrequencies& a, double phi_a,
                             const ObservedFrequencies& b, double phi_b, int s) {
  const double sep = std::sin(phi_b - phi_a);
  if (std::abs(sep) < 1e-6)
    throw std::invalid_argument("the two reference phases must not differ by a multiple of pi");
  auto contrast = [](const ObservedFrequencies& o, double& n) {
    const double single = o(1, 0) + o(0, 1);
    if (!(single > 0.0) || (std::isfinite(o.trials) && single * o.trials < 1.0))
      throw LowInformation("no counts in the single-photon cells (1,0)/(0,1); increase trials");
    n = std::isfinite(o.trials) ? single * o.trials : std::numeric_limits<double>::infinity();
    return std::clamp((o(1, 0) - o(0, 1)) / single, -1.0, 1.0);
  };
  double na = 0.0, nb = 0.0;
  const double ca = contrast(a, na), cb = contrast(b, nb);
  (void)s;
  // cos(φ_a - φ_k) = ca, cos(φ_b - φ_k) = cb, linear in (cos φ_k, sin φ_k).
  Eigen::Matrix2d m;
  m << std::cos(phi_a), std::sin(phi_a), std::cos(phi_b), std::sin(phi_b);
  const Eigen::Matrix2d inv = m.inverse();
  const Eigen::Vector2d xy = inv * Eigen::Vector2d(ca, cb);
  const double r2 = xy.squaredNorm();
  if (!(r2 > 0.0)) throw LowInformation("contrasts are inconsistent with any phase");
  PhaseEstimate e;
  e.phi_k = wrap_angle(std::atan2(xy(1), xy(0)));
  e.candidates = {e.phi_k};
  e.resolved = true;
  if (std::isfinite(na) && std::isfinite(nb)) {
    // dφ = (x dy - y dx)/r², with d(x,y) = inv d(ca, cb)
    const Eigen::RowVector2d grad =
        (xy(0) * inv.row(1) - xy(1) * inv.row(0)) / r2;
    const double va = (1.0 - ca * ca) / na, vb = (1.0 - cb * cb) / nb;
    e.std_error = std::sqrt(grad(0) * grad(0) * va + grad(1) * grad(1) * vb);
  }
  return e;
}

bool parameter_count_ok(int s) {
  const long long n = s + 1;
  return (n * n - 1) * n >= 2LL * s;
}

namespace {

// Amplitude rows A_{setting, outcome} acting on the coefficient vector.
struct Model {
  int s;
  std::vector<Eigen::MatrixXcd> amps;  // per setting: outcomes x (s+1)
  std::vector<Eigen::VectorXd> target;  // per setting: observed frequencies
};

Model build_model(std::span<const CoefficientSetting> settings, int s) {
  Model m{s, {}, {}};
  const int d = 2 * s + 1;
  for (const CoefficientSetting& st : settings) {
    if (st.data.freq.rows() < d || st.data.freq.cols() < d)
      throw std::invalid_argument("count table is smaller than the 2s-photon outcome range");
    Eigen::MatrixXcd a(d * d, s + 1);
    const FockVector ref = phase_state(s, st.phi_j);
    for (int k = 0; k <= s; ++k) {
      const FockVector out = interference_amplitudes(ref, pb_eigenstate({s, k, 0.0}));
      for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2) {
          const int occ[2] = {n1, n2};
          a(n1 * d + n2, k) = out.at(occ);
        }
    }
    Eigen::VectorXd y(d * d);
    for (int n1 = 0; n1 < d; ++n1)
      for (int n2 = 0; n2 < d; ++n2) y(n1 * d + n2) = st.data(n1, n2);
    m.amps.push_back(std::move(a));
    m.target.push_back(std::move(y));
  }
  return m;
}

double objective(const Model& m, const Eigen::VectorXcd& c, Eigen::VectorXcd* grad) {
  double f = 0.0;
  if (grad) grad->setZero(c.size());
  for (std::size_t j = 0; j < m.amps.size(); ++j) {
    const Eigen::VectorXcd ac = m.amps[j] * c;
    const Eigen::VectorXd resid = ac.cwiseAbs2() - m.target[j];
    f += resid.squaredNorm();
    // ∂f/∂c̄ = Σ 2 resid (a·c) conj(a); the real gradient is twice that.
    if (grad) *grad += 4.0 * m.amps[j].adjoint() * (resid.cast<cplx>().cwiseProduct(ac));
  }
  return f;
}

// Linear least squares for X = c c^† from P = Σ_kl a_k conj(a_l) X_kl.
Eigen::VectorXcd linear_inversion(const Model& m, bool& full_rank) {
  const int n = m.s + 1;
  const int params = n * n;
  long rows = 1;
  for (const auto& a : m.amps) rows += a.rows();
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(rows, params);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  long r = 0;
  for (std::size_t j = 0; j < m.amps.size(); ++j) {
    const Eigen::MatrixXcd& a = m.amps[j];
    for (Eigen::Index o = 0; o < a.rows(); ++o, ++r) {
      int col = 0;
      for (int k = 0; k < n; ++k) design(r, col++) = std::norm(a(o, k));
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          const cplx w = a(o, k) * std::conj(a(o, l));
          design(r, col++) = 2.0 * w.real();
          design(r, col++) = -2.0 * w.imag();
        }
      rhs(r) = m.target[j](o);
    }
  }
  for (int k = 0; k < n; ++k) design(r, k) = 1.0;  // trace X = 1
  rhs(r) = 1.0;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-9);
  full_rank = svd.rank() == params;
  const Eigen::VectorXd x = svd.solve(rhs);

  Eigen::MatrixXcd xm = Eigen::MatrixXcd::Zero(n, n);
  int col = 0;
  for (int k = 0; k < n; ++k) xm(k, k) = x(col++);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      xm(k, l) = cplx(x(col), x(col + 1));
      xm(l, k) = std::conj(xm(k, l));
      col += 2;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(xm);
  Eigen::VectorXcd c = es.eigenvectors().col(n - 1);
  return c / c.norm();
}

CoefficientEstimate closed_form_qubit(const ObservedFrequencies& at_zero) {
  CoefficientEstimate est;
  est.method = "closed-form s=1 inversion";
  const double p01 = at_zero(0, 1), p00 = at_zero(0, 0);
  // P(0,1;0) = (1 - r²)/2 and P(0,0;0) = (1 + 2 r sqrt(1-r²) cos θ)/4.
  const double r = std::sqrt(std::clamp(1.0 - 2.0 * p01, 0.0, 1.0));
  const double t = std::sqrt(std::max(0.0, 1.0 - r * r));
  double theta = 0.0;
  if (r * t < 1e-9) {
    est.identifiable = false;
    est.warnings.push_back("theta is unidentifiable when one coefficient vanishes");
  } else {
    theta = std::acos(std::clamp((4.0 * p00 - 1.0) / (2.0 * r * t), -1.0, 1.0));
    est.warnings.push_back(
        "theta and 2*pi - theta give identical statistics with real-amplitude references; "
        "returning theta in [0, pi]");
  }
  est.coeffs = SuperpositionCoeffs{1, {r, std::polar(t, theta)}};
  return est;
}

}  // namespace

CoefficientEstimate estimate_coefficients(std::span<const CoefficientSetting> settings, int s,
                                          const EstimatorOptions& opts) {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  if (!parameter_count_ok(s)) throw std::logic_error("parameter counting bound violated");
  if (settings.empty()) throw std::invalid_argument("no reference settings supplied");
  for (const CoefficientSetting& st : settings)
    if (std::isfinite(st.data.trials) && st.data.trials < 1.0)
      throw std::invalid_argument("every setting needs at least one trial");

  if (s == 1) {
    for (const CoefficientSetting& st : settings)
      if (same_angle(st.phi_j, 0.0)) return closed_form_qubit(st.data);
  }
  for (double phi : reference_phases(s)) {
    bool found = false;
    for (const CoefficientSetting& st : settings) found = found || same_angle(st.phi_j, phi, 1e-9);
    if (!found) throw std::invalid_argument("settings must cover every reference phase 2*pi*j/(s+1)");
  }

  const Model model = build_model(settings, s);
  CoefficientEstimate est;
  est.method = "projected gradient on the unit sphere";
  bool full_rank = true;
  Eigen::VectorXcd c = linear_inversion(model, full_rank);
  if (!full_rank) {
    est.identifiable = false;
    est.warnings.push_back("rank-deficient design: some relative phases are not identifiable");
  }

  Eigen::VectorXcd grad;
  double f = objective(model, c, &grad);
  Eigen::VectorXcd prev_c, prev_g;
  double step = 1.0;
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    // Riemannian gradient: drop the radial component.
    Eigen::VectorXcd g = grad - (c.dot(grad)).real() * c;
    const double gnorm2 = g.squaredNorm();
    if (gnorm2 < 1e-30 || f < 1e-30) {
      converged = true;
      break;
    }
    if (it > 0) {
      // Barzilai-Borwein step from the previous iterate
      const Eigen::VectorXcd dc = c - prev_c, dg = g - prev_g;
      const double denom = dc.dot(dg).real();
      if (denom > 0.0) step = dc.squaredNorm() / denom;
    }
    prev_c = c;
    prev_g = g;
    double f_new = f;
    Eigen::VectorXcd c_new, grad_new;
    for (int bt = 0; bt < 60; ++bt) {
      c_new = c - step * g;
      c_new /= c_new.norm();
      f_new = objective(model, c_new, &grad_new);
      if (f_new <= f - 1e-4 * step * gnorm2) break;
      step *= 0.5;
    }
    const double decrease = f - f_new;
    if (f_new < f) {
      c = c_new;
      grad = grad_new;
    }
    if (decrease >= 0.0 && decrease <= opts.tolerance * f + 1e-300) {
      f = std::min(f, f_new);
      converged = true;
      break;
    }
    f = std::min(f, f_new);
    if (decrease < 0.0 && step < 1e-20) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("coefficient optimizer did not converge");
  est.iterations = it;
  est.objective = f;
  est.coeffs = SuperpositionCoeffs::make(std::vector<cplx>(c.data(), c.data() + c.size()));
  return est;
}

}  // namespace pbphase
