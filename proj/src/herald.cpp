#include "pbphase/herald.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pbphase/error.hpp"
#include "pbphase/parallel.hpp"
#include "pbphase/pb_states.hpp"
#include "pbphase/polynomial.hpp"

namespace pbphase {

double HeraldConfig::q() const { return std::tanh(r); }

void HeraldConfig::validate() const {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("squeezing r must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (cutoff < s)
    throw std::invalid_argument("cutoff " + std::to_string(cutoff) + " is below s=" +
                                std::to_string(s));
  if (tmsv_terms < 1) throw std::invalid_argument("tmsv_terms must be >= 1");
  if (m < 0 || m > s) throw std::invalid_argument("m must lie in [0, s]");
  if (displacement.kind == DisplacementScheme::Kind::series && displacement.order < 1)
    throw std::invalid_argument("displacement series order must be >= 1");
}

Eigen::VectorXcd splitter_weights(int s) {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(s);
  w(s - 1) = 1.0;
  for (int k = 1; k <= s - 1; ++k) w = propagate_creation(w, k - 1, s - 1, beam_splitter_pb(k, s));
  return w;
}

std::vector<double> symmetric_factors(int s) {
  const Eigen::VectorXcd w = splitter_weights(s);
  std::vector<double> f(static_cast<std::size_t>(s) + 1);
  for (int j = 0; j <= s; ++j) {
    // dp[k][deg]: photons placed so far, power of t. Per-mode factors of
    // <1|(1 + t a^† - t a)|n> w^n/sqrt(n!): n=0 -> t, n=1 -> w, n=2 -> -w² t.
    std::vector<std::vector<cplx>> dp(static_cast<std::size_t>(j) + 1,
                                      std::vector<cplx>(static_cast<std::size_t>(s) + 1));
    dp[0][0] = 1.0;
    for (int i = 0; i < s; ++i) {
      auto next = std::vector<std::vector<cplx>>(dp.size(), std::vector<cplx>(dp[0].size()));
      for (int k = 0; k <= j; ++k) {
        for (int deg = 0; deg <= s; ++deg) {
          const cplx v = dp[static_cast<std::size_t>(k)][static_cast<std::size_t>(deg)];
          if (v == cplx{}) continue;
          if (deg + 1 <= s) next[static_cast<std::size_t>(k)][static_cast<std::size_t>(deg + 1)] += v;
          if (k + 1 <= j) next[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(deg)] += v * w(i);
          if (k + 2 <= j && deg + 1 <= s)
            next[static_cast<std::size_t>(k + 2)][static_cast<std::size_t>(deg + 1)] -= v * w(i) * w(i);
        }
      }
      dp = std::move(next);
    }
    const cplx coeff = std::sqrt(std::tgamma(j + 1.0)) *
                       dp[static_cast<std::size_t>(j)][static_cast<std::size_t>(s - j)];
    double binom = 1.0;
    for (int i = 1; i <= s - j; ++i) binom = binom * (j + i) / i;
    if (std::abs(coeff.imag()) > 1e-12 * std::max(1.0, std::abs(coeff)))
      throw NumericalError("symmetric factor probe returned a complex coefficient");
    f[static_cast<std::size_t>(j)] = coeff.real() / binom;
  }
  return f;
}

std::vector<cplx> first_order_amplitudes(int s, std::span<const cplx> alphas) {
  if (static_cast<int>(alphas.size()) != s) throw std::invalid_argument("need s displacements");
  const Eigen::VectorXcd w = splitter_weights(s);
  std::vector<cplx> dp(static_cast<std::size_t>(s) + 1);
  dp[0] = 1.0;
  for (int i = 0; i < s; ++i) {
    for (int k = i + 1; k >= 0; --k) {
      const auto ku = static_cast<std::size_t>(k);
      if (ku > static_cast<std::size_t>(s)) continue;
      dp[ku] = dp[ku] * alphas[static_cast<std::size_t>(i)] + (k > 0 ? dp[ku - 1] * w(i) : cplx{});
    }
  }
  for (int j = 0; j <= s; ++j) dp[static_cast<std::size_t>(j)] *= std::sqrt(std::tgamma(j + 1.0));
  return dp;
}

std::vector<cplx> alpha_polynomial(int s, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("alpha_polynomial requires 0 <= q < 1");
  const std::vector<double> f = symmetric_factors(s);
  std::vector<cplx> poly(static_cast<std::size_t>(s) + 1);
  poly[0] = 1.0;
  double qk = 1.0;
  for (int k = 1; k <= s; ++k) {
    qk *= q;
    const double ek = f[static_cast<std::size_t>(s)] / f[static_cast<std::size_t>(s - k)] * qk;
    poly[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * ek;
  }
  return poly;
}

std::vector<cplx> solve_alphas(std::span<const cplx> poly) {
  if (poly.size() < 2) throw std::invalid_argument("polynomial degree must be >= 1");
  if (std::abs(poly[0] - 1.0) > 1e-15) throw std::invalid_argument("polynomial must be monic");
  bool all_zero = true;
  for (std::size_t i = 1; i < poly.size(); ++i) all_zero = all_zero && poly[i] == cplx{};
  if (all_zero) return std::vector<cplx>(poly.size() - 1);  // x^s
  std::vector<cplx> roots = companion_roots(poly);
  if (root_residual(poly, roots) > 1e-10) {
    // clustered roots can stall the Newton polish
    roots = aberth_roots(poly);
    if (root_residual(poly, roots) > 1e-10) throw NumericalError("root finder did not converge");
  }
  return roots;
}

CircuitState build_state(const HeraldConfig& cfg) {
  cfg.validate();
  const int s = cfg.s;
  const double q = cfg.q();
  const TruncationConfig tc{cfg.cutoff, s + 1};

  std::vector<cplx> amps(tc.size());
  FockVector shape = FockVector::zero(tc);
  const int terms = std::min(cfg.tmsv_terms, cfg.cutoff + 1);
  const double pre = std::sqrt(1.0 - q * q);
  double qn = 1.0;
  std::vector<int> occ(static_cast<std::size_t>(s) + 1, 0);
  for (int n = 0; n < terms; ++n) {
    occ[static_cast<std::size_t>(s - 1)] = n;
    occ[static_cast<std::size_t>(s)] = n;
    amps[shape.flat_index(occ)] = pre * qn;
    qn *= q;
  }
  FockVector psi(tc, std::move(amps), Norm::subnormalized, std::pow(q, 2.0 * terms));

  for (int k = 1; k <= s - 1; ++k) psi = apply_two_mode_unitary(psi, k - 1, s - 1, beam_splitter_pb(k, s));

  const std::vector<cplx> poly = alpha_polynomial(s, q);
  std::vector<cplx> alphas = solve_alphas(poly);

  double disp_leak = 0.0;
  for (int j = 0; j < s; ++j) {
    const cplx a = alphas[static_cast<std::size_t>(j)];
    disp_leak += displacement_leakage(psi, j, a);
    psi = apply_single_mode(psi, j, displacement_op(a, cfg.cutoff, cfg.displacement));
  }

  CircuitState out{psi, alphas, psi.leakage() + disp_leak, {}};
  if (out.leakage > cfg.leakage_bound)
    out.warnings.push_back("truncation leakage " + std::to_string(out.leakage) +
                           " exceeds bound " + std::to_string(cfg.leakage_bound));
  return out;
}

namespace {

std::vector<Eigen::MatrixXcd> click_povms(const HeraldConfig& cfg) {
  const DetectorPovm det = detector_povm(cfg.eta, cfg.cutoff);
  return std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(cfg.s), det.click);
}

// ⟨Ψ|(⊗E ⊗ I)|Ψ⟩ without the degenerate-herald floor.
double raw_click_probability(const FockVector& psi, std::span<const Eigen::MatrixXcd> povms) {
  FockVector filtered = psi;
  for (std::size_t k = 0; k < povms.size(); ++k)
    filtered = apply_single_mode(filtered, static_cast<int>(k), povms[k]);
  const FockVector bare(psi.config(), std::vector<cplx>(psi.amplitudes().begin(), psi.amplitudes().end()));
  const FockVector fil(psi.config(),
                       std::vector<cplx>(filtered.amplitudes().begin(), filtered.amplitudes().end()));
  return std::max(0.0, inner_product(bare, fil).real());
}

FockVector with_phase_plate(const HeraldConfig& cfg, const FockVector& psi) {
  if (cfg.m == 0) return psi;
  return phase_plate(psi, cfg.s, -PbParams{cfg.s, cfg.m, 0.0}.phase());
}

}  // namespace

double click_probability(const HeraldConfig& cfg) {
  const CircuitState st = build_state(cfg);
  const auto povms = click_povms(cfg);
  return std::min(1.0, raw_click_probability(st.psi, povms));
}

HeraldResult evaluate_herald(const HeraldConfig& cfg, bool with_negativity) {
  const CircuitState st = build_state(cfg);
  const auto povms = click_povms(cfg);
  const FockVector psi = with_phase_plate(cfg, st.psi);
  ConditionalState cond = conditional_density(psi, povms, cfg.s);
  const FockVector target = pb_eigenstate({cfg.s, cfg.m, 0.0}, cfg.cutoff);
  const double F = fidelity_pure(cond.rho, target);
  const double V = with_negativity ? negativity_volume(cond.rho, cfg.quadrature) : 0.0;
  return {st.alphas, std::min(1.0, cond.probability), F, cond.rho, V, st.leakage, st.warnings};
}

double herald_fidelity(const HeraldConfig& cfg) { return evaluate_herald(cfg, false).F; }

ConditionalNegativity conditional_negativity(const HeraldConfig& cfg) {
  HeraldResult r = evaluate_herald(cfg, true);
  return {r.rho_A, r.V};
}

std::vector<SweepRow> herald_sweep(const HeraldConfig& base, std::span<const int> s_values,
                                   std::span<const double> r_values,
                                   std::span<const double> eta_values, bool with_negativity) {
  std::vector<SweepRow> rows;
  for (int s : s_values)
    for (double eta : eta_values)
      for (double r : r_values) {
        SweepRow row;
        row.s = s;
        row.r = r;
        row.eta = eta;
        rows.push_back(std::move(row));
      }

  detail::parallel_for(rows.size(), [&](std::size_t i) {
    SweepRow& row = rows[i];
    HeraldConfig cfg = base;
    cfg.s = row.s;
    cfg.r = row.r;
    cfg.eta = row.eta;
    try {
      if (cfg.q() == 0.0) {
        row.P = click_probability(cfg);
        row.alphas.assign(static_cast<std::size_t>(cfg.s), 0.0);
        row.error = "degenerate herald: P = 0 at r = 0";
        return;
      }
      const HeraldResult res = evaluate_herald(cfg, with_negativity);
      row.P = res.P;
      row.F = res.F;
      row.V = res.V;
      row.leakage = res.leakage;
      row.alphas = res.alphas;
      row.rho_A = res.rho_A;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive data");
    const double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

}  // namespace pbphase
