#include "pbphase/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pbphase/error.hpp"
#include "pbphase/parallel.hpp"

namespace pbphase {

namespace {

constexpr double kPi = std::numbers::pi;

struct GaussRule {
  std::vector<double> x, w;
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
GaussRule gauss_legendre(int n) {
  GaussRule r{std::vector<double>(static_cast<std::size_t>(n)),
              std::vector<double>(static_cast<std::size_t>(n))};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[static_cast<std::size_t>(i)] = -z;
    r.x[static_cast<std::size_t>(n - 1 - i)] = z;
    r.w[static_cast<std::size_t>(i)] = w;
    r.w[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

}  // namespace

std::vector<double> hermite_wavefunctions(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("photon number must be >= 0");
  std::vector<double> psi(static_cast<std::size_t>(n_max) + 1);
  psi[0] = std::pow(2.0 / kPi, 0.25) * std::exp(-x * x);
  if (n_max >= 1) psi[1] = 2.0 * x * psi[0];
  for (int n = 2; n <= n_max; ++n) {
    psi[static_cast<std::size_t>(n)] =
        (2.0 * x * psi[static_cast<std::size_t>(n - 1)] -
         std::sqrt(n - 1.0) * psi[static_cast<std::size_t>(n - 2)]) /
        std::sqrt(static_cast<double>(n));
  }
  return psi;
}

double hermite_wavefunction(int n, double x) {
  return hermite_wavefunctions(n, x)[static_cast<std::size_t>(n)];
}

WignerKernel::WignerKernel(const FockDensity& rho) : cutoff_(rho.cutoff()), rho_(rho.matrix()) {
  const int d1 = cutoff_ + 1;
  norm_.assign(static_cast<std::size_t>(d1 * d1), 0.0);
  for (int d = 0; d <= cutoff_; ++d) {
    for (int n = 0; n + d <= cutoff_; ++n) {
      const double mag =
          std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + d + 1.0)));
      norm_[static_cast<std::size_t>(d * d1 + n)] = (n % 2 == 0 ? 1.0 : -1.0) * mag;
    }
  }
}

// K_{n+d,n}(q,p) = (2/π)(-1)^n sqrt(n!/(n+d)!) (2(q+ip))^d e^{-2r²} L_n^{(d)}(4r²)
// is the kernel of |n+d><n|; the kernel of |n><n+d| is its conjugate.
double WignerKernel::operator()(double q, double p) const {
  const int c = cutoff_;
  const int d1 = c + 1;
  const double r2 = q * q + p * p;
  const double u = 4.0 * r2;
  const double pre = (2.0 / kPi) * std::exp(-2.0 * r2);
  const cplx z(2.0 * q, 2.0 * p);
  cplx zd = 1.0;
  double total = 0.0;
  for (int d = 0; d <= c; ++d) {
    double l_prev = 0.0, l = 1.0;
    cplx acc = 0.0;
    for (int n = 0; n + d <= c; ++n) {
      if (n == 1) {
        l_prev = l;
        l = 1.0 + d - u;
      } else if (n > 1) {
        const double next = ((2.0 * (n - 1) + 1.0 + d - u) * l - (n - 1 + d) * l_prev) / n;
        l_prev = l;
        l = next;
      }
      acc += rho_(n + d, n) * (norm_[static_cast<std::size_t>(d * d1 + n)] * l);
    }
    total += d == 0 ? acc.real() : 2.0 * (acc * zd).real();
    zd *= z;
  }
  return pre * total;
}

double WignerKernel::imaginary_residue(double q, double p) const {
  const int c = cutoff_;
  const int d1 = c + 1;
  const double r2 = q * q + p * p;
  const double u = 4.0 * r2;
  const double pre = (2.0 / kPi) * std::exp(-2.0 * r2);
  const cplx z(2.0 * q, 2.0 * p);
  cplx zd = 1.0;
  cplx total = 0.0;
  for (int d = 0; d <= c; ++d) {
    double l_prev = 0.0, l = 1.0;
    for (int n = 0; n + d <= c; ++n) {
      if (n == 1) {
        l_prev = l;
        l = 1.0 + d - u;
      } else if (n > 1) {
        const double next = ((2.0 * (n - 1) + 1.0 + d - u) * l - (n - 1 + d) * l_prev) / n;
        l_prev = l;
        l = next;
      }
      const cplx k = norm_[static_cast<std::size_t>(d * d1 + n)] * l * zd;
      total += rho_(n + d, n) * k;
      if (d > 0) total += rho_(n, n + d) * std::conj(k);
    }
    zd *= z;
  }
  return pre * total.imag();
}

double wigner_point(const FockDensity& rho, PhaseSpacePoint pt) {
  const WignerKernel w(rho);
  const double residue = w.imaginary_residue(pt.q, pt.p);
  if (std::abs(residue) > 1e-8)
    throw std::invalid_argument("density is not Hermitian: Wigner value has imaginary part " +
                                std::to_string(residue));
  return w(pt.q, pt.p);
}

IntegralValue wigner_point_integral(const FockVector& psi, PhaseSpacePoint pt) {
  if (psi.modes() != 1) throw std::invalid_argument("wigner_point_integral expects one mode");
  const int c = psi.cutoff();
  const auto amps = psi.amplitudes();
  const double q = pt.q, p = pt.p;
  auto integrand = [&](double x) {
    const auto u = hermite_wavefunctions(c, q + 0.5 * x);
    const auto v = hermite_wavefunctions(c, q - 0.5 * x);
    cplx a = 0.0, b = 0.0;
    for (int k = 0; k <= c; ++k) {
      a += amps[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k)];
      b += amps[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
    }
    return (a * std::conj(b) * std::polar(1.0, 2.0 * p * x)).real() / kPi;
  };
  // Both wavefunction arguments must stay inside the support |y| <= y_max.
  const double y_max = std::sqrt(c + 1.0) + 7.0;
  const double half = 2.0 * (y_max + std::abs(q));
  // Split into panels so the Kronrod error estimate sees the oscillation.
  const int panels = std::max(8, static_cast<int>(std::ceil(2.0 * half * (1.0 + std::abs(p)))));
  IntegralValue out;
  for (int i = 0; i < panels; ++i) {
    const double a = -half + 2.0 * half * i / panels;
    const double b = -half + 2.0 * half * (i + 1) / panels;
    double err = 0.0;
    out.value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 12,
                                                                              1e-13, &err);
    out.error += err;
  }
  if (!(out.error < 1e-9))
    throw NumericalError("Wigner integral did not converge (error estimate " +
                         std::to_string(out.error) + ")");
  return out;
}

void GridSpec::validate() const {
  if (nq < 2 || np < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  if (!(q_max > q_min) || !(p_max > p_min)) throw std::invalid_argument("empty grid extent");
}

double WignerGrid::q_at(int i) const {
  return spec.q_min + (spec.q_max - spec.q_min) * i / (spec.nq - 1);
}

double WignerGrid::p_at(int j) const {
  return spec.p_min + (spec.p_max - spec.p_min) * j / (spec.np - 1);
}

double WignerGrid::interpolate(double q, double p) const {
  const double fq = std::clamp((q - spec.q_min) / (spec.q_max - spec.q_min) * (spec.nq - 1), 0.0,
                               spec.nq - 1.0);
  const double fp = std::clamp((p - spec.p_min) / (spec.p_max - spec.p_min) * (spec.np - 1), 0.0,
                               spec.np - 1.0);
  const int i = std::min(static_cast<int>(fq), spec.nq - 2);
  const int j = std::min(static_cast<int>(fp), spec.np - 2);
  const double tq = fq - i, tp = fp - j;
  return (1 - tq) * (1 - tp) * values(i, j) + tq * (1 - tp) * values(i + 1, j) +
         (1 - tq) * tp * values(i, j + 1) + tq * tp * values(i + 1, j + 1);
}

double WignerGrid::riemann_sum() const {
  const double dq = (spec.q_max - spec.q_min) / (spec.nq - 1);
  const double dp = (spec.p_max - spec.p_min) / (spec.np - 1);
  return values.sum() * dq * dp;
}

WignerGrid wigner_grid(const FockDensity& rho, const GridSpec& spec) {
  spec.validate();
  const WignerKernel w(rho);
  WignerGrid g{spec, Eigen::MatrixXd(spec.nq, spec.np)};
  detail::parallel_for(static_cast<std::size_t>(spec.nq), [&](std::size_t i) {
    const int ii = static_cast<int>(i);
    const double q = g.q_at(ii);
    for (int j = 0; j < spec.np; ++j) g.values(ii, j) = w(q, g.p_at(j));
  });
  return g;
}

WignerGrid rotated(const WignerGrid& grid, double angle) {
  WignerGrid out{grid.spec, Eigen::MatrixXd(grid.spec.nq, grid.spec.np)};
  const double c = std::cos(angle), s = std::sin(angle);
  for (int i = 0; i < grid.spec.nq; ++i) {
    for (int j = 0; j < grid.spec.np; ++j) {
      const double q = grid.q_at(i), p = grid.p_at(j);
      // R(-angle) (q, p)
      out.values(i, j) = grid.interpolate(c * q + s * p, -s * q + c * p);
    }
  }
  return out;
}

double effective_radius(const FockDensity& rho, double angle, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("radius threshold must be positive");
  const WignerKernel w(rho);
  const double cq = std::cos(angle), sp = std::sin(angle);
  auto excess = [&](double t) { return std::abs(w(t * cq, t * sp)) - threshold; };

  const double window = 4.0 + std::sqrt(2.0 * (rho.cutoff() + 1.0));
  if (excess(window) >= 0.0)
    throw NumericalError("radius search window exhausted: |W| >= threshold at t = " +
                         std::to_string(window));
  constexpr double kStep = 0.005;
  const int steps = static_cast<int>(std::ceil(window / kStep));
  for (int k = steps - 1; k >= 0; --k) {
    double lo = k * kStep;
    if (excess(lo) < 0.0) continue;
    double hi = std::min(window, lo + kStep);
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
  throw NumericalError("no threshold crossing of |W| found along the ray");
}

double support_radius(const FockDensity& rho, double threshold) {
  double best = 0.0;
  for (int k = 0; k < 16; ++k) best = std::max(best, effective_radius(rho, 2.0 * kPi * k / 16, threshold));
  return best;
}

namespace {

template <class F>
QuadratureResult tensor_integral(F&& f, double half, const QuadratureSpec& quad) {
  const GaussRule rule = gauss_legendre(quad.panel_order);
  QuadratureResult res;
  res.half_width = half;
  auto level = [&](int panels) {
    const double h = 2.0 * half / panels;
    std::vector<double> rows(static_cast<std::size_t>(panels));
    detail::parallel_for(rows.size(), [&](std::size_t a) {
      double acc = 0.0;
      const double q0 = -half + h * static_cast<double>(a);
      for (std::size_t gi = 0; gi < rule.x.size(); ++gi) {
        const double q = q0 + 0.5 * h * (rule.x[gi] + 1.0);
        for (int b = 0; b < panels; ++b) {
          const double p0 = -half + h * b;
          for (std::size_t gj = 0; gj < rule.x.size(); ++gj) {
            const double p = p0 + 0.5 * h * (rule.x[gj] + 1.0);
            acc += rule.w[gi] * rule.w[gj] * f(q, p);
          }
        }
      }
      rows[a] = acc * 0.25 * h * h;
    });
    res.evaluations += static_cast<long>(panels) * panels * quad.panel_order * quad.panel_order;
    double s = 0.0;
    for (double v : rows) s += v;
    return s;
  };
  int panels = 8;
  double prev = level(panels);
  while (true) {
    panels *= 2;
    if (panels > quad.max_panels)
      throw NumericalError("quadrature tolerance not reached; last refinement changed the value by " +
                           std::to_string(res.error_estimate));
    const double cur = level(panels);
    res.error_estimate = std::abs(cur - prev);
    res.value = cur;
    if (res.error_estimate < quad.tolerance) return res;
    prev = cur;
  }
}

// ∫ max(-W(q,p), 0) dp over [-half, half], split at the nodal points of W.
double negative_part_line(const WignerKernel& w, double q, double half, double spacing,
                          const GaussRule& rule, long& evals) {
  const int n = std::max(16, static_cast<int>(std::ceil(2.0 * half / spacing)));
  const double h = 2.0 * half / n;
  std::vector<double> f(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) f[static_cast<std::size_t>(k)] = w(q, -half + h * k);
  evals += n + 1;

  auto root = [&](double a, double fa, double b, double fb) {
    // Illinois-modified regula falsi
    int side = 0;
    for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
      const double c = (a * fb - b * fa) / (fb - fa);
      const double fc = w(q, c);
      ++evals;
      if (fc == 0.0) return c;
      if ((fc < 0.0) == (fb < 0.0)) {
        b = c;
        fb = fc;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = c;
        fa = fc;
        if (side == 1) fb *= 0.5;
        side = 1;
      }
    }
    return 0.5 * (a + b);
  };

  auto integrate_negative = [&](double a, double b) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.5)));
    const double len = (b - a) / pieces;
    double acc = 0.0;
    for (int k = 0; k < pieces; ++k) {
      const double lo = a + len * k;
      for (std::size_t g = 0; g < rule.x.size(); ++g) {
        const double p = lo + 0.5 * len * (rule.x[g] + 1.0);
        acc += rule.w[g] * std::max(-w(q, p), 0.0);
      }
      evals += static_cast<long>(rule.x.size());
    }
    return 0.5 * len * acc;
  };

  double total = 0.0;
  double seg_start = -half;
  bool negative = f[0] < 0.0;
  for (int k = 0; k < n; ++k) {
    const double fa = f[static_cast<std::size_t>(k)], fb = f[static_cast<std::size_t>(k) + 1];
    if ((fa < 0.0) == (fb < 0.0)) continue;
    const double a = -half + h * k;
    const double r = root(a, fa, a + h, fb);
    if (negative) total += integrate_negative(seg_start, r);
    seg_start = r;
    negative = fb < 0.0;
  }
  if (negative) total += integrate_negative(seg_start, half);
  return total;
}

}  // namespace

QuadratureResult negativity_volume_detailed(const FockDensity& rho, const QuadratureSpec& quad) {
  if (!(quad.tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (std::abs(rho.trace() - 1.0) > 1e-10)
    throw std::invalid_argument("negativity volume requires a trace-1 density");
  const WignerKernel w(rho);
  const double half = support_radius(rho) + quad.radius_margin;

  QuadratureResult res;
  if (quad.scheme == QuadratureSpec::Scheme::tensor_gauss_legendre) {
    res = tensor_integral([&](double q, double p) { return std::max(-w(q, p), 0.0); }, half, quad);
  } else {
    const GaussRule rule = gauss_legendre(16);
    long evals = 0;
    auto line = [&](double q) {
      return negative_part_line(w, q, half, quad.line_spacing, rule, evals);
    };
    double err = 0.0;
    // Outer panels keep the Kronrod rule from missing narrow negative lobes.
    const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * half / 0.5)));
    for (int i = 0; i < panels; ++i) {
      const double a = -half + 2.0 * half * i / panels;
      const double b = -half + 2.0 * half * (i + 1) / panels;
      double e = 0.0;
      res.value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          line, a, b, 18, quad.tolerance * 1e-3, &e);
      err += e;
    }
    res.error_estimate = err;
    res.evaluations = evals;
    res.half_width = half;
    if (!(err < quad.tolerance))
      throw NumericalError("quadrature tolerance not reached (error estimate " +
                           std::to_string(err) + ")");
  }
  if (res.value < quad.tolerance) res.value = 0.0;
  return res;
}

double negativity_volume(const FockDensity& rho, const QuadratureSpec& quad) {
  return negativity_volume_detailed(rho, quad).value;
}

QuadratureResult phase_space_integral(const FockDensity& rho, const QuadratureSpec& quad) {
  const WignerKernel w(rho);
  const double half = support_radius(rho) + quad.radius_margin;
  QuadratureSpec smooth = quad;
  smooth.panel_order = std::max(quad.panel_order, 10);
  return tensor_integral([&](double q, double p) { return w(q, p); }, half, smooth);
}

}  // namespace pbphase
