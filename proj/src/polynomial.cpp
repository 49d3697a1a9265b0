#include "pbphase/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "pbphase/error.hpp"

namespace pbphase {

namespace {

void check_coeffs(std::span<const cplx> coeffs) {
  if (coeffs.size() < 2) throw std::invalid_argument("polynomial degree must be >= 1");
  if (coeffs[0] == cplx{}) throw std::invalid_argument("leading coefficient is zero");
  for (const cplx& c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw std::invalid_argument("non-finite coefficient");
}

cplx poly_deriv_eval(std::span<const cplx> coeffs, cplx x) {
  const auto n = static_cast<int>(coeffs.size()) - 1;
  cplx d = 0.0;
  for (int i = 0; i < n; ++i) d = d * x + coeffs[static_cast<std::size_t>(i)] * static_cast<double>(n - i);
  return d;
}

double coeff_scale(std::span<const cplx> coeffs) {
  double m = 1.0;
  for (const cplx& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

cplx poly_eval(std::span<const cplx> coeffs, cplx x) {
  cplx v = 0.0;
  for (const cplx& c : coeffs) v = v * x + c;
  return v;
}

std::vector<cplx> poly_from_roots(std::span<const cplx> roots) {
  std::vector<cplx> p{1.0};
  for (const cplx& r : roots) {
    p.push_back(0.0);
    for (std::size_t i = p.size() - 1; i > 0; --i) p[i] -= r * p[i - 1];
  }
  return p;
}

void canonical_root_order(std::vector<cplx>& roots) {
  double scale = 1.0;
  for (const cplx& r : roots) scale = std::max(scale, std::abs(r));
  const double tol = 1e-12 * scale;
  // Quantize real parts so conjugate pairs compare equal on the first key.
  std::sort(roots.begin(), roots.end(), [tol](const cplx& a, const cplx& b) {
    const auto ka = std::llround(a.real() / tol), kb = std::llround(b.real() / tol);
    if (ka != kb) return ka < kb;
    return a.imag() < b.imag();
  });
}

double root_residual(std::span<const cplx> coeffs, std::span<const cplx> roots) {
  double worst = 0.0;
  for (const cplx& r : roots) worst = std::max(worst, std::abs(poly_eval(coeffs, r)));
  return worst / coeff_scale(coeffs);
}

std::vector<cplx> companion_roots(std::span<const cplx> coeffs) {
  check_coeffs(coeffs);
  const auto n = static_cast<Eigen::Index>(coeffs.size()) - 1;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) comp(0, j) = -coeffs[static_cast<std::size_t>(j) + 1] / coeffs[0];
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigenvalue solver failed");
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
  // Newton polish; keeps a step only if it lowers the residual.
  for (cplx& r : roots) {
    for (int it = 0; it < 8; ++it) {
      const cplx f = poly_eval(coeffs, r);
      const cplx df = poly_deriv_eval(coeffs, r);
      if (f == cplx{} || df == cplx{}) break;
      const cplx next = r - f / df;
      if (std::abs(poly_eval(coeffs, next)) >= std::abs(f)) break;
      r = next;
    }
  }
  canonical_root_order(roots);
  return roots;
}

std::vector<cplx> aberth_roots(std::span<const cplx> coeffs, int max_iter) {
  check_coeffs(coeffs);
  const auto n = static_cast<int>(coeffs.size()) - 1;
  // Initial guesses on a circle of Cauchy-bound radius, rotated off the axes.
  double radius = 0.0;
  for (int i = 1; i <= n; ++i)
    radius = std::max(radius, std::pow(std::abs(coeffs[static_cast<std::size_t>(i)] / coeffs[0]), 1.0 / i));
  radius = std::max(radius, 1e-3);
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    z[static_cast<std::size_t>(k)] = std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

  for (int it = 0; it < max_iter; ++it) {
    double max_step = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx zk = z[static_cast<std::size_t>(k)];
      const cplx f = poly_eval(coeffs, zk);
      if (f == cplx{}) continue;
      const cplx ratio = f / poly_deriv_eval(coeffs, zk);
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (zk - z[static_cast<std::size_t>(j)]);
      const cplx step = ratio / (1.0 - ratio * sum);
      z[static_cast<std::size_t>(k)] = zk - step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(zk)));
    }
    if (max_step < 1e-15) break;
  }
  if (root_residual(coeffs, z) > 1e-10)
    throw NumericalError("Aberth-Ehrlich iteration did not converge");
  canonical_root_order(z);
  return z;
}

}  // namespace pbphase
