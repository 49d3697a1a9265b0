#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "pbphase/herald.hpp"
#include "pbphase/polynomial.hpp"

using namespace pbphase;

namespace {

double max_root_gap(std::vector<cplx> a, std::vector<cplx> b) {
  canonical_root_order(a);
  canonical_root_order(b);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("quadratic with known roots") {
  const std::vector<cplx> p{1.0, -0.3, 0.02};
  const auto r = companion_roots(p);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - 0.1) < 1e-15);
  CHECK(std::abs(r[1] - 0.2) < 1e-15);
}

TEST_CASE("expansion from roots") {
  const std::vector<cplx> roots{0.1, 0.2};
  const auto p = poly_from_roots(roots);
  CHECK(std::abs(p[1] + 0.3) < 1e-16);
  CHECK(std::abs(p[2] - 0.02) < 1e-16);
}

TEST_CASE("Vieta round trip on the alpha polynomial") {
  for (int s : {2, 4, 7, 10}) {
    const auto poly = alpha_polynomial(s, 0.1);
    const auto roots = solve_alphas(poly);
    const auto back = poly_from_roots(roots);
    for (std::size_t k = 0; k < poly.size(); ++k) CHECK(std::abs(back[k] - poly[k]) < 1e-10);
    CHECK(root_residual(poly, roots) < 1e-12);
  }
}

TEST_CASE("companion and Aberth routes agree") {
  std::mt19937_64 g(17);
  std::normal_distribution<double> nd;
  for (int deg = 2; deg <= 12; ++deg) {
    std::vector<cplx> roots(static_cast<std::size_t>(deg));
    for (auto& r : roots) r = {nd(g), nd(g)};
    const auto p = poly_from_roots(roots);
    CHECK(max_root_gap(companion_roots(p), roots) < 1e-9);
    CHECK(max_root_gap(aberth_roots(p), roots) < 1e-9);
  }
  for (int s = 2; s <= 8; ++s) {
    const auto poly = alpha_polynomial(s, 0.25);
    CHECK(max_root_gap(companion_roots(poly), aberth_roots(poly)) < 1e-10);
  }
}

TEST_CASE("canonical order is deterministic") {
  std::vector<cplx> a{{0.2, 1.0}, {0.2, -1.0}, {-0.5, 0.0}};
  canonical_root_order(a);
  CHECK(a[0] == cplx(-0.5, 0.0));
  CHECK(a[1] == cplx(0.2, -1.0));
  CHECK(a[2] == cplx(0.2, 1.0));
}

TEST_CASE("degenerate input") {
  const std::vector<cplx> zero_lead{0.0, 1.0, 2.0};
  CHECK_THROWS_AS(companion_roots(zero_lead), std::invalid_argument);
  const std::vector<cplx> nan_coeff{1.0, NAN};
  CHECK_THROWS_AS(companion_roots(nan_coeff), std::invalid_argument);
}

TEST_CASE("q = 0 collapses every root to zero") {
  const auto roots = solve_alphas(alpha_polynomial(5, 0.0));
  for (auto r : roots) CHECK(std::abs(r) == 0.0);
}
