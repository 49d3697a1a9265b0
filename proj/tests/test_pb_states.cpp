#include <cmath>
#include <numbers>

#include "doctest.h"

#include "pbphase/pb_states.hpp"

using namespace pbphase;

TEST_CASE("equal-amplitude phase states") {
  const auto phi0 = pb_eigenstate({4, 0, 0.0});
  for (int n = 0; n <= 4; ++n) CHECK(std::abs(phi0[static_cast<std::size_t>(n)] - 1.0 / std::sqrt(5.0)) < 1e-15);

  const auto phi1 = pb_eigenstate({1, 1, 0.0});
  CHECK(std::abs(phi1[0] - M_SQRT1_2) < 1e-15);
  CHECK(std::abs(phi1[1] + M_SQRT1_2) < 1e-15);

  for (int s = 1; s <= 17; ++s)
    for (int m = 0; m <= s; ++m) CHECK(pb_eigenstate({s, m, 0.3}).squared_norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(pb_eigenstate({0, 0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(pb_eigenstate({3, 4, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(pb_eigenstate({3, -1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(pb_eigenstate({3, 0, NAN}), std::invalid_argument);
}

TEST_CASE("embedding at a larger cutoff pads with zeros") {
  const auto v = pb_eigenstate({2, 1, 0.0}, 6);
  CHECK(v.cutoff() == 6);
  for (std::size_t n = 3; n <= 6; ++n) CHECK(v[n] == cplx(0.0));
  CHECK(v.squared_norm() == doctest::Approx(1.0));
}

TEST_CASE("phase operator spectrum") {
  for (int s : {1, 2, 5, 9}) {
    const double phi0 = 0.4;
    const Eigen::MatrixXcd op = pb_phase_operator(s, phi0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op);
    for (int m = 0; m <= s; ++m)
      CHECK(es.eigenvalues()(m) == doctest::Approx(phi0 + 2 * std::numbers::pi * m / (s + 1)).epsilon(1e-10));

    double sum = 0.0;
    for (int m = 0; m <= s; ++m) {
      const PbParams p{s, m, phi0};
      sum += p.phase();
      const auto v = pb_eigenstate(p);
      Eigen::VectorXcd x(s + 1);
      for (int n = 0; n <= s; ++n) x(n) = v[static_cast<std::size_t>(n)];
      CHECK((op * x - p.phase() * x).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(op.trace().real() == doctest::Approx(sum).epsilon(1e-13));
  }
}
