#include <cmath>
#include <random>

#include "doctest.h"

#include "pbphase/error.hpp"
#include "pbphase/fock.hpp"
#include "pbphase/operators.hpp"
#include "pbphase/pb_states.hpp"

using namespace pbphase;

namespace {

std::vector<cplx> random_amps(std::mt19937_64& g, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(g), nd(g)};
  return v;
}

Eigen::MatrixXcd random_density(std::mt19937_64& g, int dim) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = {nd(g), nd(g)};
  Eigen::MatrixXcd rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("tensor product of basis states") {
  const TruncationConfig c{2, 1};
  const auto vac = FockVector::basis(c, std::vector<int>{0});
  const auto prod = tensor_product(vac, vac);
  CHECK(prod.modes() == 2);
  CHECK(std::abs(prod.at(std::vector<int>{0, 0}) - 1.0) < 1e-15);
  CHECK(prod.squared_norm() == doctest::Approx(1.0));

  const auto one = FockVector::basis(c, std::vector<int>{1});
  const std::vector<cplx> plus{M_SQRT1_2, M_SQRT1_2, 0.0};
  const auto p = tensor_product(one, FockVector::single_mode(plus, 2));
  CHECK(std::abs(p.at(std::vector<int>{1, 0}) - M_SQRT1_2) < 1e-15);
  CHECK(std::abs(p.at(std::vector<int>{1, 1}) - M_SQRT1_2) < 1e-15);
  CHECK(std::abs(p.at(std::vector<int>{0, 0})) == 0.0);
}

TEST_CASE("tensor product norm is multiplicative") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = FockVector::single_mode(random_amps(g, 4), 3);
    const auto b = FockVector::single_mode(random_amps(g, 4), 3);
    double na = 0, nb = 0;
    for (auto x : a.amplitudes()) na += std::norm(x);
    for (auto x : b.amplitudes()) nb += std::norm(x);
    CHECK(tensor_product(a, b).squared_norm() == doctest::Approx(na * nb).epsilon(1e-13));
  }
}

TEST_CASE("tensor product rejects mismatched cutoffs") {
  const auto a = FockVector::basis({2, 1}, std::vector<int>{0});
  const auto b = FockVector::basis({3, 1}, std::vector<int>{0});
  CHECK_THROWS_AS(tensor_product(a, b), ConfigMismatch);
}

TEST_CASE("normalized flag is validated") {
  CHECK_THROWS_AS(FockVector({1, 1}, {1.0, 1.0}, Norm::normalized), std::invalid_argument);
  CHECK_THROWS_AS(FockVector({1, 1}, {NAN, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(FockVector({1, 1}, {1.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_NOTHROW(FockVector({1, 1}, {0.6, 0.8}, Norm::normalized));
}

TEST_CASE("inner product") {
  const auto zero = FockVector::basis({3, 1}, std::vector<int>{0});
  const auto one = FockVector::basis({3, 1}, std::vector<int>{1});
  CHECK(std::abs(inner_product(zero, one)) == 0.0);
  for (int m = 0; m < 4; ++m) {
    const auto a = pb_eigenstate({3, m, 0.0});
    CHECK(std::abs(inner_product(a, a) - 1.0) < 1e-14);
    for (int k = m + 1; k < 4; ++k) CHECK(std::abs(inner_product(a, pb_eigenstate({3, k, 0.0}))) < 1e-14);
  }
}

TEST_CASE("pure-state fidelity") {
  const auto psi = pb_eigenstate({4, 2, 0.0});
  CHECK(fidelity_pure(FockDensity::pure(psi), psi) == doctest::Approx(1.0).epsilon(1e-14));
  const auto vac = FockVector::basis({1, 1}, std::vector<int>{0});
  const auto one = FockVector::basis({1, 1}, std::vector<int>{1});
  CHECK(fidelity_pure(FockDensity::pure(vac), one) == 0.0);

  std::mt19937_64 g(5);
  const Eigen::MatrixXcd rho = random_density(g, 5);
  const auto phi = pb_eigenstate({4, 0, 0.0});
  cplx sum = 0.0;
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n)
      sum += std::conj(phi[static_cast<std::size_t>(m)]) * rho(m, n) * phi[static_cast<std::size_t>(n)];
  CHECK(fidelity_pure(FockDensity(rho), phi) == doctest::Approx(sum.real()).epsilon(1e-13));
}

TEST_CASE("density validation") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(FockDensity{bad}, std::invalid_argument);
  Eigen::MatrixXcd off(2, 2);
  off << 0.7, 0.0, 0.0, 0.7;
  CHECK_THROWS_AS(FockDensity{off}, std::invalid_argument);
  CHECK_NOTHROW(FockDensity(off, 1.4));
}

TEST_CASE("project pattern slices the TMSV") {
  const double q = std::tanh(0.2);
  const auto t = tmsv(q, 3);
  const auto a = project_pattern(t, {{0, 1}});
  CHECK(a.modes() == 1);
  CHECK(std::abs(a[1] - q * std::sqrt(1 - q * q)) < 1e-15);
  CHECK(std::abs(a[0]) == 0.0);
  CHECK(std::abs(a[2]) == 0.0);
}

TEST_CASE("project pattern beyond the photon content gives zero") {
  const auto t = tensor_product(FockVector::basis({3, 1}, std::vector<int>{1}),
                                FockVector::basis({3, 1}, std::vector<int>{0}));
  const auto a = project_pattern(t, {{0, 3}});
  CHECK(a.squared_norm() == 0.0);
}

TEST_CASE("conditional density with identity POVMs is the reduced state") {
  std::mt19937_64 g(3);
  const TruncationConfig c{2, 3};
  auto amps = random_amps(g, c.size());
  double n = 0;
  for (auto x : amps) n += std::norm(x);
  for (auto& x : amps) x /= std::sqrt(n);
  const FockVector psi(c, amps, Norm::normalized);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  const std::vector<Eigen::MatrixXcd> povms{id, id};
  const auto cond = conditional_density(psi, povms, 2);
  CHECK(cond.probability == doctest::Approx(1.0).epsilon(1e-13));

  // explicit partial trace over modes 0 and 1
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          const std::vector<int> ok{a, b, k}, ol{a, b, l};
          ref(k, l) += psi.at(ok) * std::conj(psi.at(ol));
        }
  CHECK((cond.rho.matrix() - ref).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("conditional density with projectors matches project_pattern") {
  const double q = std::tanh(0.3);
  const FockVector psi = apply_two_mode_unitary(tmsv(q, 3), 0, 1, beam_splitter_pb(1, 3));
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Zero(4, 4);
  one(1, 1) = 1.0;
  const std::vector<Eigen::MatrixXcd> povms{one};
  const auto cond = conditional_density(psi, povms, 1);
  const FockVector slice = project_pattern(psi, {{0, 1}});
  CHECK(cond.probability == doctest::Approx(slice.squared_norm()).epsilon(1e-13));
  const auto pure = FockDensity::pure(slice.normalized());
  CHECK((cond.rho.matrix() - pure.matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("click probability factorizes on product states") {
  const int cutoff = 3;
  const auto one = FockVector::basis({cutoff, 1}, std::vector<int>{1});
  FockVector psi = one;
  for (int k = 0; k < 3; ++k) psi = tensor_product(psi, one);
  psi = tensor_product(psi, pb_eigenstate({3, 0, 0.0}));
  for (double eta : {1.0, 0.8, 0.6}) {
    const auto povm = detector_povm(eta, cutoff);
    const std::vector<Eigen::MatrixXcd> povms(4, povm.click);
    const auto cond = conditional_density(psi, povms, 4);
    CHECK(cond.probability == doctest::Approx(std::pow(eta, 4)).epsilon(1e-13));
  }
}

TEST_CASE("degenerate herald is reported") {
  const auto vac = tensor_product(FockVector::basis({2, 1}, std::vector<int>{0}),
                                  FockVector::basis({2, 1}, std::vector<int>{0}));
  const std::vector<Eigen::MatrixXcd> povms{detector_povm(1.0, 2).click};
  CHECK_THROWS_AS(conditional_density(vac, povms, 1), DegenerateHerald);
}

TEST_CASE("apply_single_mode records leakage") {
  const auto one = FockVector::basis({1, 1}, std::vector<int>{1});
  // raising operator into a 3-row target: |1> -> sqrt(2)|2>, dropped
  Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(3, 2);
  up(1, 0) = 1.0;
  up(2, 1) = std::sqrt(2.0);
  const auto out = apply_single_mode(one, 0, up);
  CHECK(out.squared_norm() == 0.0);
  CHECK(out.leakage() == doctest::Approx(2.0));
}
