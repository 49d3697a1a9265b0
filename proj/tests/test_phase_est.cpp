#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "pbphase/error.hpp"
#include "pbphase/pb_states.hpp"
#include "pbphase/phase_est.hpp"

using namespace pbphase;

namespace {

constexpr double kPi = std::numbers::pi;

double angle_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * kPi);
  return std::min(d, 2 * kPi - d);
}

ObservedFrequencies exact_interference(int s, double phi_j, double phi_k) {
  return ObservedFrequencies::exact(interference_probs(phase_state(s, phi_j), phase_state(s, phi_k)));
}

SuperpositionCoeffs random_coeffs(std::mt19937_64& g, int s) {
  std::normal_distribution<double> nd;
  std::vector<cplx> c(static_cast<std::size_t>(s) + 1);
  for (auto& x : c) x = {nd(g), nd(g)};
  return SuperpositionCoeffs::make(c);
}

std::vector<CoefficientSetting> exact_settings(const SuperpositionCoeffs& c) {
  std::vector<CoefficientSetting> out;
  for (double ph : reference_phases(c.s)) out.push_back({ph, ObservedFrequencies::exact(superposition_probs(ph, c))});
  return out;
}

}  // namespace

TEST_CASE("low-order interference probabilities") {
  for (int s : {2, 3}) {
    const double n2 = (s + 1.0) * (s + 1.0);
    for (int k = 0; k < 8; ++k) {
      const double phi_j = 0.3 + 0.1 * k, phi_k = -0.4 * k;
      const double c = std::cos(phi_j - phi_k), sn = std::sin(phi_j - phi_k);
      const auto d = interference_probs(phase_state(s, phi_j), phase_state(s, phi_k));
      CHECK(d(0, 0) == doctest::Approx(1 / n2).epsilon(1e-12));
      CHECK(std::abs(d(0, 1) - (1 - c) / n2) < 1e-12);
      CHECK(std::abs(d(1, 0) - (1 + c) / n2) < 1e-12);
      CHECK(std::abs(d(1, 1) - 2 * sn * sn / n2) < 1e-12);
      CHECK(std::abs(d(0, 2) - std::pow(c - M_SQRT1_2, 2) / n2) < 1e-12);
      CHECK(std::abs(d(2, 0) - std::pow(c + M_SQRT1_2, 2) / n2) < 1e-12);
      CHECK(d.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
      // the two-photon sector carries 3 of the (s+1)^2 equally weighted input pairs
      CHECK(d(0, 2) + d(1, 1) + d(2, 0) == doctest::Approx(3 / n2).epsilon(1e-12));
    }
  }
}

TEST_CASE("interference of identical phase states") {
  for (int s : {1, 4, 7}) {
    const auto d = interference_probs(phase_state(s, 0.9), phase_state(s, 0.9));
    CHECK(d(0, 0) == doctest::Approx(1.0 / ((s + 1) * (s + 1))).epsilon(1e-13));
    CHECK(std::abs(d(1, 1)) < 1e-15);
  }
  const auto d = interference_probs(phase_state(2, kPi / 2), phase_state(2, 0.0));
  CHECK(d(1, 1) == doctest::Approx(2.0 / 9).epsilon(1e-13));
  CHECK(d(0, 1) == doctest::Approx(1.0 / 9).epsilon(1e-13));
  CHECK(d(1, 0) == doctest::Approx(1.0 / 9).epsilon(1e-13));
  CHECK(d(2, 0) == doctest::Approx(0.5 / 9).epsilon(1e-13));
  CHECK(d(0, 2) == doctest::Approx(0.5 / 9).epsilon(1e-13));

  const auto vac = FockVector::basis({1, 1}, std::vector<int>{0});
  CHECK(interference_probs(vac, vac)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("qubit superposition statistics") {
  for (double r : {0.0, 0.2, 0.6, 0.9, 1.0})
    for (double th : {0.0, 0.7, 2.0, 4.5}) {
      const auto d = superposition_probs(0.0, SuperpositionCoeffs::qubit(r, th));
      const double t = std::sqrt(1 - r * r);
      CHECK(std::abs(d(0, 0) - std::norm(r + std::polar(t, th)) / 4) < 1e-13);
      CHECK(std::abs(d(0, 1) - (1 - r * r) / 2) < 1e-13);
    }
}

TEST_CASE("pure coefficients reduce to plain interference") {
  for (int m = 0; m <= 3; ++m) {
    std::vector<cplx> c(4, 0.0);
    c[static_cast<std::size_t>(m)] = 1.0;
    const auto a = superposition_probs(0.4, SuperpositionCoeffs::make(c));
    const auto b = interference_probs(phase_state(3, 0.4), pb_eigenstate({3, m, 0.0}));
    CHECK((a.probs - b.probs).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("sampling") {
  const auto dist = interference_probs(phase_state(2, 0.5), phase_state(2, 1.7));
  CHECK_THROWS_AS(sample_outcomes(dist, 0, 1), std::invalid_argument);
  const auto one = sample_outcomes(dist, 1, 1);
  CHECK(one.counts.sum() == 1);

  OutcomeDistribution sure{1, Eigen::MatrixXd::Zero(3, 3)};
  sure.probs(0, 0) = 1.0;
  const auto t = sample_outcomes(sure, 1000, 7);
  CHECK(t(0, 0) == 1000);

  const std::int64_t n = 1000000;
  const auto big = sample_outcomes(dist, n, 12345);
  CHECK(big.counts.sum() == n);
  for (Eigen::Index a = 0; a < dist.probs.rows(); ++a)
    for (Eigen::Index b = 0; b < dist.probs.cols(); ++b) {
      const double p = dist.probs(a, b);
      const double sigma = std::sqrt(n * p * (1 - p));
      CHECK(std::abs(static_cast<double>(big.counts(a, b)) - n * p) <= 4 * sigma + 1e-9);
    }

  const auto again = sample_outcomes(dist, 5000, 99);
  CHECK(again.counts == sample_outcomes(dist, 5000, 99).counts);
  CHECK(derive_seed(99, 0) != derive_seed(99, 1));
}

TEST_CASE("phase estimation from exact probabilities") {
  const int s = 4;
  const double phi_j = 0.2, phi_k = phi_j - 1.0;
  const double phi_b = phi_j + kPi / 2;
  const auto e = estimate_phase(exact_interference(s, phi_j, phi_k), phi_j,
                                exact_interference(s, phi_b, phi_k), phi_b, s);
  CHECK(angle_gap(e.phi_k, phi_k) < 1e-10);
  CHECK(e.resolved);

  const auto single = estimate_phase(exact_interference(s, phi_j, phi_k), phi_j, s);
  REQUIRE(single.candidates.size() == 2);
  CHECK(std::min(angle_gap(single.candidates[0], phi_k), angle_gap(single.candidates[1], phi_k)) < 1e-10);
  CHECK_FALSE(single.resolved);

  const auto same = estimate_phase(exact_interference(s, 1.3, 1.3), 1.3, s);
  CHECK(angle_gap(same.phi_k, 1.3) < 1e-7);

  CHECK_THROWS_AS(estimate_phase(exact_interference(s, 0.0, 1.0), 0.0, exact_interference(s, kPi, 1.0), kPi, s),
                  std::invalid_argument);
}

TEST_CASE("Monte Carlo phase estimation") {
  const int s = 4;
  const double phi_j = 0.0, phi_k = phi_j - 0.7, phi_b = phi_j + kPi / 2;
  const auto da = interference_probs(phase_state(s, phi_j), phase_state(s, phi_k));
  const auto db = interference_probs(phase_state(s, phi_b), phase_state(s, phi_k));
  int good = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto ta = sample_outcomes(da, 100000, derive_seed(rep, 0), phi_j);
    const auto tb = sample_outcomes(db, 100000, derive_seed(rep, 1), phi_b);
    const auto e = estimate_phase(ObservedFrequencies::from(ta), phi_j, ObservedFrequencies::from(tb), phi_b, s);
    if (angle_gap(e.phi_k, phi_k) < 0.05) ++good;
    CHECK(e.std_error > 0.0);
    CHECK(e.std_error < 0.05);
  }
  CHECK(good >= 19);
}

TEST_CASE("empty single-photon cells") {
  CountTable t{decltype(CountTable::counts)::Zero(3, 3), 10, 0, 0.0, 1};
  t.counts(0, 0) = 10;
  CHECK_THROWS_AS(estimate_phase(ObservedFrequencies::from(t), 0.0, 1), LowInformation);
}

TEST_CASE("qubit coefficient inversion") {
  const auto c = SuperpositionCoeffs::qubit(0.6, 1.2);
  const std::vector<CoefficientSetting> st{{0.0, ObservedFrequencies::exact(superposition_probs(0.0, c))}};
  const auto e = estimate_coefficients(st, 1);
  CHECK(std::abs(e.coeffs.c[0].real() - 0.6) < 1e-6);
  CHECK(std::abs(std::arg(e.coeffs.c[1]) - 1.2) < 1e-6);
  CHECK(e.identifiable);

  const auto pure = SuperpositionCoeffs::qubit(1.0, 0.0);
  const std::vector<CoefficientSetting> sp{{0.0, ObservedFrequencies::exact(superposition_probs(0.0, pure))}};
  const auto ep = estimate_coefficients(sp, 1);
  CHECK(std::abs(ep.coeffs.c[0].real() - 1.0) < 1e-12);
  CHECK_FALSE(ep.identifiable);
}

TEST_CASE("coefficient round trip from exact probabilities") {
  std::mt19937_64 g(2024);
  for (int s : {2, 3}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto truth = random_coeffs(g, s);
      const auto e = estimate_coefficients(exact_settings(truth), s);
      for (int k = 0; k <= s; ++k) CHECK(std::abs(e.coeffs.c[static_cast<std::size_t>(k)] - truth.c[static_cast<std::size_t>(k)]) < 1e-6);
    }
  }
}

TEST_CASE("Monte Carlo coefficient estimation") {
  std::mt19937_64 g(77);
  const auto truth = random_coeffs(g, 2);
  int good = 0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    std::vector<CoefficientSetting> st;
    std::uint64_t i = 0;
    for (double ph : reference_phases(2)) {
      const auto t = sample_outcomes(superposition_probs(ph, truth), 100000, derive_seed(500 + rep, i++), ph);
      st.push_back({ph, ObservedFrequencies::from(t)});
    }
    const auto e = estimate_coefficients(st, 2);
    double worst = 0.0;
    for (int k = 0; k <= 2; ++k) worst = std::max(worst, std::abs(e.coeffs.c[static_cast<std::size_t>(k)] - truth.c[static_cast<std::size_t>(k)]));
    if (worst < 0.03) ++good;
  }
  CHECK(good >= 9);
}

TEST_CASE("estimator preconditions") {
  for (int s = 1; s <= 60; ++s) CHECK(parameter_count_ok(s));
  const auto truth = SuperpositionCoeffs::make({1.0, 0.5, 0.25});
  auto st = exact_settings(truth);
  st.pop_back();
  CHECK_THROWS_AS(estimate_coefficients(st, 2), std::invalid_argument);
  const std::vector<CoefficientSetting> none;
  CHECK_THROWS_AS(estimate_coefficients(none, 2), std::invalid_argument);
}

TEST_CASE("gauge fixing") {
  const auto c = SuperpositionCoeffs::make({cplx(0.0, 2.0), cplx(1.0, 1.0)});
  CHECK(c.c[0].imag() == 0.0);
  CHECK(c.c[0].real() > 0.0);
  CHECK(std::norm(c.c[0]) + std::norm(c.c[1]) == doctest::Approx(1.0));
}
