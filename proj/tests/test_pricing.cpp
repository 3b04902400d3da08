#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "degday/pricing.hpp"
#include "degday/quadrature.hpp"
#include "oracles.hpp"

using degday::ApproxCoefficients;
using degday::CarModel;
using degday::Harmonic;
using degday::PiecewiseConstant;
using degday::Scheme;
using degday::SeasonalFunction;
using degday::Side;
using degday::StateVector;

namespace {

CarModel reference_model() {
  const std::vector<double> row = {-0.3364, -1.6105, -2.1618};
  return CarModel(CarModel::companion(row), PiecewiseConstant(5.25));
}

SeasonalFunction ny_profile() {
  return SeasonalFunction(53.0, 0.0, {Harmonic{21.0, -1.9557005601915924, 365.25}});
}

// Boost-backed psi(x) = x Phi(x) + phi(x), independent of the library's.
double psi_oracle(double x) {
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return x * oracles::normal_cdf(x) + pdf;
}

// Draws a random stationary order-3 model, seasonal curve, and state.
struct RandomScenario {
  CarModel model;
  SeasonalFunction seasonal;
  StateVector x;
};

RandomScenario draw_scenario(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    // Sample three stable roots directly: one real, one conjugate pair.
    const double real_root = -0.2 - 1.5 * unif(gen);
    const double pair_re = -0.2 - 1.5 * unif(gen);
    const double pair_im = 0.1 + 1.2 * unif(gen);
    // (l - r)(l^2 - 2 a l + a^2 + b^2) with r = real root, a = Re, b = Im.
    const double c2 = -(real_root + 2.0 * pair_re);
    const double c1 = pair_re * pair_re + pair_im * pair_im + 2.0 * real_root * pair_re;
    const double c0 = -real_root * (pair_re * pair_re + pair_im * pair_im);
    const std::vector<double> row = {-c0, -c1, -c2};
    const double sigma = 1.0 + 8.0 * unif(gen);
    try {
      CarModel model(CarModel::companion(row), PiecewiseConstant(sigma));
      SeasonalFunction seasonal(
          40.0 + 20.0 * unif(gen), 0.01 * (unif(gen) - 0.5),
          {Harmonic{5.0 + 20.0 * unif(gen), 2.0 * M_PI * unif(gen), 365.25}});
      StateVector x(3);
      x << 6.0 * (unif(gen) - 0.5), 4.0 * (unif(gen) - 0.5), 2.0 * (unif(gen) - 0.5);
      return {std::move(model), std::move(seasonal), std::move(x)};
    } catch (const std::exception&) {
      continue;  // rejected draw (repeated or marginal eigenvalues)
    }
  }
}

}  // namespace

TEST_SUITE("pricing") {

TEST_CASE("day price matches the closed form assembled from oracles") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const StateVector zero = StateVector::Zero(3);

  // Frozen reference evaluations (x = 0, theta = 0).
  CHECK(degday::fcdd_day(model, ny, 207.0, 212.0, zero) ==
        doctest::Approx(8.905680179786662).epsilon(1e-9));
  CHECK(degday::fcdd_day(model, ny, 182.0, 212.0, zero) ==
        doctest::Approx(8.952952890207783).epsilon(1e-9));

  StateVector x(3);
  x << 1.2, -0.4, 0.3;
  for (double u : {1.0, 5.0, 30.0}) {
    const double t = 212.0 - u;
    const double var = oracles::simpson(
        [&](double v) { return std::pow(model.f_kernel(212.0 - v, 3) * 5.25, 2); }, t,
        212.0, 2000);
    const double m = ny(212.0) + model.f_row(u).dot(x);
    const double want = std::sqrt(var) * psi_oracle((m - 65.0) / std::sqrt(var));
    CHECK(degday::fcdd_day(model, ny, t, 212.0, x) == doctest::Approx(want).epsilon(1e-8));
    const double want_h = std::sqrt(var) * psi_oracle((65.0 - m) / std::sqrt(var));
    CHECK(degday::fhdd_day(model, ny, t, 212.0, x) ==
          doctest::Approx(want_h).epsilon(1e-8));
  }
}

TEST_CASE("day parity: cooling minus heating equals the signed excess") {
  std::mt19937_64 gen(20110801);
  for (int trial = 0; trial < 200; ++trial) {
    RandomScenario sc = draw_scenario(gen);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double t = 365.0 * unif(gen);
    const double s = t + 0.5 + 60.0 * unif(gen);
    const double cdd = degday::fcdd_day(sc.model, sc.seasonal, t, s, sc.x);
    const double hdd = degday::fhdd_day(sc.model, sc.seasonal, t, s, sc.x);
    const double excess =
        degday::m_theta(sc.model, sc.seasonal, t, s, sc.x) - sc.model.threshold();
    CHECK(cdd - hdd == doctest::Approx(excess).epsilon(1e-10));
    CHECK(cdd >= 0.0);
    CHECK(hdd >= 0.0);
  }
}

TEST_CASE("day price at s = t collapses to the realized payoff") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector hot(3), cold(3);
  hot << 3.0, 0.0, 0.0;
  cold << -30.0, 0.0, 0.0;
  const double t = 212.0;
  CHECK(degday::fcdd_day(model, ny, t, t, hot) ==
        doctest::Approx(ny(t) + 3.0 - 65.0).epsilon(1e-12));
  CHECK(degday::fcdd_day(model, ny, t, t, cold) == 0.0);
  CHECK(degday::fhdd_day(model, ny, t, t, cold) ==
        doctest::Approx(65.0 - (ny(t) - 30.0)).epsilon(1e-12));
}

TEST_CASE("period price integrates the day prices") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << 0.8, -0.2, 0.1;

  const double got = degday::fcdd_period(model, ny, 182.0, 212.0, 243.0, x);
  const double want = degday::integrate(
      [&](double s) { return degday::fcdd_day(model, ny, 182.0, s, x); }, 212.0, 243.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-7));

  // Frozen reference (x = 0): August 2011 cooling period, 30 days out.
  CHECK(degday::fcdd_period(model, ny, 182.0, 212.0, 243.0, StateVector::Zero(3)) ==
        doctest::Approx(231.04151650269574).epsilon(1e-8));
}

TEST_CASE("period additivity") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << -0.6, 0.4, 0.2;
  const double whole = degday::fcdd_period(model, ny, 182.0, 212.0, 243.0, x);
  const double left = degday::fcdd_period(model, ny, 182.0, 212.0, 227.0, x);
  const double right = degday::fcdd_period(model, ny, 182.0, 227.0, 243.0, x);
  CHECK(whole == doctest::Approx(left + right).epsilon(1e-10));
}

TEST_CASE("linearization coefficients: direct scheme") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const double t = 182.0, s = 212.0;

  const ApproxCoefficients cx =
      degday::approx_coeffs_day(model, ny, Side::Cdd, t, s, Scheme::ApproxX);
  CHECK((cx.a_vec - model.f_row(s - t)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(cx.theta_term == doctest::Approx(ny(s) - 65.0).epsilon(1e-12));

  const ApproxCoefficients hx =
      degday::approx_coeffs_day(model, ny, Side::Hdd, t, s, Scheme::ApproxX);
  CHECK((hx.a_vec + model.f_row(s - t)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(hx.theta_term == doctest::Approx(65.0 - ny(s)).epsilon(1e-12));

  // With a residual drift the intercept picks up its kernel integral.
  const std::vector<double> row = {-0.3364, -1.6105, -2.1618};
  const CarModel with_theta(CarModel::companion(row), PiecewiseConstant(5.25),
                            PiecewiseConstant(0.5));
  const ApproxCoefficients cth =
      degday::approx_coeffs_day(with_theta, ny, Side::Cdd, t, s, Scheme::ApproxX);
  const double leg = oracles::simpson(
      [&](double u) { return 0.5 * with_theta.f_kernel(s - u, 3); }, t, s, 1000);
  CHECK(cth.theta_term == doctest::Approx(ny(s) - 65.0 + leg).epsilon(1e-9));
}

TEST_CASE("linearization coefficients: expansion scheme is exactly half") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const double t = 182.0, s = 212.0;

  const ApproxCoefficients cx =
      degday::approx_coeffs_day(model, ny, Side::Cdd, t, s, Scheme::ApproxX);
  const ApproxCoefficients ct =
      degday::approx_coeffs_day(model, ny, Side::Cdd, t, s, Scheme::ApproxTaylor);
  for (int i = 0; i < 3; ++i) CHECK(ct.a_vec(i) == 0.5 * cx.a_vec(i));

  const double sig = std::sqrt(model.sigma_sq(t, s));
  CHECK(ct.theta_term ==
        doctest::Approx(0.5 * (ny(s) - 65.0) + sig / std::sqrt(2.0 * M_PI)).epsilon(1e-12));

  // Same halving for the period coefficients.
  const ApproxCoefficients px =
      degday::approx_coeffs_period(model, ny, Side::Cdd, t, 212.0, 243.0, Scheme::ApproxX);
  const ApproxCoefficients pt = degday::approx_coeffs_period(model, ny, Side::Cdd, t, 212.0,
                                                             243.0, Scheme::ApproxTaylor);
  for (int i = 0; i < 3; ++i) CHECK(pt.a_vec(i) == 0.5 * px.a_vec(i));
}

TEST_CASE("period linearization coefficients integrate the day ones") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const double t = 182.0, tau1 = 212.0, tau2 = 243.0;

  const ApproxCoefficients got =
      degday::approx_coeffs_period(model, ny, Side::Cdd, t, tau1, tau2, Scheme::ApproxX);
  for (int i = 0; i < 3; ++i) {
    const double want = oracles::simpson(
        [&](double s) { return model.f_row(s - t)(i); }, tau1, tau2, 2000);
    CHECK(got.a_vec(i) == doctest::Approx(want).epsilon(1e-9));
  }
  const double want_theta =
      oracles::simpson([&](double s) { return ny(s) - 65.0; }, tau1, tau2, 2000);
  CHECK(got.theta_term == doctest::Approx(want_theta).epsilon(1e-9));

  const ApproxCoefficients tay = degday::approx_coeffs_period(model, ny, Side::Cdd, t, tau1,
                                                              tau2, Scheme::ApproxTaylor);
  const double want_tay = oracles::simpson(
      [&](double s) {
        return 0.5 * (ny(s) - 65.0) +
               std::sqrt(model.sigma_sq(t, s)) / std::sqrt(2.0 * M_PI);
      },
      tau1, tau2, 2000);
  CHECK(tay.theta_term == doctest::Approx(want_tay).epsilon(1e-8));
}

TEST_CASE("evaluating the linearization") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const ApproxCoefficients c =
      degday::approx_coeffs_day(model, ny, Side::Cdd, 182.0, 212.0, Scheme::ApproxX);
  StateVector x(3);
  x << 1.0, 2.0, 3.0;
  CHECK(degday::fdd_approx(c, x) ==
        doctest::Approx(c.theta_term + c.a_vec.dot(x)).epsilon(1e-14));
  StateVector wrong(2);
  wrong << 1.0, 2.0;
  CHECK_THROWS_AS(degday::fdd_approx(c, wrong), std::invalid_argument);
}

TEST_CASE("exact price dominates the direct linearization") {
  std::mt19937_64 gen(7130);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    RandomScenario sc = draw_scenario(gen);
    const double t = 365.0 * unif(gen);
    const double s = t + 0.5 + 40.0 * unif(gen);
    for (Side side : {Side::Cdd, Side::Hdd}) {
      const double exact = degday::fdd_day(sc.model, sc.seasonal, side, t, s, sc.x);
      const double approx = degday::fdd_approx(
          degday::approx_coeffs_day(sc.model, sc.seasonal, side, t, s, Scheme::ApproxX),
          sc.x);
      // Deep in the money psi(z) - z underflows and the two sides round the
      // same sum in different orders, so allow the last couple of ulps.
      CHECK(exact >= approx - 1e-12 * std::max(1.0, std::abs(approx)));
      CHECK(exact >= 0.0);
    }
  }
}

}  // TEST_SUITE
