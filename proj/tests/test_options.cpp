#include "doctest.h"

#include <cmath>

#include "degday/options.hpp"
#include "degday/rng.hpp"
#include "oracles.hpp"

using degday::CarModel;
using degday::Harmonic;
using degday::McEstimate;
using degday::McGreeks;
using degday::OptionSpec;
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

double psi_oracle(double x) {
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return x * oracles::normal_cdf(x) + pdf;
}

// Common-random-number central differences of the exact-payoff Monte Carlo
// price: per path the same normal draw prices the option at x + h e_i and
// x - h e_i, so the per-path difference is nearly noise-free and carries its
// own standard error.
struct CrnFd {
  Eigen::VectorXd value;
  Eigen::VectorXd se;
};

CrnFd crn_fd_greeks(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                    double t, const OptionSpec& opt, double s, const StateVector& x,
                    int n_paths, std::uint64_t seed, double h) {
  const int p = model.order();
  const double disc = std::exp(-opt.rate * (opt.tau - t));
  const double sd = std::sqrt(model.projected_variance(t, opt.tau, s));
  const double base_mean = model.f_row(s - t).dot(x) + model.projected_theta(t, opt.tau, s);
  const Eigen::VectorXd f = model.f_row(s - t);
  const double sig_tau_s = std::sqrt(model.projected_variance(opt.tau, s, s));
  const double theta_tail = model.projected_theta(opt.tau, s, s);
  const double lam_s = seasonal(s);
  const double c = model.threshold();
  const double sign = side == Side::Cdd ? 1.0 : -1.0;

  auto pay = [&](double z) {
    const double excess = sign * (lam_s + z + theta_tail - c);
    const double fut =
        sig_tau_s == 0.0 ? std::max(excess, 0.0) : sig_tau_s * psi_oracle(excess / sig_tau_s);
    return std::max(fut - opt.strike, 0.0);
  };

  CrnFd out;
  out.value.resize(p);
  out.se.resize(p);
  for (int i = 0; i < p; ++i) {
    const double shift = h * f(i);
    long n = 0;
    double mean = 0.0, m2 = 0.0;
    for (int j = 0; j < n_paths; ++j) {
      degday::CounterRng rng(seed, static_cast<std::uint64_t>(j));
      const double z = base_mean + sd * rng.normal();
      const double diff = (pay(z + shift) - pay(z - shift)) / (2.0 * h);
      ++n;
      const double delta = diff - mean;
      mean += delta / static_cast<double>(n);
      m2 += delta * (diff - mean);
    }
    out.value(i) = disc * mean;
    out.se(i) = disc * std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  return out;
}

}  // namespace

TEST_SUITE("options") {

TEST_CASE("conditional law of the future day's deseasonalized temperature") {
  const CarModel model = reference_model();
  StateVector x(3);
  x << 1.0, -0.5, 0.2;
  const degday::ConditionalLaw law = degday::conditional_law(model, 183.0, 213.0, 212.0, x);
  CHECK(law.mean == doctest::Approx(model.f_row(30.0).dot(x)).epsilon(1e-12));
  CHECK(law.variance == doctest::Approx(5.266488040021069 * 5.266488040021069).epsilon(1e-9));

  CHECK_THROWS_AS(degday::conditional_law(model, 183.0, 213.0, 215.0, x),
                  std::invalid_argument);  // tau beyond s
  CHECK_THROWS_AS(degday::conditional_law(model, 213.0, 215.0, 212.0, x),
                  std::invalid_argument);  // t beyond tau
  StateVector wrong(2);
  wrong << 1.0, 2.0;
  CHECK_THROWS_AS(degday::conditional_law(model, 183.0, 213.0, 212.0, wrong),
                  std::invalid_argument);
}

TEST_CASE("zero-strike call reduces to the discounted futures price") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << 0.8, -0.3, 0.1;
  const OptionSpec opt{0.0, 212.0, 2e-4};
  const McEstimate got =
      degday::call_exact_mc(model, ny, Side::Cdd, 183.0, opt, 213.0, x, 100000, 11);
  const double want =
      std::exp(-2e-4 * (212.0 - 183.0)) * degday::fcdd_day(model, ny, 183.0, 213.0, x);
  CHECK(std::abs(got.value - want) < 3.0 * got.se);
  CHECK(got.se > 0.0);
}

TEST_CASE("exact call matches a Gauss-Hermite evaluation of the payoff") {
  // August 2, 2011 cooling-day call struck at 13, exercised August 1, priced
  // 29 days out at the zero state; frozen 200-node reference.
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const OptionSpec opt{13.0, 212.0, 1e-4};
  const McEstimate got = degday::call_exact_mc(model, ny, Side::Cdd, 183.0, opt, 213.0,
                                               StateVector::Zero(3), 200000, 3);
  CHECK(std::abs(got.value - 0.6310806501996726) < 4.0 * got.se);

  // Same number recomputed against the in-test quadrature oracle.
  const double sd = std::sqrt(model.projected_variance(183.0, 212.0, 213.0));
  const double sig = std::sqrt(model.projected_variance(212.0, 213.0, 213.0));
  const double want =
      std::exp(-1e-4 * 29.0) *
      oracles::normal_expectation(
          [&](double z) {
            const double fut = sig * psi_oracle((ny(213.0) + z - 65.0) / sig);
            return std::max(fut - 13.0, 0.0);
          },
          0.0, sd, 200);
  CHECK(want == doctest::Approx(0.6310806501996726).epsilon(1e-9));
  CHECK(std::abs(got.value - want) < 4.0 * got.se);
}

TEST_CASE("exercise at evaluation time degenerates to the intrinsic value") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << 2.0, 0.0, 0.0;
  const OptionSpec opt{5.0, 183.0, 1e-4};
  const McEstimate got =
      degday::call_exact_mc(model, ny, Side::Cdd, 183.0, opt, 213.0, x, 100, 1);
  CHECK(got.value ==
        doctest::Approx(std::max(degday::fcdd_day(model, ny, 183.0, 213.0, x) - 5.0, 0.0))
            .epsilon(1e-12));
  CHECK(got.se == 0.0);
}

TEST_CASE("Monte Carlo runs are deterministic in the seed") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const OptionSpec opt{13.0, 212.0, 1e-4};
  const StateVector zero = StateVector::Zero(3);
  const McEstimate a =
      degday::call_exact_mc(model, ny, Side::Cdd, 183.0, opt, 213.0, zero, 20000, 7);
  const McEstimate b =
      degday::call_exact_mc(model, ny, Side::Cdd, 183.0, opt, 213.0, zero, 20000, 7);
  const McEstimate c =
      degday::call_exact_mc(model, ny, Side::Cdd, 183.0, opt, 213.0, zero, 20000, 8);
  CHECK(a.value == b.value);
  CHECK(a.se == b.se);
  CHECK(a.value != c.value);
}

TEST_CASE("density-weighted Greeks match common-random-number differences") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const OptionSpec opt{13.0, 212.0, 1e-4};
  StateVector x(3);
  x << 1.0, -0.5, 0.2;

  const int paths = 200000;
  const McGreeks got =
      degday::call_greek_density_mc(model, ny, Side::Cdd, 183.0, opt, 213.0, x, paths, 21);
  const CrnFd fd =
      crn_fd_greeks(model, ny, Side::Cdd, 183.0, opt, 213.0, x, paths, 21, 1e-3);
  for (int i = 0; i < 3; ++i) {
    const double tol = 4.0 * std::sqrt(got.se(i) * got.se(i) + fd.se(i) * fd.se(i)) + 1e-12;
    CHECK(std::abs(got.value(i) - fd.value(i)) <= tol);
    CHECK(got.se(i) > 0.0);
  }

  // Shorter horizon, heating side.
  const OptionSpec opt2{2.0, 210.0, 3e-4};
  const McGreeks got2 =
      degday::call_greek_density_mc(model, ny, Side::Hdd, 200.0, opt2, 213.0, x, paths, 22);
  const CrnFd fd2 =
      crn_fd_greeks(model, ny, Side::Hdd, 200.0, opt2, 213.0, x, paths, 22, 1e-3);
  for (int i = 0; i < 3; ++i) {
    const double tol =
        4.0 * std::sqrt(got2.se(i) * got2.se(i) + fd2.se(i) * fd2.se(i)) + 1e-12;
    CHECK(std::abs(got2.value(i) - fd2.value(i)) <= tol);
  }
}

TEST_CASE("approximate call terms, direct scheme") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << 1.0, -0.5, 0.2;
  const double t = 183.0, tau = 212.0, s = 213.0;

  const degday::ApproxCallTerms terms =
      degday::approx_call_terms_day(model, ny, Side::Cdd, t, tau, s, x, Scheme::ApproxX);
  CHECK(terms.d_term ==
        doctest::Approx(ny(s) - 65.0 + model.f_row(s - t).dot(x)).epsilon(1e-12));
  CHECK(terms.s_vol ==
        doctest::Approx(std::sqrt(model.projected_variance(t, tau, s))).epsilon(1e-12));

  const degday::ApproxCallTerms tay = degday::approx_call_terms_day(
      model, ny, Side::Cdd, t, tau, s, x, Scheme::ApproxTaylor);
  const double sig_tau_s = std::sqrt(model.sigma_sq(tau, s));
  CHECK(tay.d_term == doctest::Approx(0.5 * (ny(s) - 65.0) +
                                      sig_tau_s / std::sqrt(2.0 * M_PI) +
                                      0.5 * model.f_row(s - t).dot(x))
                          .epsilon(1e-12));
  CHECK(tay.s_vol == doctest::Approx(0.5 * terms.s_vol).epsilon(1e-14));
}

TEST_CASE("approximate call price: closed form and degenerate limit") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << 1.0, -0.5, 0.2;
  const OptionSpec opt{13.0, 212.0, 1e-4};

  const degday::ApproxCallTerms terms = degday::approx_call_terms_day(
      model, ny, Side::Cdd, 183.0, 212.0, 213.0, x, Scheme::ApproxX);
  const double want = std::exp(-1e-4 * 29.0) * terms.s_vol *
                      psi_oracle((terms.d_term - 13.0) / terms.s_vol);
  CHECK(degday::call_approx(model, ny, Side::Cdd, 183.0, opt, 213.0, x, Scheme::ApproxX) ==
        doctest::Approx(want).epsilon(1e-10));

  // Exercise now: the volatility accumulated over [t, tau] is zero and the
  // price is the discounted positive part of d - K.
  const OptionSpec now{5.0, 183.0, 1e-4};
  const degday::ApproxCallTerms at_now = degday::approx_call_terms_day(
      model, ny, Side::Cdd, 183.0, 183.0, 213.0, x, Scheme::ApproxX);
  CHECK(at_now.s_vol == 0.0);
  CHECK(degday::call_approx(model, ny, Side::Cdd, 183.0, now, 213.0, x, Scheme::ApproxX) ==
        doctest::Approx(std::max(at_now.d_term - 5.0, 0.0)).epsilon(1e-12));
}

TEST_CASE("approximate call equals Monte Carlo on the linearized payoff") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << 1.0, -0.5, 0.2;
  const OptionSpec opt{13.0, 212.0, 1e-4};
  const int paths = 100000;

  for (Scheme scheme : {Scheme::ApproxX, Scheme::ApproxTaylor}) {
    const double closed =
        degday::call_approx(model, ny, Side::Cdd, 183.0, opt, 213.0, x, scheme);
    const McEstimate mc = degday::call_linearized_price_mc(model, ny, Side::Cdd, 183.0, opt,
                                                           213.0, x, scheme, paths, 5);
    CHECK(std::abs(closed - mc.value) < 3.0 * mc.se);
  }

  // Period underlying: August 2011. Only the state risk up to exercise is
  // left in the linearized payoff, so place the strike by the computed
  // anchor and volatility rather than by the futures price scale.
  for (Scheme scheme : {Scheme::ApproxX, Scheme::ApproxTaylor}) {
    const degday::ApproxCallTerms terms = degday::approx_call_terms_period(
        model, ny, Side::Cdd, 183.0, 205.0, 212.0, 243.0, x, scheme);
    const OptionSpec popt{terms.d_term - 0.25 * terms.s_vol, 205.0, 1e-4};
    const double closed = degday::call_approx(model, ny, Side::Cdd, 183.0, popt, 212.0,
                                              243.0, x, scheme);
    const McEstimate mc = degday::call_linearized_price_mc(
        model, ny, Side::Cdd, 183.0, popt, 212.0, 243.0, x, scheme, paths, 6);
    CHECK(mc.se > 0.0);
    CHECK(std::abs(closed - mc.value) < 3.0 * mc.se);
  }
}

TEST_CASE("approximate call Greeks: closed form, differences, Monte Carlo") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << 1.0, -0.5, 0.2;
  const OptionSpec opt{13.0, 212.0, 1e-4};

  const degday::ApproxCallTerms terms = degday::approx_call_terms_day(
      model, ny, Side::Cdd, 183.0, 212.0, 213.0, x, Scheme::ApproxX);
  const degday::SensitivityVector got = degday::call_approx_greeks(
      model, ny, Side::Cdd, 183.0, opt, 213.0, x, Scheme::ApproxX);
  const double tail = oracles::normal_cdf((terms.d_term - 13.0) / terms.s_vol);
  for (int i = 0; i < 3; ++i) {
    CHECK(got(i) == doctest::Approx(std::exp(-1e-4 * 29.0) * tail *
                                    model.f_row(30.0)(i))
                        .epsilon(1e-10));
  }

  // Central differences of the closed form.
  for (Scheme scheme : {Scheme::ApproxX, Scheme::ApproxTaylor}) {
    const degday::SensitivityVector g = degday::call_approx_greeks(
        model, ny, Side::Cdd, 183.0, opt, 213.0, x, scheme);
    for (int i = 0; i < 3; ++i) {
      StateVector up = x, dn = x;
      up(i) += 1e-4;
      dn(i) -= 1e-4;
      const double fd =
          (degday::call_approx(model, ny, Side::Cdd, 183.0, opt, 213.0, up, scheme) -
           degday::call_approx(model, ny, Side::Cdd, 183.0, opt, 213.0, dn, scheme)) /
          2e-4;
      CHECK(std::abs(fd - g(i)) <= 1e-6 * std::max(std::abs(g(i)), 1e-4));
    }
  }

  // Period variant against differences, struck near the money.
  const degday::ApproxCallTerms pterms = degday::approx_call_terms_period(
      model, ny, Side::Cdd, 183.0, 205.0, 212.0, 243.0, x, Scheme::ApproxX);
  const OptionSpec popt{pterms.d_term - 0.25 * pterms.s_vol, 205.0, 1e-4};
  const degday::SensitivityVector pg = degday::call_approx_greeks(
      model, ny, Side::Cdd, 183.0, popt, 212.0, 243.0, x, Scheme::ApproxX);
  for (int i = 0; i < 3; ++i) {
    StateVector up = x, dn = x;
    up(i) += 1e-4;
    dn(i) -= 1e-4;
    const double fd = (degday::call_approx(model, ny, Side::Cdd, 183.0, popt, 212.0, 243.0,
                                           up, Scheme::ApproxX) -
                       degday::call_approx(model, ny, Side::Cdd, 183.0, popt, 212.0, 243.0,
                                           dn, Scheme::ApproxX)) /
                      2e-4;
    CHECK(std::abs(fd - pg(i)) <= 1e-6 * std::max(std::abs(pg(i)), 1e-4));
  }

  // Density-weighted Monte Carlo on the linearized payoff agrees too.
  const McGreeks mc = degday::call_linearized_greek_mc(model, ny, Side::Cdd, 183.0, opt,
                                                       213.0, x, Scheme::ApproxX, 200000, 9);
  const degday::SensitivityVector closed = degday::call_approx_greeks(
      model, ny, Side::Cdd, 183.0, opt, 213.0, x, Scheme::ApproxX);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(mc.value(i) - closed(i)) <= 4.0 * mc.se(i) + 1e-12);
  }
}

TEST_CASE("discounting factors out of the price") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  StateVector x(3);
  x << 1.0, -0.5, 0.2;
  const double dt = 212.0 - 183.0;
  const OptionSpec lo{13.0, 212.0, 1e-4};
  const OptionSpec hi{13.0, 212.0, 5e-3};

  const McEstimate a =
      degday::call_exact_mc(model, ny, Side::Cdd, 183.0, lo, 213.0, x, 5000, 4);
  const McEstimate b =
      degday::call_exact_mc(model, ny, Side::Cdd, 183.0, hi, 213.0, x, 5000, 4);
  CHECK(a.value * std::exp(-(5e-3 - 1e-4) * dt) == doctest::Approx(b.value).epsilon(1e-13));

  const double ca = degday::call_approx(model, ny, Side::Cdd, 183.0, lo, 213.0, x,
                                        Scheme::ApproxTaylor);
  const double cb = degday::call_approx(model, ny, Side::Cdd, 183.0, hi, 213.0, x,
                                        Scheme::ApproxTaylor);
  CHECK(ca * std::exp(-(5e-3 - 1e-4) * dt) == doctest::Approx(cb).epsilon(1e-13));
}

TEST_CASE("input validation") {
  const CarModel model = reference_model();
  const SeasonalFunction ny = ny_profile();
  const StateVector zero = StateVector::Zero(3);

  CHECK_THROWS_AS(degday::call_exact_mc(model, ny, Side::Cdd, 183.0,
                                        OptionSpec{13.0, 212.0, 0.0}, 213.0, zero, 100, 1),
                  std::invalid_argument);  // rate must be positive
  CHECK_THROWS_AS(degday::call_exact_mc(model, ny, Side::Cdd, 183.0,
                                        OptionSpec{13.0, 212.0, -0.01}, 213.0, zero, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(degday::call_exact_mc(model, ny, Side::Cdd, 220.0,
                                        OptionSpec{13.0, 212.0, 1e-4}, 213.0, zero, 100, 1),
                  std::invalid_argument);  // t past exercise
  CHECK_THROWS_AS(degday::call_exact_mc(model, ny, Side::Cdd, 183.0,
                                        OptionSpec{13.0, 214.0, 1e-4}, 213.0, zero, 100, 1),
                  std::invalid_argument);  // exercise past measurement
  CHECK_THROWS_AS(degday::call_exact_mc(model, ny, Side::Cdd, 183.0,
                                        OptionSpec{13.0, 212.0, 1e-4}, 213.0, zero, 1, 1),
                  std::invalid_argument);  // too few paths
  CHECK_THROWS_AS(
      degday::call_greek_density_mc(model, ny, Side::Cdd, 212.0,
                                    OptionSpec{13.0, 212.0, 1e-4}, 213.0, zero, 100, 1),
      std::invalid_argument);  // density weight undefined at tau = t
}

}  // TEST_SUITE
