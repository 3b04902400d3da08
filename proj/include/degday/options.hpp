#pragma once

#include <cstdint>

#include "degday/pricing.hpp"
#include "degday/types.hpp"

namespace degday {

// Call option terms common to day and period underlyings: strike on the
// accumulated index, exercise time, and a per-day risk-free rate (> 0).
struct OptionSpec {
  double strike;
  double tau;
  double rate;
};

// Law of Z = e_1' e^{A(s - tau)} X(tau) given X(t) = x: the part of the
// measurement-day mean temperature that is still random at exercise.
struct ConditionalLaw {
  double mean;
  double variance;
};

// Note the argument order: measurement day s, then exercise time tau.
ConditionalLaw conditional_law(const CarModel& model, double t, double s, double tau,
                               const StateVector& x);

struct McEstimate {
  double value;
  double se;
};

struct McGreeks {
  SensitivityVector value;
  Eigen::VectorXd se;
};

// Monte Carlo price of a call on the day-s futures, exercised at tau:
// e^{-r(tau-t)} E[max(F(tau, s) - K, 0)] with F evaluated by the exact day
// formula at Z drawn from its conditional law (no time discretization).
// Deterministic in (seed, n_paths); the standard error is always reported.
McEstimate call_exact_mc(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                         double t, const OptionSpec& opt, double s, const StateVector& x,
                         int n_paths, std::uint64_t seed);

// Density-approach (likelihood-ratio) Greek of the same option: component i is
// e^{-r(tau-t)} E[max(F - K, 0) * (Z - mean)/variance] * f_i(s - t), using the
// same per-path streams as call_exact_mc. Requires tau > t (the weight
// degenerates at tau = t; use dfdd_day with a payoff indicator instead).
McGreeks call_greek_density_mc(const CarModel& model, const SeasonalFunction& seasonal,
                               Side side, double t, const OptionSpec& opt, double s,
                               const StateVector& x, int n_paths, std::uint64_t seed);

// Closed-form terms of the linearized call: d (forward-adjusted moneyness
// anchor) and the volatility S of the linearized futures over [t, tau].
// S = 0 iff tau = t.
struct ApproxCallTerms {
  double d_term;
  double s_vol;
};

ApproxCallTerms approx_call_terms_day(const CarModel& model, const SeasonalFunction& seasonal,
                                      Side side, double t, double tau, double s,
                                      const StateVector& x, Scheme scheme);

ApproxCallTerms approx_call_terms_period(const CarModel& model,
                                         const SeasonalFunction& seasonal, Side side,
                                         double t, double tau, double tau1, double tau2,
                                         const StateVector& x, Scheme scheme,
                                         const PeriodRule& rule = {});

// Closed-form price of a call on the linearized futures,
// e^{-r(tau-t)} S psi((d - K)/S); at S = 0 the degenerate limit
// e^{-r(tau-t)} max(d - K, 0). scheme selects the linearization.
double call_approx(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                   double t, const OptionSpec& opt, double s, const StateVector& x,
                   Scheme scheme);
double call_approx(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                   double t, const OptionSpec& opt, double tau1, double tau2,
                   const StateVector& x, Scheme scheme, const PeriodRule& rule = {});

// Gradient of call_approx: e^{-r(tau-t)} Phi((d - K)/S) a(t, .), constant
// times the linearized-futures coefficients. At S = 0 (tau = t) Phi is
// replaced by the subgradient indicator 1{d > K}, 1/2 at d = K.
SensitivityVector call_approx_greeks(const CarModel& model, const SeasonalFunction& seasonal,
                                     Side side, double t, const OptionSpec& opt, double s,
                                     const StateVector& x, Scheme scheme);
SensitivityVector call_approx_greeks(const CarModel& model, const SeasonalFunction& seasonal,
                                     Side side, double t, const OptionSpec& opt, double tau1,
                                     double tau2, const StateVector& x, Scheme scheme,
                                     const PeriodRule& rule = {});

// Validation hooks: Monte Carlo over the exactly sampled state with the
// LINEARIZED payoff max(Theta(tau,.) + a(tau,.) X(tau) - K, 0). Consistent
// with call_approx by construction, so the two must agree to MC error; used
// to cross-check the closed form end to end.
McEstimate call_linearized_price_mc(const CarModel& model, const SeasonalFunction& seasonal,
                                    Side side, double t, const OptionSpec& opt, double s,
                                    const StateVector& x, Scheme scheme, int n_paths,
                                    std::uint64_t seed);
McEstimate call_linearized_price_mc(const CarModel& model, const SeasonalFunction& seasonal,
                                    Side side, double t, const OptionSpec& opt, double tau1,
                                    double tau2, const StateVector& x, Scheme scheme,
                                    int n_paths, std::uint64_t seed,
                                    const PeriodRule& rule = {});

// Density-approach Greek of the linearized day payoff; converges to
// call_approx_greeks and exercises the same weight machinery as
// call_greek_density_mc.
McGreeks call_linearized_greek_mc(const CarModel& model, const SeasonalFunction& seasonal,
                                  Side side, double t, const OptionSpec& opt, double s,
                                  const StateVector& x, Scheme scheme, int n_paths,
                                  std::uint64_t seed);

}  // namespace degday
