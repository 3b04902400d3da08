#pragma once

#include "degday/car_model.hpp"
#include "degday/normal.hpp"
#include "degday/seasonal.hpp"
#include "degday/types.hpp"

namespace degday {

// Resolution of the measurement-period integrals: each day is covered by
// panels_per_day 4-point Gauss-Legendre panels.
struct PeriodRule {
  int panels_per_day = 1;
};

// Exact futures price on the index of a single measurement day s, seen from
// t <= s with state x:
//   CDD:  Sigma(t,s) * psi((m_theta - c) / Sigma(t,s))
//   HDD:  Sigma(t,s) * psi((c - m_theta) / Sigma(t,s))
// At s = t (Sigma = 0) the continuous limit max(+-(m - c), 0) is returned.
double fdd_day(const CarModel& model, const SeasonalFunction& seasonal, Side side,
               double t, double s, const StateVector& x);
double fcdd_day(const CarModel& model, const SeasonalFunction& seasonal, double t,
                double s, const StateVector& x);
double fhdd_day(const CarModel& model, const SeasonalFunction& seasonal, double t,
                double s, const StateVector& x);

// Futures price over the measurement period [tau1, tau2] (t <= tau1 < tau2):
// the integral of the day prices over the period.
double fdd_period(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                  double t, double tau1, double tau2, const StateVector& x,
                  const PeriodRule& rule = {});
double fcdd_period(const CarModel& model, const SeasonalFunction& seasonal, double t,
                   double tau1, double tau2, const StateVector& x,
                   const PeriodRule& rule = {});
double fhdd_period(const CarModel& model, const SeasonalFunction& seasonal, double t,
                   double tau1, double tau2, const StateVector& x,
                   const PeriodRule& rule = {});

// Coefficients of a linearized futures price: price ~ theta_term + a_vec . x.
// For the Taylor scheme a_vec is exactly half the ApproxX a_vec at the same
// arguments.
struct ApproxCoefficients {
  double theta_term;      // Theta
  Eigen::VectorXd a_vec;  // a, length p
};

ApproxCoefficients approx_coeffs_day(const CarModel& model, const SeasonalFunction& seasonal,
                                     Side side, double t, double s, Scheme scheme);

ApproxCoefficients approx_coeffs_period(const CarModel& model,
                                        const SeasonalFunction& seasonal, Side side,
                                        double t, double tau1, double tau2, Scheme scheme,
                                        const PeriodRule& rule = {});

// Evaluates the linearized price Theta + a . x.
double fdd_approx(const ApproxCoefficients& coeffs, const StateVector& x);

}  // namespace degday
