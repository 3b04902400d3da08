#pragma once

#include <functional>
#include <vector>

#include "degday/pricing.hpp"
#include "degday/types.hpp"

namespace degday {

// Analytic day-futures Greeks: component i of the CDD result is
// Phi((m_theta - c)/Sigma) * f_i(s - t); HDD carries the mirrored sign.
// At s = t the price is max(+-(m - c), 0), so the gradient uses the
// subgradient convention 1{m > c} (CDD) with value 1/2 exactly at m = c.
SensitivityVector dfdd_day(const CarModel& model, const SeasonalFunction& seasonal,
                           Side side, double t, double s, const StateVector& x);
SensitivityVector dfcdd_day(const CarModel& model, const SeasonalFunction& seasonal,
                            double t, double s, const StateVector& x);

// Period-futures Greeks: component i integrates the day Greek over the
// measurement period, Int Phi(z(s)) f_i(s-t) ds for CDD.
SensitivityVector dfdd_period(const CarModel& model, const SeasonalFunction& seasonal,
                              Side side, double t, double tau1, double tau2,
                              const StateVector& x, const PeriodRule& rule = {});
SensitivityVector dfcdd_period(const CarModel& model, const SeasonalFunction& seasonal,
                               double t, double tau1, double tau2, const StateVector& x,
                               const PeriodRule& rule = {});

// Gradient of a linearized price: the coefficient vector itself, independent
// of the state.
SensitivityVector dapprox(const ApproxCoefficients& coeffs);

// Central-difference gradient oracle, (f(x + h e_i) - f(x - h e_i)) / 2h.
SensitivityVector fd_gradient(const std::function<double(const StateVector&)>& price_fn,
                              const StateVector& x, double h);

// Componentwise comparison of two sensitivity vectors. Where |exact| > 1e-12
// the entry is the relative error in percent, 100*|approx - exact|/|exact|;
// elsewhere the relative error is undefined and the entry holds the absolute
// difference instead, flagged by is_relative = false.
struct RelativeErrorReport {
  Eigen::VectorXd value;
  std::vector<bool> is_relative;
};

RelativeErrorReport relative_error_report(const SensitivityVector& exact,
                                          const SensitivityVector& approx);

}  // namespace degday
