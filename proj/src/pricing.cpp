#include "degday/pricing.hpp"

#include <cmath>
#include <stdexcept>

#include "degday/quadrature.hpp"

namespace degday {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double side_sign(Side side) { return side == Side::Cdd ? 1.0 : -1.0; }

int period_panels(double tau1, double tau2, const PeriodRule& rule) {
  if (rule.panels_per_day < 1) {
    throw std::invalid_argument("PeriodRule: panels_per_day must be >= 1");
  }
  const double days = tau2 - tau1;
  const int panels = static_cast<int>(std::ceil(days * rule.panels_per_day));
  return std::max(panels, 1);
}

void check_period(double t, double tau1, double tau2, const char* where) {
  if (!(t <= tau1 && tau1 < tau2)) {
    throw std::invalid_argument(std::string(where) + ": need t <= tau1 < tau2");
  }
}

}  // namespace

double fdd_day(const CarModel& model, const SeasonalFunction& seasonal, Side side,
               double t, double s, const StateVector& x) {
  if (!(t <= s)) throw std::invalid_argument("fdd_day: need t <= s");
  const double m = m_theta(model, seasonal, t, s, x);
  const double signed_excess = side_sign(side) * (m - model.threshold());
  if (s == t) return std::max(signed_excess, 0.0);
  const double sig = std::sqrt(model.sigma_sq(t, s));
  return sig * psi(signed_excess / sig);
}

double fcdd_day(const CarModel& model, const SeasonalFunction& seasonal, double t,
                double s, const StateVector& x) {
  return fdd_day(model, seasonal, Side::Cdd, t, s, x);
}

double fhdd_day(const CarModel& model, const SeasonalFunction& seasonal, double t,
                double s, const StateVector& x) {
  return fdd_day(model, seasonal, Side::Hdd, t, s, x);
}

double fdd_period(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                  double t, double tau1, double tau2, const StateVector& x,
                  const PeriodRule& rule) {
  check_period(t, tau1, tau2, "fdd_period");
  auto day_price = [&](double s) { return fdd_day(model, seasonal, side, t, s, x); };
  return integrate_panels(day_price, tau1, tau2, period_panels(tau1, tau2, rule));
}

double fcdd_period(const CarModel& model, const SeasonalFunction& seasonal, double t,
                   double tau1, double tau2, const StateVector& x, const PeriodRule& rule) {
  return fdd_period(model, seasonal, Side::Cdd, t, tau1, tau2, x, rule);
}

double fhdd_period(const CarModel& model, const SeasonalFunction& seasonal, double t,
                   double tau1, double tau2, const StateVector& x, const PeriodRule& rule) {
  return fdd_period(model, seasonal, Side::Hdd, t, tau1, tau2, x, rule);
}

ApproxCoefficients approx_coeffs_day(const CarModel& model, const SeasonalFunction& seasonal,
                                     Side side, double t, double s, Scheme scheme) {
  if (!(t <= s)) throw std::invalid_argument("approx_coeffs_day: need t <= s");
  const double sign = side_sign(side);
  const double drift = sign * (seasonal(s) - model.threshold() + model.projected_theta(t, s, s));
  ApproxCoefficients coeffs;
  switch (scheme) {
    case Scheme::ApproxX:
      coeffs.a_vec = sign * model.f_row(s - t);
      coeffs.theta_term = drift;
      break;
    case Scheme::ApproxTaylor:
      // Half the ApproxX slope plus the Sigma/sqrt(2*pi) level shift.
      coeffs.a_vec = 0.5 * (sign * model.f_row(s - t));
      coeffs.theta_term = 0.5 * drift + std::sqrt(model.sigma_sq(t, s)) * kInvSqrt2Pi;
      break;
    default:
      throw std::invalid_argument("approx_coeffs_day: scheme must be ApproxX or ApproxTaylor");
  }
  return coeffs;
}

ApproxCoefficients approx_coeffs_period(const CarModel& model,
                                        const SeasonalFunction& seasonal, Side side,
                                        double t, double tau1, double tau2, Scheme scheme,
                                        const PeriodRule& rule) {
  check_period(t, tau1, tau2, "approx_coeffs_period");
  if (scheme != Scheme::ApproxX && scheme != Scheme::ApproxTaylor) {
    throw std::invalid_argument("approx_coeffs_period: scheme must be ApproxX or ApproxTaylor");
  }
  const double sign = side_sign(side);
  const int panels = period_panels(tau1, tau2, rule);

  // The slope integrates in closed form through the eigendecomposition; only
  // the drift term needs quadrature over the measurement period.
  Eigen::VectorXd a_x = sign * model.f_row_integral(tau1 - t, tau2 - t);

  auto day_drift = [&](double s) {
    return sign * (seasonal(s) - model.threshold() + model.projected_theta(t, s, s));
  };

  ApproxCoefficients coeffs;
  if (scheme == Scheme::ApproxX) {
    coeffs.a_vec = a_x;
    coeffs.theta_term = integrate_panels(day_drift, tau1, tau2, panels);
  } else {
    coeffs.a_vec = 0.5 * a_x;
    auto taylor_drift = [&](double s) {
      return 0.5 * day_drift(s) + std::sqrt(model.sigma_sq(t, s)) * kInvSqrt2Pi;
    };
    coeffs.theta_term = integrate_panels(taylor_drift, tau1, tau2, panels);
  }
  return coeffs;
}

double fdd_approx(const ApproxCoefficients& coeffs, const StateVector& x) {
  if (coeffs.a_vec.size() != x.size()) {
    throw std::invalid_argument("fdd_approx: dimension mismatch between coefficients and state");
  }
  return coeffs.theta_term + coeffs.a_vec.dot(x);
}

}  // namespace degday
