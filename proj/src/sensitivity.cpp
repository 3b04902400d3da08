#include "degday/sensitivity.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "degday/normal.hpp"

namespace degday {

namespace {

double side_sign(Side side) { return side == Side::Cdd ? 1.0 : -1.0; }

double indicator_half(double value) {
  if (value > 0.0) return 1.0;
  if (value < 0.0) return 0.0;
  return 0.5;
}

}  // namespace

SensitivityVector dfdd_day(const CarModel& model, const SeasonalFunction& seasonal,
                           Side side, double t, double s, const StateVector& x) {
  if (!(t <= s)) throw std::invalid_argument("dfdd_day: need t <= s");
  const double sign = side_sign(side);
  const double m = m_theta(model, seasonal, t, s, x);
  const double signed_excess = sign * (m - model.threshold());
  if (s == t) {
    return indicator_half(signed_excess) * sign * model.f_row(0.0);
  }
  const double sig = std::sqrt(model.sigma_sq(t, s));
  return norm_cdf(signed_excess / sig) * sign * model.f_row(s - t);
}

SensitivityVector dfcdd_day(const CarModel& model, const SeasonalFunction& seasonal,
                            double t, double s, const StateVector& x) {
  return dfdd_day(model, seasonal, Side::Cdd, t, s, x);
}

SensitivityVector dfdd_period(const CarModel& model, const SeasonalFunction& seasonal,
                              Side side, double t, double tau1, double tau2,
                              const StateVector& x, const PeriodRule& rule) {
  if (!(t <= tau1 && tau1 < tau2)) {
    throw std::invalid_argument("dfdd_period: need t <= tau1 < tau2");
  }
  if (rule.panels_per_day < 1) {
    throw std::invalid_argument("dfdd_period: panels_per_day must be >= 1");
  }

  // Same per-day Gauss-Legendre panels as the period price, applied to the
  // vector-valued integrand Phi(z(s)) * f(s - t).
  constexpr std::array<double, 2> nodes = {0.3399810435848563, 0.8611363115940526};
  constexpr std::array<double, 2> weights = {0.6521451548625461, 0.3478548451374538};

  const int panels = std::max(
      static_cast<int>(std::ceil((tau2 - tau1) * rule.panels_per_day)), 1);
  const double width = (tau2 - tau1) / panels;

  auto day_greek = [&](double s) -> Eigen::VectorXd {
    return dfdd_day(model, seasonal, side, t, s, x);
  };

  Eigen::VectorXd total = Eigen::VectorXd::Zero(model.order());
  for (int i = 0; i < panels; ++i) {
    const double center = tau1 + (i + 0.5) * width;
    const double half = 0.5 * width;
    for (int j = 0; j < 2; ++j) {
      total += weights[j] * half *
               (day_greek(center - half * nodes[j]) + day_greek(center + half * nodes[j]));
    }
  }
  return total;
}

SensitivityVector dfcdd_period(const CarModel& model, const SeasonalFunction& seasonal,
                               double t, double tau1, double tau2, const StateVector& x,
                               const PeriodRule& rule) {
  return dfdd_period(model, seasonal, Side::Cdd, t, tau1, tau2, x, rule);
}

SensitivityVector dapprox(const ApproxCoefficients& coeffs) { return coeffs.a_vec; }

SensitivityVector fd_gradient(const std::function<double(const StateVector&)>& price_fn,
                              const StateVector& x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("fd_gradient: step must be finite and > 0");
  }
  SensitivityVector grad(x.size());
  StateVector bumped = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    bumped(i) = x(i) + h;
    const double up = price_fn(bumped);
    bumped(i) = x(i) - h;
    const double down = price_fn(bumped);
    bumped(i) = x(i);
    if (!(std::isfinite(up) && std::isfinite(down))) {
      throw std::invalid_argument("fd_gradient: price function returned a non-finite value");
    }
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

RelativeErrorReport relative_error_report(const SensitivityVector& exact,
                                          const SensitivityVector& approx) {
  if (exact.size() != approx.size()) {
    throw std::invalid_argument("relative_error_report: length mismatch");
  }
  RelativeErrorReport report;
  report.value.resize(exact.size());
  report.is_relative.resize(static_cast<std::size_t>(exact.size()));
  for (Eigen::Index i = 0; i < exact.size(); ++i) {
    const double diff = std::abs(approx(i) - exact(i));
    if (std::abs(exact(i)) > 1e-12) {
      report.value(i) = 100.0 * diff / std::abs(exact(i));
      report.is_relative[static_cast<std::size_t>(i)] = true;
    } else {
      // Relative error is undefined against a (numerically) zero reference;
      // report the absolute difference and flag it.
      report.value(i) = diff;
      report.is_relative[static_cast<std::size_t>(i)] = false;
    }
  }
  return report;
}

}  // namespace degday
