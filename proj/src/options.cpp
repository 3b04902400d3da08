#include "degday/options.hpp"

#include <cmath>
#include <stdexcept>

#include "degday/quadrature.hpp"
#include "degday/rng.hpp"

namespace degday {

namespace {

double side_sign(Side side) { return side == Side::Cdd ? 1.0 : -1.0; }

double scheme_half(Scheme scheme) {
  if (scheme == Scheme::ApproxX) return 1.0;
  if (scheme == Scheme::ApproxTaylor) return 0.5;
  throw std::invalid_argument("call approximation: scheme must be ApproxX or ApproxTaylor");
}

double indicator_half(double value) {
  if (value > 0.0) return 1.0;
  if (value < 0.0) return 0.0;
  return 0.5;
}

void check_option(const OptionSpec& opt, double t, const char* where) {
  if (!(opt.rate > 0.0) || !std::isfinite(opt.rate)) {
    throw std::invalid_argument(std::string(where) + ": risk-free rate must be > 0");
  }
  if (!std::isfinite(opt.strike)) {
    throw std::invalid_argument(std::string(where) + ": strike must be finite");
  }
  if (!(t <= opt.tau)) {
    throw std::invalid_argument(std::string(where) + ": need t <= tau");
  }
}

// Running mean / variance accumulator (Welford).
class RunningStats {
 public:
  void add(double v) {
    ++n_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (v - mean_);
  }
  double mean() const { return mean_; }
  double se() const {
    if (n_ < 2) return 0.0;
    const double var = m2_ / static_cast<double>(n_ - 1);
    return std::sqrt(var / static_cast<double>(n_));
  }

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace

ConditionalLaw conditional_law(const CarModel& model, double t, double s, double tau,
                               const StateVector& x) {
  if (!(t <= tau && tau <= s)) {
    throw std::invalid_argument("conditional_law: need t <= tau <= s");
  }
  if (x.size() != model.order()) {
    throw std::invalid_argument("conditional_law: state has wrong length");
  }
  ConditionalLaw law;
  law.mean = model.f_row(s - t).dot(x) + model.projected_theta(t, tau, s);
  law.variance = model.projected_variance(t, tau, s);
  return law;
}

McEstimate call_exact_mc(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                         double t, const OptionSpec& opt, double s, const StateVector& x,
                         int n_paths, std::uint64_t seed) {
  check_option(opt, t, "call_exact_mc");
  if (!(opt.tau <= s)) throw std::invalid_argument("call_exact_mc: need tau <= s");
  if (n_paths < 2) throw std::invalid_argument("call_exact_mc: need at least 2 paths");

  const double disc = std::exp(-opt.rate * (opt.tau - t));
  if (opt.tau == t) {
    // Degenerate law: the futures price at exercise is known today.
    const double pay = std::max(fdd_day(model, seasonal, side, t, s, x) - opt.strike, 0.0);
    return {disc * pay, 0.0};
  }

  const ConditionalLaw law = conditional_law(model, t, s, opt.tau, x);
  const double sd = std::sqrt(law.variance);
  const double sig_tau_s = std::sqrt(model.projected_variance(opt.tau, s, s));
  const double theta_tail = model.projected_theta(opt.tau, s, s);
  const double lam_s = seasonal(s);
  const double c = model.threshold();
  const double sign = side_sign(side);

  RunningStats pay_stats;
  for (int j = 0; j < n_paths; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    const double z = law.mean + sd * rng.normal();
    const double excess = sign * (lam_s + z + theta_tail - c);
    const double futures =
        sig_tau_s == 0.0 ? std::max(excess, 0.0) : sig_tau_s * psi(excess / sig_tau_s);
    pay_stats.add(std::max(futures - opt.strike, 0.0));
  }
  return {disc * pay_stats.mean(), disc * pay_stats.se()};
}

McGreeks call_greek_density_mc(const CarModel& model, const SeasonalFunction& seasonal,
                               Side side, double t, const OptionSpec& opt, double s,
                               const StateVector& x, int n_paths, std::uint64_t seed) {
  check_option(opt, t, "call_greek_density_mc");
  if (!(opt.tau <= s)) throw std::invalid_argument("call_greek_density_mc: need tau <= s");
  if (!(opt.tau > t)) {
    throw std::invalid_argument(
        "call_greek_density_mc: the density weight degenerates at tau = t; "
        "use the futures Greek with a payoff indicator instead");
  }
  if (n_paths < 2) throw std::invalid_argument("call_greek_density_mc: need at least 2 paths");

  const double disc = std::exp(-opt.rate * (opt.tau - t));
  const ConditionalLaw law = conditional_law(model, t, s, opt.tau, x);
  const double sd = std::sqrt(law.variance);
  const double sig_tau_s = std::sqrt(model.projected_variance(opt.tau, s, s));
  const double theta_tail = model.projected_theta(opt.tau, s, s);
  const double lam_s = seasonal(s);
  const double c = model.threshold();
  const double sign = side_sign(side);

  RunningStats weighted;
  for (int j = 0; j < n_paths; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    const double z = law.mean + sd * rng.normal();
    const double excess = sign * (lam_s + z + theta_tail - c);
    const double futures =
        sig_tau_s == 0.0 ? std::max(excess, 0.0) : sig_tau_s * psi(excess / sig_tau_s);
    const double pay = std::max(futures - opt.strike, 0.0);
    weighted.add(pay * (z - law.mean) / law.variance);
  }

  const Eigen::VectorXd f = model.f_row(s - t);
  McGreeks out;
  out.value = disc * weighted.mean() * f;
  out.se = disc * weighted.se() * f.cwiseAbs();
  return out;
}

ApproxCallTerms approx_call_terms_day(const CarModel& model, const SeasonalFunction& seasonal,
                                      Side side, double t, double tau, double s,
                                      const StateVector& x, Scheme scheme) {
  if (!(t <= tau && tau <= s)) {
    throw std::invalid_argument("approx_call_terms_day: need t <= tau <= s");
  }
  const double half = scheme_half(scheme);
  const double sign = side_sign(side);
  const ApproxCoefficients at_tau = approx_coeffs_day(model, seasonal, side, tau, s, scheme);
  const Eigen::VectorXd a_t = approx_coeffs_day(model, seasonal, side, t, s, scheme).a_vec;

  ApproxCallTerms terms;
  terms.d_term = at_tau.theta_term + a_t.dot(x) +
                 half * sign * model.projected_theta(t, tau, s);
  terms.s_vol = half * std::sqrt(model.projected_variance(t, tau, s));
  return terms;
}

ApproxCallTerms approx_call_terms_period(const CarModel& model,
                                         const SeasonalFunction& seasonal, Side side,
                                         double t, double tau, double tau1, double tau2,
                                         const StateVector& x, Scheme scheme,
                                         const PeriodRule& rule) {
  if (!(t <= tau && tau <= tau1 && tau1 < tau2)) {
    throw std::invalid_argument("approx_call_terms_period: need t <= tau <= tau1 < tau2");
  }
  const double half = scheme_half(scheme);
  const double sign = side_sign(side);
  const int p = model.order();
  const ApproxCoefficients at_tau =
      approx_coeffs_period(model, seasonal, side, tau, tau1, tau2, scheme, rule);
  const Eigen::VectorXd a_t =
      approx_coeffs_period(model, seasonal, side, t, tau1, tau2, scheme, rule).a_vec;

  // Day-integrated noise kernel a(u, tau1, tau2) e_p, up to the scheme and
  // side factors applied below.
  auto kernel = [&](double u) { return model.f_row_integral(tau1 - u, tau2 - u)(p - 1); };

  double theta_leg = 0.0;
  if (!model.theta().is_zero() && tau > t) {
    theta_leg = half * sign *
                integrate([&](double u) { return model.theta()(u) * kernel(u); }, t, tau,
                          model.theta().breakpoints_in(t, tau));
  }

  double s_sq = 0.0;
  if (tau > t) {
    s_sq = integrate(
        [&](double u) {
          const double k = kernel(u);
          const double sig = model.sigma()(u);
          return sig * sig * k * k;
        },
        t, tau, model.sigma().breakpoints_in(t, tau));
  }

  ApproxCallTerms terms;
  terms.d_term = at_tau.theta_term + a_t.dot(x) + theta_leg;
  terms.s_vol = half * std::sqrt(std::max(s_sq, 0.0));
  return terms;
}

namespace {

double price_from_terms(const ApproxCallTerms& terms, double strike, double disc) {
  if (terms.s_vol == 0.0) return disc * std::max(terms.d_term - strike, 0.0);
  return disc * terms.s_vol * psi((terms.d_term - strike) / terms.s_vol);
}

SensitivityVector greeks_from_terms(const ApproxCallTerms& terms, double strike, double disc,
                                    const Eigen::VectorXd& a_t) {
  if (terms.s_vol == 0.0) return disc * indicator_half(terms.d_term - strike) * a_t;
  return disc * norm_cdf((terms.d_term - strike) / terms.s_vol) * a_t;
}

}  // namespace

double call_approx(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                   double t, const OptionSpec& opt, double s, const StateVector& x,
                   Scheme scheme) {
  check_option(opt, t, "call_approx");
  const ApproxCallTerms terms =
      approx_call_terms_day(model, seasonal, side, t, opt.tau, s, x, scheme);
  return price_from_terms(terms, opt.strike, std::exp(-opt.rate * (opt.tau - t)));
}

double call_approx(const CarModel& model, const SeasonalFunction& seasonal, Side side,
                   double t, const OptionSpec& opt, double tau1, double tau2,
                   const StateVector& x, Scheme scheme, const PeriodRule& rule) {
  check_option(opt, t, "call_approx");
  const ApproxCallTerms terms =
      approx_call_terms_period(model, seasonal, side, t, opt.tau, tau1, tau2, x, scheme, rule);
  return price_from_terms(terms, opt.strike, std::exp(-opt.rate * (opt.tau - t)));
}

SensitivityVector call_approx_greeks(const CarModel& model, const SeasonalFunction& seasonal,
                                     Side side, double t, const OptionSpec& opt, double s,
                                     const StateVector& x, Scheme scheme) {
  check_option(opt, t, "call_approx_greeks");
  const ApproxCallTerms terms =
      approx_call_terms_day(model, seasonal, side, t, opt.tau, s, x, scheme);
  const Eigen::VectorXd a_t = approx_coeffs_day(model, seasonal, side, t, s, scheme).a_vec;
  return greeks_from_terms(terms, opt.strike, std::exp(-opt.rate * (opt.tau - t)), a_t);
}

SensitivityVector call_approx_greeks(const CarModel& model, const SeasonalFunction& seasonal,
                                     Side side, double t, const OptionSpec& opt, double tau1,
                                     double tau2, const StateVector& x, Scheme scheme,
                                     const PeriodRule& rule) {
  check_option(opt, t, "call_approx_greeks");
  const ApproxCallTerms terms =
      approx_call_terms_period(model, seasonal, side, t, opt.tau, tau1, tau2, x, scheme, rule);
  const Eigen::VectorXd a_t =
      approx_coeffs_period(model, seasonal, side, t, tau1, tau2, scheme, rule).a_vec;
  return greeks_from_terms(terms, opt.strike, std::exp(-opt.rate * (opt.tau - t)), a_t);
}

McEstimate call_linearized_price_mc(const CarModel& model, const SeasonalFunction& seasonal,
                                    Side side, double t, const OptionSpec& opt, double s,
                                    const StateVector& x, Scheme scheme, int n_paths,
                                    std::uint64_t seed) {
  check_option(opt, t, "call_linearized_price_mc");
  if (!(opt.tau <= s)) throw std::invalid_argument("call_linearized_price_mc: need tau <= s");
  if (n_paths < 2) throw std::invalid_argument("call_linearized_price_mc: need at least 2 paths");

  const double disc = std::exp(-opt.rate * (opt.tau - t));
  const double half = scheme_half(scheme);
  const double sign = side_sign(side);
  const double intercept =
      approx_coeffs_day(model, seasonal, side, opt.tau, s, scheme).theta_term;
  const ConditionalLaw law = conditional_law(model, t, s, opt.tau, x);
  const double sd = std::sqrt(law.variance);

  RunningStats stats;
  for (int j = 0; j < n_paths; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    const double z = law.mean + sd * rng.normal();
    stats.add(std::max(intercept + half * sign * z - opt.strike, 0.0));
  }
  return {disc * stats.mean(), disc * stats.se()};
}

McEstimate call_linearized_price_mc(const CarModel& model, const SeasonalFunction& seasonal,
                                    Side side, double t, const OptionSpec& opt, double tau1,
                                    double tau2, const StateVector& x, Scheme scheme,
                                    int n_paths, std::uint64_t seed, const PeriodRule& rule) {
  check_option(opt, t, "call_linearized_price_mc");
  if (!(opt.tau <= tau1 && tau1 < tau2)) {
    throw std::invalid_argument("call_linearized_price_mc: need tau <= tau1 < tau2");
  }
  if (n_paths < 2) throw std::invalid_argument("call_linearized_price_mc: need at least 2 paths");

  const double disc = std::exp(-opt.rate * (opt.tau - t));
  const ApproxCoefficients at_tau =
      approx_coeffs_period(model, seasonal, side, opt.tau, tau1, tau2, scheme, rule);

  // Project the exactly sampled state onto the period coefficients: the
  // payoff depends on X(tau) only through the scalar a(tau,.) . X(tau).
  const Eigen::VectorXd mean_x = model.conditional_mean(t, opt.tau, x);
  const Eigen::MatrixXd cov_x = model.conditional_cov(t, opt.tau);
  const double proj_mean = at_tau.a_vec.dot(mean_x);
  const double proj_var = at_tau.a_vec.dot(cov_x * at_tau.a_vec);
  const double proj_sd = std::sqrt(std::max(proj_var, 0.0));

  RunningStats stats;
  for (int j = 0; j < n_paths; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    const double p = proj_mean + proj_sd * rng.normal();
    stats.add(std::max(at_tau.theta_term + p - opt.strike, 0.0));
  }
  return {disc * stats.mean(), disc * stats.se()};
}

McGreeks call_linearized_greek_mc(const CarModel& model, const SeasonalFunction& seasonal,
                                  Side side, double t, const OptionSpec& opt, double s,
                                  const StateVector& x, Scheme scheme, int n_paths,
                                  std::uint64_t seed) {
  check_option(opt, t, "call_linearized_greek_mc");
  if (!(opt.tau <= s)) throw std::invalid_argument("call_linearized_greek_mc: need tau <= s");
  if (!(opt.tau > t)) {
    throw std::invalid_argument("call_linearized_greek_mc: need tau > t");
  }
  if (n_paths < 2) throw std::invalid_argument("call_linearized_greek_mc: need at least 2 paths");

  const double disc = std::exp(-opt.rate * (opt.tau - t));
  const double half = scheme_half(scheme);
  const double sign = side_sign(side);
  const double intercept =
      approx_coeffs_day(model, seasonal, side, opt.tau, s, scheme).theta_term;
  const ConditionalLaw law = conditional_law(model, t, s, opt.tau, x);
  const double sd = std::sqrt(law.variance);

  RunningStats weighted;
  for (int j = 0; j < n_paths; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    const double z = law.mean + sd * rng.normal();
    const double pay = std::max(intercept + half * sign * z - opt.strike, 0.0);
    weighted.add(pay * (z - law.mean) / law.variance);
  }

  const Eigen::VectorXd f = model.f_row(s - t);
  McGreeks out;
  out.value = disc * weighted.mean() * f;
  out.se = disc * weighted.se() * f.cwiseAbs();
  return out;
}

}  // namespace degday
