#include "degday/car_model.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "degday/errors.hpp"
#include "degday/quadrature.hpp"
#include "degday/rng.hpp"
#include "degday/seasonal.hpp"

namespace degday {

namespace {

void require_finite_nonneg(double u, const char* what) {
  if (!std::isfinite(u) || u < 0.0) {
    throw std::invalid_argument(std::string(what) + ": time lag must be finite and >= 0");
  }
}

}  // namespace

Eigen::MatrixXd CarModel::companion(std::span<const double> last_row) {
  const int p = static_cast<int>(last_row.size());
  if (p < 1) throw std::invalid_argument("companion: empty coefficient row");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i + 1 < p; ++i) A(i, i + 1) = 1.0;
  for (int j = 0; j < p; ++j) A(p - 1, j) = last_row[static_cast<std::size_t>(j)];
  return A;
}

CarModel::CarModel(Eigen::MatrixXd A, PiecewiseConstant sigma, PiecewiseConstant theta,
                   double c)
    : p_(static_cast<int>(A.rows())),
      A_(std::move(A)),
      sigma_(std::move(sigma)),
      theta_(std::move(theta)),
      c_(c) {
  if (p_ < 1 || A_.cols() != p_) {
    throw std::invalid_argument("CarModel: A must be square and non-empty");
  }
  if (!A_.allFinite()) throw std::invalid_argument("CarModel: A has non-finite entries");
  if (!std::isfinite(c_)) throw std::invalid_argument("CarModel: threshold must be finite");

  // Companion structure: sub-identity in rows 1..p-1, coefficients in row p.
  for (int i = 0; i + 1 < p_; ++i) {
    for (int j = 0; j < p_; ++j) {
      const double expected = (j == i + 1) ? 1.0 : 0.0;
      if (A_(i, j) != expected) {
        std::ostringstream msg;
        msg << "CarModel: A is not in companion form at (" << i + 1 << "," << j + 1 << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }

  if (sigma_.min_value() <= 0.0) {
    throw std::invalid_argument("CarModel: sigma must be strictly positive");
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(A_);
  if (solver.info() != Eigen::Success) {
    throw StationarityError("CarModel: eigendecomposition of A failed");
  }
  lam_ = solver.eigenvalues();
  V_ = solver.eigenvectors();

  for (int k = 0; k < p_; ++k) {
    if (!(lam_(k).real() < -1e-12)) {
      std::ostringstream msg;
      msg << "CarModel: stationarity requires strictly negative eigenvalue real parts; "
          << "eigenvalue " << k + 1 << " has Re = " << lam_(k).real();
      throw StationarityError(msg.str());
    }
    for (int j = k + 1; j < p_; ++j) {
      if (std::abs(lam_(k) - lam_(j)) < 1e-9) {
        throw StationarityError(
            "CarModel: eigenvalues of A must be distinct (pairwise gap >= 1e-9)");
      }
    }
  }

  Vinv_ = V_.inverse();

  row_coef_.resize(p_, p_);
  col_coef_.resize(p_, p_);
  for (int k = 0; k < p_; ++k) {
    for (int i = 0; i < p_; ++i) {
      row_coef_(k, i) = V_(0, k) * Vinv_(k, i);
      col_coef_(k, i) = V_(i, k) * Vinv_(k, p_ - 1);
    }
  }

  // Cross-check the spectral backend against scaling-and-squaring Pade. The
  // two are computed by unrelated algorithms, so agreement here certifies the
  // cached decomposition.
  for (double u : {0.5, 1.0, 5.0, 20.0}) {
    Eigen::MatrixXd spectral = mat_exp(u);
    Eigen::MatrixXd pade = (A_ * u).exp();
    const double diff = (spectral - pade).cwiseAbs().maxCoeff();
    if (!(diff <= 1e-10)) {
      std::ostringstream msg;
      msg << "CarModel: matrix exponential backends disagree at u=" << u << " (max diff "
          << diff << ")";
      throw StationarityError(msg.str());
    }
  }
}

Eigen::MatrixXd CarModel::mat_exp(double u) const {
  require_finite_nonneg(u, "mat_exp");
  // The spectral product V e^{lam 0} V^-1 leaves ~1e-16 residue; return the
  // exact identity so the s = t collapse keeps its exact subgradients.
  if (u == 0.0) return Eigen::MatrixXd::Identity(p_, p_);
  Eigen::VectorXcd e(p_);
  for (int k = 0; k < p_; ++k) e(k) = std::exp(lam_(k) * u);
  return (V_ * e.asDiagonal() * Vinv_).real();
}

double CarModel::f_kernel(double u, int i) const {
  require_finite_nonneg(u, "f_kernel");
  if (i < 1 || i > p_) throw std::invalid_argument("f_kernel: index out of range");
  if (u == 0.0) return i == 1 ? 1.0 : 0.0;
  std::complex<double> acc = 0.0;
  for (int k = 0; k < p_; ++k) acc += row_coef_(k, i - 1) * std::exp(lam_(k) * u);
  return acc.real();
}

Eigen::VectorXd CarModel::f_row(double u) const {
  require_finite_nonneg(u, "f_row");
  if (u == 0.0) return Eigen::VectorXd::Unit(p_, 0);
  Eigen::VectorXd out(p_);
  Eigen::VectorXcd e(p_);
  for (int k = 0; k < p_; ++k) e(k) = std::exp(lam_(k) * u);
  for (int i = 0; i < p_; ++i) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < p_; ++k) acc += row_coef_(k, i) * e(k);
    out(i) = acc.real();
  }
  return out;
}

Eigen::VectorXd CarModel::f_row_integral(double u1, double u2) const {
  require_finite_nonneg(u1, "f_row_integral");
  require_finite_nonneg(u2, "f_row_integral");
  // int_{u1}^{u2} e^{lam u} du = (e^{lam u2} - e^{lam u1}) / lam; lam != 0 by
  // the stationarity invariant.
  Eigen::VectorXcd e(p_);
  for (int k = 0; k < p_; ++k) {
    e(k) = (std::exp(lam_(k) * u2) - std::exp(lam_(k) * u1)) / lam_(k);
  }
  Eigen::VectorXd out(p_);
  for (int i = 0; i < p_; ++i) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < p_; ++k) acc += row_coef_(k, i) * e(k);
    out(i) = acc.real();
  }
  return out;
}

Eigen::VectorXd CarModel::g_col(double u) const {
  require_finite_nonneg(u, "g_col");
  Eigen::VectorXd out(p_);
  Eigen::VectorXcd e(p_);
  for (int k = 0; k < p_; ++k) e(k) = std::exp(lam_(k) * u);
  for (int i = 0; i < p_; ++i) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < p_; ++k) acc += col_coef_(k, i) * e(k);
    out(i) = acc.real();
  }
  return out;
}

void CarModel::check_times(double t, double tau, double s, const char* where) const {
  if (!(std::isfinite(t) && std::isfinite(tau) && std::isfinite(s))) {
    throw std::invalid_argument(std::string(where) + ": non-finite time");
  }
  if (!(t <= tau && tau <= s)) {
    throw std::invalid_argument(std::string(where) + ": need t <= tau <= s");
  }
}

double CarModel::sigma_sq(double t, double s) const {
  return projected_variance(t, s, s);
}

double CarModel::projected_variance(double t, double tau, double s) const {
  check_times(t, tau, s, "projected_variance");
  if (tau == t) return 0.0;
  auto integrand = [this, s](double u) {
    const double fp = f_kernel(s - u, p_);
    const double sig = sigma_(u);
    return fp * fp * sig * sig;
  };
  return integrate(integrand, t, tau, sigma_.breakpoints_in(t, tau));
}

double CarModel::projected_theta(double t, double tau, double s) const {
  check_times(t, tau, s, "projected_theta");
  if (tau == t || theta_.is_zero()) return 0.0;
  auto integrand = [this, s](double u) { return f_kernel(s - u, p_) * theta_(u); };
  return integrate(integrand, t, tau, theta_.breakpoints_in(t, tau));
}

Eigen::VectorXd CarModel::conditional_mean(double t, double tau, const StateVector& x) const {
  check_times(t, tau, tau, "conditional_mean");
  if (x.size() != p_) throw std::invalid_argument("conditional_mean: state has wrong length");
  Eigen::VectorXd mean = mat_exp(tau - t) * x;
  if (!theta_.is_zero() && tau > t) {
    for (int i = 0; i < p_; ++i) {
      auto integrand = [this, tau, i](double u) { return g_col(tau - u)(i) * theta_(u); };
      mean(i) += integrate(integrand, t, tau, theta_.breakpoints_in(t, tau));
    }
  }
  return mean;
}

Eigen::MatrixXd CarModel::conditional_cov(double t, double tau) const {
  check_times(t, tau, tau, "conditional_cov");
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p_, p_);
  if (tau == t) return cov;
  for (int i = 0; i < p_; ++i) {
    for (int j = i; j < p_; ++j) {
      auto integrand = [this, tau, i, j](double u) {
        const Eigen::VectorXd g = g_col(tau - u);
        const double sig = sigma_(u);
        return g(i) * g(j) * sig * sig;
      };
      cov(i, j) = integrate(integrand, t, tau, sigma_.breakpoints_in(t, tau));
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

std::vector<StateVector> CarModel::simulate_state(double t, double tau, const StateVector& x,
                                                  int n_paths, std::uint64_t seed) const {
  check_times(t, tau, tau, "simulate_state");
  if (x.size() != p_) throw std::invalid_argument("simulate_state: state has wrong length");
  if (n_paths < 1) throw std::invalid_argument("simulate_state: need at least one path");

  std::vector<StateVector> paths;
  paths.reserve(static_cast<std::size_t>(n_paths));

  if (tau == t) {
    // Degenerate law: every path is the current state, exactly.
    paths.assign(static_cast<std::size_t>(n_paths), x);
    return paths;
  }

  const Eigen::VectorXd mean = conditional_mean(t, tau, x);
  const Eigen::MatrixXd cov = conditional_cov(t, tau);

  // Symmetric square root via the eigendecomposition of the covariance;
  // robust to the near-singular covariances short horizons produce.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw StationarityError("simulate_state: covariance eigendecomposition failed");
  }
  Eigen::VectorXd sqrt_vals = es.eigenvalues();
  for (int i = 0; i < p_; ++i) sqrt_vals(i) = std::sqrt(std::max(sqrt_vals(i), 0.0));
  const Eigen::MatrixXd root = es.eigenvectors() * sqrt_vals.asDiagonal();

  Eigen::VectorXd z(p_);
  for (int j = 0; j < n_paths; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    for (int i = 0; i < p_; ++i) z(i) = rng.normal();
    paths.push_back(mean + root * z);
  }
  return paths;
}

double m_theta(const CarModel& model, const SeasonalFunction& seasonal, double t, double s,
               const StateVector& x) {
  if (!(t <= s)) throw std::invalid_argument("m_theta: need t <= s");
  if (x.size() != model.order()) throw std::invalid_argument("m_theta: state has wrong length");
  return seasonal(s) + model.f_row(s - t).dot(x) + model.projected_theta(t, s, s);
}

}  // namespace degday
