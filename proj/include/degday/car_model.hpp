#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "degday/piecewise.hpp"
#include "degday/types.hpp"

namespace degday {

// CAR(p) dynamics: dX(t) = A X(t) dt + sigma(t) e_p dB(t) with companion
// drift matrix A. The first coordinate of X is the deseasonalized temperature.
//
// Construction validates the companion structure, requires sigma > 0, and
// requires the eigenvalues of A to be distinct with strictly negative real
// part (stationarity); violations throw StationarityError or
// std::invalid_argument. The eigendecomposition computed here backs all
// matrix-exponential queries and is cross-checked against an independent
// scaling-and-squaring (Pade) evaluation at construction time.
class CarModel {
 public:
  CarModel(Eigen::MatrixXd A, PiecewiseConstant sigma,
           PiecewiseConstant theta = PiecewiseConstant(0.0), double c = 65.0);

  // Builds the p x p companion matrix whose last row is the given
  // coefficient row (sub-identity above it).
  static Eigen::MatrixXd companion(std::span<const double> last_row);

  int order() const { return p_; }
  double threshold() const { return c_; }
  const Eigen::MatrixXd& drift() const { return A_; }
  const PiecewiseConstant& sigma() const { return sigma_; }
  const PiecewiseConstant& theta() const { return theta_; }
  const Eigen::VectorXcd& eigenvalues() const { return lam_; }

  // e^{Au}, u >= 0.
  Eigen::MatrixXd mat_exp(double u) const;

  // f_i(u) = e_1' e^{Au} e_i for i = 1..p: the weight of state component i in
  // the conditional mean of the first coordinate u days ahead.
  double f_kernel(double u, int i) const;

  // All f_i(u) at once, as a vector.
  Eigen::VectorXd f_row(double u) const;

  // Componentwise integral of f over [u1, u2], in closed form from the
  // eigendecomposition.
  Eigen::VectorXd f_row_integral(double u1, double u2) const;

  // g_i(u) = e_i' e^{Au} e_p: response of component i to a noise impulse.
  Eigen::VectorXd g_col(double u) const;

  // Sigma^2(t, s) = int_t^s f_p(s-u)^2 sigma(u)^2 du: variance of the first
  // coordinate at s conditional on time t.
  double sigma_sq(double t, double s) const;

  // int_t^tau f_p(s-u)^2 sigma(u)^2 du for t <= tau <= s (sigma_sq is the
  // tau = s case).
  double projected_variance(double t, double tau, double s) const;

  // int_t^tau f_p(s-u) theta(u) du for t <= tau <= s: the drift contribution
  // to the first coordinate at s accumulated over [t, tau].
  double projected_theta(double t, double tau, double s) const;

  // Conditional mean and covariance of X(tau) given X(t) = x.
  Eigen::VectorXd conditional_mean(double t, double tau, const StateVector& x) const;
  Eigen::MatrixXd conditional_cov(double t, double tau) const;

  // Exact Gaussian sampling of X(tau) given X(t) = x: no time discretization.
  // Path j consumes p normals from counter stream j, so results are
  // deterministic in (seed, j) and independent of evaluation order.
  std::vector<StateVector> simulate_state(double t, double tau, const StateVector& x,
                                          int n_paths, std::uint64_t seed) const;

 private:
  void check_times(double t, double tau, double s, const char* where) const;

  int p_;
  Eigen::MatrixXd A_;
  PiecewiseConstant sigma_;
  PiecewiseConstant theta_;
  double c_;

  Eigen::VectorXcd lam_;        // eigenvalues of A (distinct, Re < 0)
  Eigen::MatrixXcd V_, Vinv_;   // eigenvectors and inverse
  Eigen::MatrixXcd row_coef_;   // (k, i): V(0,k) * Vinv(k,i)  -> f_i(u)
  Eigen::MatrixXcd col_coef_;   // (k, i): V(i,k) * Vinv(k,p-1) -> g_i(u)
};

// m_theta(t, s, x) = Lambda(s) + sum_i f_i(s-t) x_i + int_t^s f_p(s-u) theta(u) du:
// conditional mean temperature on day s seen from t under the pricing measure.
class SeasonalFunction;
double m_theta(const CarModel& model, const SeasonalFunction& seasonal, double t,
               double s, const StateVector& x);

}  // namespace degday
