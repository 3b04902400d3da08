#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace oracles {

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
  using cd = std::complex<double>;
  const std::size_t n = coeffs.size();
  if (n == 0) return {};

  auto eval = [&](cd z) {
    cd acc(1.0, 0.0);
    for (std::size_t k = n; k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
  };

  std::vector<cd> z(n);
  const cd seed(0.4, 0.9);
  cd power(1.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    power *= seed;
    z[k] = power;
  }

  for (int iter = 0; iter < 500; ++iter) {
    double shift = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      cd denom(1.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) denom *= z[k] - z[j];
      }
      const cd delta = eval(z[k]) / denom;
      z[k] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-14) return z;
  }
  throw std::runtime_error("poly_roots: Durand-Kerner did not converge");
}

Eigen::MatrixXd mat_exp_taylor(const Eigen::MatrixXd& a, double u) {
  Eigen::MatrixXd b = a * u;
  int squarings = 0;
  double norm = b.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    b *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd term = result;
  for (int k = 1; k <= 30; ++k) {
    term = (term * b) / static_cast<double>(k);
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("simpson: need at least one panel");
  const double h = (b - a) / (2.0 * panels);
  double acc = f(a) + f(b);
  for (int k = 1; k < 2 * panels; ++k) {
    acc += f(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

GaussHermite gauss_hermite(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double off = std::sqrt((i + 1) / 2.0);
    jacobi(i, i + 1) = off;
    jacobi(i + 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermite out;
  out.nodes.resize(static_cast<std::size_t>(n));
  out.weights.resize(static_cast<std::size_t>(n));
  const double sqrt_pi = std::sqrt(std::acos(-1.0));
  for (int k = 0; k < n; ++k) {
    out.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    out.weights[static_cast<std::size_t>(k)] = sqrt_pi * v0 * v0;
  }
  return out;
}

double normal_expectation(const std::function<double(double)>& f, double mean, double sd,
                          int n) {
  const GaussHermite gh = gauss_hermite(n);
  const double sqrt_pi = std::sqrt(std::acos(-1.0));
  const double sqrt2 = std::sqrt(2.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
    acc += gh.weights[k] * f(mean + sd * sqrt2 * gh.nodes[k]);
  }
  return acc / sqrt_pi;
}

double normal_cdf(double x) {
  static const boost::math::normal_distribution<double> dist;
  return boost::math::cdf(dist, x);
}

double normal_quantile(double p) {
  static const boost::math::normal_distribution<double> dist;
  return boost::math::quantile(dist, p);
}

}  // namespace oracles
