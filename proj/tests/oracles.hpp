#pragma once

// Independent reference implementations used only by tests. Each one takes a
// different route than the library: polynomial roots instead of matrix
// eigensolvers, Taylor series instead of spectral decomposition, Simpson and
// Gauss-Hermite instead of adaptive Gauss-Kronrod, Boost instead of the
// in-tree normal functions.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// Roots of the monic polynomial z^n + c[n-1] z^(n-1) + ... + c[0] by
// Durand-Kerner iteration. Coefficients low degree first, leading 1 implied.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs);

// exp(A u) by scaling-and-squaring of the plain Taylor series.
Eigen::MatrixXd mat_exp_taylor(const Eigen::MatrixXd& a, double u);

// Composite Simpson rule on [a, b] with the given number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

// Nodes and weights for integrals against exp(-x^2) (Golub-Welsch).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

// E[f(Z)] for Z ~ N(mean, sd^2), evaluated by Gauss-Hermite quadrature.
double normal_expectation(const std::function<double(double)>& f, double mean, double sd,
                          int n);

// Boost-backed standard normal cdf and quantile.
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace oracles
