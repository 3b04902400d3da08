#pragma once

namespace degday {

// Standard normal density.
double norm_pdf(double x);

// Standard normal CDF, computed via erfc so both tails keep full relative
// accuracy.
double norm_cdf(double x);

// Inverse standard normal CDF on (0, 1). Rational initial guess refined with
// one Halley step against the erfc-based CDF; accurate to ~1e-15 relative.
double norm_quantile(double p);

// psi(x) = x*Phi(x) + phi(x): the expected positive part of a unit-variance
// Gaussian with mean x. Satisfies psi(x) - psi(-x) = x and psi(x) >= max(x, 0);
// the implementation preserves both properties in floating point.
double psi(double x);

}  // namespace degday
