#pragma once

#include <functional>
#include <vector>

namespace degday {

struct QuadratureOptions {
  // Stop once the accumulated error estimate is below
  // max(abs_tol, rel_tol * |integral|). The relative guard keeps very small
  // integrals (for example short-horizon variance integrals ~1e-10) resolved
  // to full precision instead of being accepted at the absolute floor.
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_panels = 4000;
};

// Globally adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
// Throws QuadratureError when the panel budget is exhausted before the
// tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

// Same, but the interval is first split at the given interior breakpoints
// (integrand kinks, e.g. piecewise-constant coefficient jumps).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints,
                 const QuadratureOptions& opts = {});

// Fixed-rule composite integration: n_panels equal panels with a 4-point
// Gauss-Legendre rule on each. Used for the smooth day-over-period integrals
// where a fixed per-day resolution is wanted.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int n_panels);

}  // namespace degday
