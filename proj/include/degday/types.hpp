#pragma once

#include <Eigen/Dense>
#include <string>

namespace degday {

// State of the deseasonalized temperature process: component 1 is the
// deviation itself, components 2..p are its derivatives (slope, curvature,
// ...) up to order p-1.
using StateVector = Eigen::VectorXd;

// Per-component price sensitivities, d[i] = d(price)/d(x_{i+1}).
using SensitivityVector = Eigen::VectorXd;

enum class Side { Cdd, Hdd };

// Pricing scheme for futures and options on them.
//   Exact:        closed-form price Sigma * Psi(z)
//   ApproxX:      linearization Psi(x) ~ x
//   ApproxTaylor: linearization Psi(x) ~ 1/sqrt(2*pi) + x/2
enum class Scheme { Exact, ApproxX, ApproxTaylor };

inline std::string to_string(Side side) { return side == Side::Cdd ? "cdd" : "hdd"; }

inline std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Exact:
      return "exact";
    case Scheme::ApproxX:
      return "approx_x";
    default:
      return "approx_taylor";
  }
}

}  // namespace degday
