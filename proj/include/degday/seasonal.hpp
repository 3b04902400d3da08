#pragma once

#include <chrono>
#include <filesystem>
#include <vector>

#include "degday/types.hpp"

namespace degday {

// One sinusoidal component of the seasonal mean.
struct Harmonic {
  double amplitude;  // deg F
  double phase;      // radians
  double period;     // days, > 0
};

// Deterministic seasonal mean temperature
//   Lambda(t) = a0 + trend*t + sum_k amplitude_k * sin(2*pi*t/period_k + phase_k)
// with t in days.
class SeasonalFunction {
 public:
  SeasonalFunction(double a0, double trend, std::vector<Harmonic> harmonics);

  double operator()(double t) const;

  double a0() const { return a0_; }
  double trend() const { return trend_; }
  const std::vector<Harmonic>& harmonics() const { return harmonics_; }

 private:
  double a0_;
  double trend_;
  std::vector<Harmonic> harmonics_;
};

// Reconstructs the order-3 state at time t from the last three daily average
// temperatures via backward differences of the deseasonalized series
// y(u) = T(u) - Lambda(u):
//   x1 = y(t),  x2 = y(t) - y(t-1),  x3 = y(t) - 2*y(t-1) + y(t-2).
StateVector state_from_temps(const SeasonalFunction& seasonal, double temp_t_minus_2,
                             double temp_t_minus_1, double temp_t, double t);

// Daily average temperature series on consecutive calendar days.
struct TemperatureSeries {
  std::chrono::sys_days start;
  std::vector<double> tavg_f;
};

// Reads a two-column CSV (header `date,tavg_f`; ISO dates; deg F values).
// Gaps, duplicates, and parse failures throw ConfigError naming the line.
TemperatureSeries ingest_csv(const std::filesystem::path& path);

}  // namespace degday
