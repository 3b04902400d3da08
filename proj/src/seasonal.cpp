#include "degday/seasonal.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "degday/dates.hpp"
#include "degday/errors.hpp"

namespace degday {

SeasonalFunction::SeasonalFunction(double a0, double trend, std::vector<Harmonic> harmonics)
    : a0_(a0), trend_(trend), harmonics_(std::move(harmonics)) {
  if (!(std::isfinite(a0_) && std::isfinite(trend_))) {
    throw std::invalid_argument("SeasonalFunction: non-finite level or trend");
  }
  for (const Harmonic& h : harmonics_) {
    if (!(h.period > 0.0) || !std::isfinite(h.amplitude) || !std::isfinite(h.phase)) {
      throw std::invalid_argument("SeasonalFunction: harmonic needs period > 0 and finite terms");
    }
  }
}

double SeasonalFunction::operator()(double t) const {
  double value = a0_ + trend_ * t;
  for (const Harmonic& h : harmonics_) {
    value += h.amplitude * std::sin(2.0 * std::numbers::pi * t / h.period + h.phase);
  }
  return value;
}

StateVector state_from_temps(const SeasonalFunction& seasonal, double temp_t_minus_2,
                             double temp_t_minus_1, double temp_t, double t) {
  if (!(std::isfinite(temp_t_minus_2) && std::isfinite(temp_t_minus_1) &&
        std::isfinite(temp_t))) {
    throw std::invalid_argument("state_from_temps: non-finite temperature");
  }
  const double y0 = temp_t - seasonal(t);
  const double y1 = temp_t_minus_1 - seasonal(t - 1.0);
  const double y2 = temp_t_minus_2 - seasonal(t - 2.0);
  StateVector x(3);
  x << y0, y0 - y1, y0 - 2.0 * y1 + y2;
  return x;
}

TemperatureSeries ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("temperature csv: cannot open " + path.string());

  auto fail = [&path](int line_no, const std::string& what) -> ConfigError {
    std::ostringstream msg;
    msg << "temperature csv " << path.string() << ":" << line_no << ": " << what;
    return ConfigError(msg.str());
  };

  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw fail(1, "no records (empty file)");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "date,tavg_f") throw fail(line_no, "expected header 'date,tavg_f'");

  TemperatureSeries series;
  bool have_prev = false;
  std::chrono::sys_days prev{};

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string::npos) throw fail(line_no, "expected 'date,value'");

    const auto date = parse_iso_date(std::string_view(line).substr(0, comma));
    if (!date) throw fail(line_no, "invalid ISO date '" + line.substr(0, comma) + "'");

    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(line.substr(comma + 1), &used);
      if (used != line.size() - comma - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw fail(line_no, "invalid temperature '" + line.substr(comma + 1) + "'");
    }
    if (!std::isfinite(value)) throw fail(line_no, "non-finite temperature");

    if (have_prev) {
      const auto gap_days = (*date - prev).count();
      if (gap_days <= 0) {
        throw fail(line_no, "dates must be strictly increasing (got " +
                                format_iso_date(*date) + " after " + format_iso_date(prev) + ")");
      }
      if (gap_days > 1) {
        throw fail(line_no, "gap in series: missing " +
                                format_iso_date(prev + std::chrono::days{1}));
      }
    } else {
      series.start = *date;
    }
    prev = *date;
    have_prev = true;
    series.tavg_f.push_back(value);
  }

  if (series.tavg_f.empty()) throw fail(line_no, "no records");
  return series;
}

}  // namespace degday
