#include "degday/scenario.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "degday/dates.hpp"
#include "degday/errors.hpp"
#include "degday/options.hpp"
#include "degday/pricing.hpp"
#include "degday/sensitivity.hpp"

namespace degday {

namespace {

using json = nlohmann::json;
using std::chrono::sys_days;

struct Diags {
  std::vector<std::string> list;
  void add(const std::string& field, const std::string& msg) {
    list.push_back(field + ": " + msg);
  }
  bool clean() const { return list.empty(); }
};

std::string csv_num(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// Day offsets that came from calendar dates print back as ISO dates;
// anything else prints as a plain number.
std::string day_label(sys_days epoch, double offset) {
  const double rounded = std::round(offset);
  if (rounded == offset && std::abs(offset) < 4e6) {
    return format_iso_date(epoch + std::chrono::days(static_cast<long>(rounded)));
  }
  return csv_num(offset);
}

bool finite_number(const json& v, double& out) {
  if (!v.is_number()) return false;
  out = v.get<double>();
  return std::isfinite(out);
}

// Scenario fields holding a time accept either an ISO date (resolved against
// the epoch) or a raw day offset.
std::optional<double> parse_day_value(const json& v, sys_days epoch, const std::string& field,
                                      Diags& d) {
  if (v.is_string()) {
    const auto day = parse_iso_date(v.get<std::string>());
    if (!day) {
      d.add(field, "not an ISO-8601 calendar date: \"" + v.get<std::string>() + "\"");
      return std::nullopt;
    }
    return static_cast<double>((*day - epoch).count());
  }
  double num;
  if (finite_number(v, num)) return num;
  d.add(field, "expected an ISO date string or a finite day offset");
  return std::nullopt;
}

std::optional<PiecewiseConstant> parse_piecewise(const json& v, const std::string& field,
                                                 Diags& d, bool require_positive) {
  double num;
  if (finite_number(v, num)) {
    if (require_positive && !(num > 0.0)) {
      d.add(field, "must be > 0");
      return std::nullopt;
    }
    return PiecewiseConstant(num);
  }
  if (v.is_object()) {
    if (!v.contains("breakpoints") || !v.contains("values") || !v["breakpoints"].is_array() ||
        !v["values"].is_array()) {
      d.add(field, "piecewise form needs \"breakpoints\" and \"values\" arrays");
      return std::nullopt;
    }
    std::vector<double> breaks, values;
    for (const auto& b : v["breakpoints"]) {
      double x;
      if (!finite_number(b, x)) {
        d.add(field + ".breakpoints", "entries must be finite numbers");
        return std::nullopt;
      }
      breaks.push_back(x);
    }
    for (const auto& b : v["values"]) {
      double x;
      if (!finite_number(b, x)) {
        d.add(field + ".values", "entries must be finite numbers");
        return std::nullopt;
      }
      if (require_positive && !(x > 0.0)) {
        d.add(field + ".values", "entries must be > 0");
        return std::nullopt;
      }
      values.push_back(x);
    }
    try {
      return PiecewiseConstant(std::move(breaks), std::move(values));
    } catch (const std::invalid_argument& e) {
      d.add(field, e.what());
      return std::nullopt;
    }
  }
  d.add(field, "expected a number or a {breakpoints, values} object");
  return std::nullopt;
}

std::optional<Side> parse_side(const json& parent, const std::string& field, Diags& d) {
  if (!parent.contains("side") || !parent["side"].is_string()) {
    d.add(field + ".side", "required, \"cdd\" or \"hdd\"");
    return std::nullopt;
  }
  const std::string s = parent["side"].get<std::string>();
  if (s == "cdd") return Side::Cdd;
  if (s == "hdd") return Side::Hdd;
  d.add(field + ".side", "unknown side \"" + s + "\" (want \"cdd\" or \"hdd\")");
  return std::nullopt;
}

std::optional<Scheme> parse_scheme(const json& parent, const std::string& field, Diags& d) {
  if (!parent.contains("scheme") || !parent["scheme"].is_string()) {
    d.add(field + ".scheme", "required, one of \"exact\", \"approx_x\", \"approx_taylor\"");
    return std::nullopt;
  }
  const std::string s = parent["scheme"].get<std::string>();
  if (s == "exact") return Scheme::Exact;
  if (s == "approx_x") return Scheme::ApproxX;
  if (s == "approx_taylor") return Scheme::ApproxTaylor;
  d.add(field + ".scheme", "unknown scheme \"" + s + "\"");
  return std::nullopt;
}

// Shared by contracts[] entries and options[].underlying. `floor_time` is the
// earliest admissible measurement time (evaluation t, or the option's
// exercise day) and `floor_name` names it in diagnostics.
std::optional<ContractSpec> parse_contract(const json& v, const std::string& field,
                                           sys_days epoch, double floor_time,
                                           const char* floor_name, Diags& d) {
  if (!v.is_object()) {
    d.add(field, "expected an object");
    return std::nullopt;
  }
  ContractSpec c;
  bool ok = true;
  if (auto side = parse_side(v, field, d)) {
    c.side = *side;
  } else {
    ok = false;
  }
  if (auto scheme = parse_scheme(v, field, d)) {
    c.scheme = *scheme;
  } else {
    ok = false;
  }

  const bool has_day = v.contains("day");
  const bool has_period = v.contains("period");
  if (has_day == has_period) {
    d.add(field, "need exactly one of \"day\" or \"period\"");
    return std::nullopt;
  }
  if (has_day) {
    auto s = parse_day_value(v["day"], epoch, field + ".day", d);
    if (!s) return std::nullopt;
    if (*s < floor_time) {
      d.add(field + ".day", std::string("measurement day precedes ") + floor_name);
      ok = false;
    }
    c.is_period = false;
    c.start = *s;
  } else {
    const json& pv = v["period"];
    if (!pv.is_array() || pv.size() != 2) {
      d.add(field + ".period", "expected [start, end]");
      return std::nullopt;
    }
    auto t1 = parse_day_value(pv[0], epoch, field + ".period", d);
    auto t2 = parse_day_value(pv[1], epoch, field + ".period", d);
    if (!t1 || !t2) return std::nullopt;
    if (!(*t1 < *t2)) {
      d.add(field + ".period", "period end must be after period start");
      ok = false;
    }
    if (*t1 < floor_time) {
      d.add(field + ".period", std::string("period start precedes ") + floor_name);
      ok = false;
    }
    c.is_period = true;
    c.start = *t1;
    c.end = *t2;
  }
  if (v.contains("label")) {
    if (v["label"].is_string()) {
      c.label = v["label"].get<std::string>();
    } else {
      d.add(field + ".label", "expected a string");
      ok = false;
    }
  }
  return ok ? std::optional<ContractSpec>(c) : std::nullopt;
}

void parse_grid(const json& parent, const char* key, GridRange& out, Diags& d) {
  if (!parent.contains(key)) return;
  const json& v = parent[key];
  const std::string field = std::string("grids.") + key;
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    d.add(field, "expected [lo, hi] integers");
    return;
  }
  const int lo = v[0].get<int>();
  const int hi = v[1].get<int>();
  if (lo < 1 || hi < lo) {
    d.add(field, "need 1 <= lo <= hi");
    return;
  }
  out = GridRange{lo, hi};
}

// Everything needed to build a Scenario, parsed but with the model not yet
// constructed (construction can reject the drift matrix).
struct RawScenario {
  sys_days epoch{};
  Eigen::MatrixXd A;
  PiecewiseConstant sigma{1.0};
  PiecewiseConstant theta{0.0};
  double c = 65.0;
  std::optional<SeasonalFunction> seasonal;
  double t = 0.0;
  StateVector state;
  std::vector<ContractSpec> contracts;
  std::vector<OptionContractSpec> options;
  GridRange day_maturities{1, 50};
  GridRange option_maturities{2, 50};
  GridRange period_maturities{1, 50};
  GridRange price_window{2, 152};
  std::optional<int> mc_paths;
  std::optional<std::uint64_t> mc_seed;
  std::string out_dir = ".";
};

void parse_model(const json& root, RawScenario& raw, Diags& d) {
  if (!root.contains("model") || !root["model"].is_object()) {
    d.add("model", "required object");
    return;
  }
  const json& m = root["model"];
  const bool has_row = m.contains("last_row");
  const bool has_full = m.contains("A");
  if (has_row == has_full) {
    d.add("model", "need exactly one of \"last_row\" or \"A\"");
  } else if (has_row) {
    const json& r = m["last_row"];
    if (!r.is_array() || r.empty()) {
      d.add("model.last_row", "expected a non-empty array of numbers");
    } else {
      std::vector<double> row;
      bool ok = true;
      for (const auto& e : r) {
        double x;
        if (!finite_number(e, x)) {
          d.add("model.last_row", "entries must be finite numbers");
          ok = false;
          break;
        }
        row.push_back(x);
      }
      if (ok) raw.A = CarModel::companion(row);
    }
  } else {
    const json& a = m["A"];
    const auto p = a.size();
    bool ok = a.is_array() && p > 0;
    if (ok) {
      raw.A.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
      for (std::size_t i = 0; ok && i < p; ++i) {
        ok = a[i].is_array() && a[i].size() == p;
        for (std::size_t j = 0; ok && j < p; ++j) {
          double x;
          ok = finite_number(a[i][j], x);
          if (ok) raw.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
        }
      }
    }
    if (!ok) {
      d.add("model.A", "expected a square array of finite numbers");
      raw.A.resize(0, 0);
    }
  }

  if (!m.contains("sigma")) {
    d.add("model.sigma", "required");
  } else if (auto s = parse_piecewise(m["sigma"], "model.sigma", d, true)) {
    raw.sigma = std::move(*s);
  }
  if (m.contains("theta")) {
    if (auto th = parse_piecewise(m["theta"], "model.theta", d, false)) {
      raw.theta = std::move(*th);
    }
  }
  if (m.contains("c")) {
    double c;
    if (finite_number(m["c"], c)) {
      raw.c = c;
    } else {
      d.add("model.c", "expected a finite number");
    }
  }
}

void parse_seasonal(const json& root, RawScenario& raw, Diags& d) {
  if (!root.contains("seasonal") || !root["seasonal"].is_object()) {
    d.add("seasonal", "required object");
    return;
  }
  const json& s = root["seasonal"];
  double a0 = 0.0, trend = 0.0;
  bool ok = true;
  if (!s.contains("a0") || !finite_number(s["a0"], a0)) {
    d.add("seasonal.a0", "required finite number");
    ok = false;
  }
  if (s.contains("trend") && !finite_number(s["trend"], trend)) {
    d.add("seasonal.trend", "expected a finite number");
    ok = false;
  }
  std::vector<Harmonic> harmonics;
  if (s.contains("harmonics")) {
    if (!s["harmonics"].is_array()) {
      d.add("seasonal.harmonics", "expected an array");
      ok = false;
    } else {
      int i = 0;
      for (const auto& h : s["harmonics"]) {
        const std::string field = "seasonal.harmonics[" + std::to_string(i++) + "]";
        Harmonic out{0.0, 0.0, 0.0};
        if (!h.is_object() || !h.contains("amplitude") || !h.contains("period") ||
            !finite_number(h["amplitude"], out.amplitude) ||
            !finite_number(h["period"], out.period)) {
          d.add(field, "need finite \"amplitude\" and \"period\"");
          ok = false;
          continue;
        }
        if (h.contains("phase") && !finite_number(h["phase"], out.phase)) {
          d.add(field + ".phase", "expected a finite number");
          ok = false;
          continue;
        }
        if (!(out.period > 0.0)) {
          d.add(field + ".period", "must be > 0");
          ok = false;
          continue;
        }
        harmonics.push_back(out);
      }
    }
  }
  if (ok) {
    raw.seasonal.emplace(a0, trend, std::move(harmonics));
  }
}

void parse_evaluation(const json& root, const std::filesystem::path& scenario_dir,
                      RawScenario& raw, Diags& d) {
  const auto p = raw.A.rows();
  if (!root.contains("evaluation") || !root["evaluation"].is_object()) {
    d.add("evaluation", "required object");
    return;
  }
  const json& ev = root["evaluation"];
  if (!ev.contains("t")) {
    d.add("evaluation.t", "required");
  } else if (auto t = parse_day_value(ev["t"], raw.epoch, "evaluation.t", d)) {
    raw.t = *t;
  }

  const bool has_state = ev.contains("state");
  const bool has_temps = ev.contains("temps");
  if (has_state == has_temps) {
    d.add("evaluation", "need exactly one of \"state\" or \"temps\"");
    return;
  }
  if (has_state) {
    const json& sv = ev["state"];
    if (!sv.is_array() || (p > 0 && sv.size() != static_cast<std::size_t>(p))) {
      d.add("evaluation.state",
            "expected an array matching the model order p=" + std::to_string(p));
      return;
    }
    raw.state.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t i = 0; i < sv.size(); ++i) {
      double x;
      if (!finite_number(sv[i], x)) {
        d.add("evaluation.state", "entries must be finite numbers");
        return;
      }
      raw.state(static_cast<Eigen::Index>(i)) = x;
    }
    return;
  }

  // Temperature form: reconstruct the state from the last three observed
  // daily averages via backward differences of T - Lambda.
  if (p > 0 && p != 3) {
    d.add("evaluation.temps", "temperature reconstruction needs a model of order 3");
    return;
  }
  if (!raw.seasonal) return;  // already diagnosed
  const json& tv = ev["temps"];
  if (!tv.is_object()) {
    d.add("evaluation.temps", "expected an object");
    return;
  }
  double t0 = 0.0, t1 = 0.0, t2 = 0.0;
  if (tv.contains("values")) {
    const json& vals = tv["values"];
    if (!vals.is_array() || vals.size() != 3 || !finite_number(vals[0], t0) ||
        !finite_number(vals[1], t1) || !finite_number(vals[2], t2)) {
      d.add("evaluation.temps.values", "expected three finite temperatures, oldest first");
      return;
    }
    if (tv.contains("start")) {
      auto start = parse_day_value(tv["start"], raw.epoch, "evaluation.temps.start", d);
      if (!start) return;
      if (*start != raw.t - 2.0) {
        d.add("evaluation.temps.start", "first temperature must fall on t - 2 days");
        return;
      }
    }
  } else if (tv.contains("csv")) {
    if (!tv["csv"].is_string()) {
      d.add("evaluation.temps.csv", "expected a file path string");
      return;
    }
    std::filesystem::path csv = tv["csv"].get<std::string>();
    if (csv.is_relative()) csv = scenario_dir / csv;
    TemperatureSeries series;
    try {
      series = ingest_csv(csv);
    } catch (const ConfigError& e) {
      d.add("evaluation.temps.csv", e.what());
      return;
    }
    if (raw.t != std::round(raw.t)) {
      d.add("evaluation.temps.csv", "evaluation.t must be a whole day to index the series");
      return;
    }
    const long idx = static_cast<long>(raw.t) - (series.start - raw.epoch).count();
    if (idx < 2 || idx >= static_cast<long>(series.tavg_f.size())) {
      d.add("evaluation.temps.csv", "series does not cover the three days up to evaluation.t");
      return;
    }
    t0 = series.tavg_f[static_cast<std::size_t>(idx - 2)];
    t1 = series.tavg_f[static_cast<std::size_t>(idx - 1)];
    t2 = series.tavg_f[static_cast<std::size_t>(idx)];
  } else {
    d.add("evaluation.temps", "need \"values\" or \"csv\"");
    return;
  }
  raw.state = state_from_temps(*raw.seasonal, t0, t1, t2, raw.t);
}

void parse_contracts(const json& root, RawScenario& raw, Diags& d) {
  if (!root.contains("contracts")) return;
  const json& cs = root["contracts"];
  if (!cs.is_array()) {
    d.add("contracts", "expected an array");
    return;
  }
  int i = 0;
  for (const auto& v : cs) {
    const std::string field = "contracts[" + std::to_string(i) + "]";
    if (auto c = parse_contract(v, field, raw.epoch, raw.t, "evaluation.t", d)) {
      if (c->label.empty()) c->label = "c" + std::to_string(i);
      raw.contracts.push_back(std::move(*c));
    }
    ++i;
  }
}

void parse_options(const json& root, RawScenario& raw, Diags& d) {
  if (!root.contains("options")) return;
  const json& os = root["options"];
  if (!os.is_array()) {
    d.add("options", "expected an array");
    return;
  }
  int i = 0;
  for (const auto& v : os) {
    const std::string field = "options[" + std::to_string(i) + "]";
    ++i;
    if (!v.is_object()) {
      d.add(field, "expected an object");
      continue;
    }
    OptionContractSpec o;
    bool ok = true;
    if (!v.contains("strike") || !finite_number(v["strike"], o.strike)) {
      d.add(field + ".strike", "required finite number");
      ok = false;
    }
    if (!v.contains("rate") || !finite_number(v["rate"], o.rate) || !(o.rate > 0.0)) {
      d.add(field + ".rate", "required number > 0");
      ok = false;
    }
    if (!v.contains("exercise")) {
      d.add(field + ".exercise", "required");
      ok = false;
    } else if (auto tau = parse_day_value(v["exercise"], raw.epoch, field + ".exercise", d)) {
      o.tau = *tau;
      if (o.tau < raw.t) {
        d.add(field + ".exercise", "exercise day precedes evaluation.t");
        ok = false;
      }
    } else {
      ok = false;
    }
    if (!v.contains("underlying")) {
      d.add(field + ".underlying", "required");
      ok = false;
    } else if (auto u = parse_contract(v["underlying"], field + ".underlying", raw.epoch,
                                       o.tau, "the exercise day", d)) {
      o.underlying = std::move(*u);
      if (o.underlying.is_period && o.underlying.scheme == Scheme::Exact) {
        d.add(field + ".underlying.scheme",
              "exact period underlyings are not supported for options; the Monte Carlo "
              "estimator prices single measurement days (use approx_x or approx_taylor)");
        ok = false;
      }
    } else {
      ok = false;
    }
    if (v.contains("label")) {
      if (v["label"].is_string()) {
        o.label = v["label"].get<std::string>();
      } else {
        d.add(field + ".label", "expected a string");
        ok = false;
      }
    }
    if (o.label.empty()) o.label = "o" + std::to_string(i - 1);
    if (ok) raw.options.push_back(std::move(o));
  }
}

void parse_mc(const json& root, RawScenario& raw, Diags& d) {
  if (!root.contains("mc")) return;
  const json& mc = root["mc"];
  if (!mc.is_object()) {
    d.add("mc", "expected an object");
    return;
  }
  if (mc.contains("paths")) {
    if (!mc["paths"].is_number_integer() || mc["paths"].get<long>() < 2) {
      d.add("mc.paths", "expected an integer >= 2");
    } else {
      raw.mc_paths = mc["paths"].get<int>();
    }
  }
  if (mc.contains("seed")) {
    if (!mc["seed"].is_number_unsigned()) {
      d.add("mc.seed", "expected a non-negative integer");
    } else {
      raw.mc_seed = mc["seed"].get<std::uint64_t>();
    }
  }
}

RawScenario parse_raw(const std::string& path, Diags& d) {
  RawScenario raw;
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("scenario: cannot read " + path);
  }
  json root;
  try {
    root = json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    d.add("scenario", std::string("parse error: ") + e.what());
    return raw;
  }
  if (!root.is_object()) {
    d.add("scenario", "top level must be an object");
    return raw;
  }

  if (!root.contains("epoch") || !root["epoch"].is_string()) {
    d.add("epoch", "required ISO-8601 date, day offset zero");
  } else if (auto e = parse_iso_date(root["epoch"].get<std::string>())) {
    raw.epoch = *e;
  } else {
    d.add("epoch", "not an ISO-8601 calendar date: \"" + root["epoch"].get<std::string>() + "\"");
  }

  parse_model(root, raw, d);
  parse_seasonal(root, raw, d);
  parse_evaluation(root, std::filesystem::path(path).parent_path(), raw, d);
  parse_contracts(root, raw, d);
  parse_options(root, raw, d);
  if (root.contains("grids")) {
    if (!root["grids"].is_object()) {
      d.add("grids", "expected an object");
    } else {
      parse_grid(root["grids"], "day_maturities", raw.day_maturities, d);
      parse_grid(root["grids"], "option_maturities", raw.option_maturities, d);
      parse_grid(root["grids"], "period_maturities", raw.period_maturities, d);
      parse_grid(root["grids"], "price_window", raw.price_window, d);
    }
  }
  parse_mc(root, raw, d);
  if (root.contains("output")) {
    if (root["output"].is_string()) {
      raw.out_dir = root["output"].get<std::string>();
    } else {
      d.add("output", "expected a directory path string");
    }
  }
  return raw;
}

// Assumes a clean structural pass; model construction may still throw.
Scenario build_scenario(RawScenario raw) {
  CarModel model(raw.A, raw.sigma, raw.theta, raw.c);
  Scenario sc(std::move(model), std::move(*raw.seasonal));
  sc.epoch = raw.epoch;
  sc.t = raw.t;
  sc.state = std::move(raw.state);
  sc.contracts = std::move(raw.contracts);
  sc.options = std::move(raw.options);
  sc.day_maturities = raw.day_maturities;
  sc.option_maturities = raw.option_maturities;
  sc.period_maturities = raw.period_maturities;
  sc.price_window = raw.price_window;
  sc.mc_paths = raw.mc_paths;
  sc.mc_seed = raw.mc_seed;
  sc.out_dir = std::move(raw.out_dir);
  return sc;
}

std::string join_diags(const std::vector<std::string>& diags) {
  std::string out;
  for (const auto& dline : diags) {
    if (!out.empty()) out += "; ";
    out += dline;
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV writing

class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<std::string> header)
      : path_(std::move(path)) {
    add_row(std::move(header));
  }

  void add_row(std::vector<std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += cells[i];
    }
    body_ += '\n';
  }

  // Binary mode keeps LF endings on every platform.
  void write() const {
    std::ofstream out(path_, std::ios::binary);
    out << body_;
    out.flush();
    if (!out) throw ConfigError("output: cannot write " + path_.string());
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::string body_;
};

std::vector<std::string> greek_header(int p, bool with_se) {
  std::vector<std::string> cols;
  for (int i = 1; i <= p; ++i) {
    cols.push_back("d_x" + std::to_string(i));
    if (with_se) cols.push_back("se_x" + std::to_string(i));
  }
  return cols;
}

// ---------------------------------------------------------------------------
// Commands

double contract_price(const Scenario& sc, const ContractSpec& c) {
  if (c.scheme == Scheme::Exact) {
    return c.is_period
               ? fdd_period(sc.model, sc.seasonal, c.side, sc.t, c.start, c.end, sc.state)
               : fdd_day(sc.model, sc.seasonal, c.side, sc.t, c.start, sc.state);
  }
  const ApproxCoefficients coeffs =
      c.is_period
          ? approx_coeffs_period(sc.model, sc.seasonal, c.side, sc.t, c.start, c.end, c.scheme)
          : approx_coeffs_day(sc.model, sc.seasonal, c.side, sc.t, c.start, c.scheme);
  return fdd_approx(coeffs, sc.state);
}

SensitivityVector contract_greeks(const Scenario& sc, const ContractSpec& c) {
  if (c.scheme == Scheme::Exact) {
    return c.is_period
               ? dfdd_period(sc.model, sc.seasonal, c.side, sc.t, c.start, c.end, sc.state)
               : dfdd_day(sc.model, sc.seasonal, c.side, sc.t, c.start, sc.state);
  }
  const ApproxCoefficients coeffs =
      c.is_period
          ? approx_coeffs_period(sc.model, sc.seasonal, c.side, sc.t, c.start, c.end, c.scheme)
          : approx_coeffs_day(sc.model, sc.seasonal, c.side, sc.t, c.start, c.scheme);
  return dapprox(coeffs);
}

std::vector<std::string> contract_id_cells(const Scenario& sc, const ContractSpec& c) {
  return {c.label,
          to_string(c.side),
          c.is_period ? "period" : "day",
          day_label(sc.epoch, c.start),
          c.is_period ? day_label(sc.epoch, c.end) : "",
          to_string(c.scheme)};
}

int cmd_price(const Scenario& sc, const std::filesystem::path& out_dir, std::ostream& out) {
  CsvWriter csv(out_dir / "price.csv",
                {"contract", "side", "kind", "start", "end", "scheme", "t", "price"});
  for (const auto& c : sc.contracts) {
    auto row = contract_id_cells(sc, c);
    row.push_back(csv_num(sc.t));
    row.push_back(csv_num(contract_price(sc, c)));
    csv.add_row(std::move(row));
  }
  csv.write();
  out << "wrote " << csv.path().string() << "\n";
  return 0;
}

int cmd_greeks(const Scenario& sc, const std::filesystem::path& out_dir, std::ostream& out) {
  std::vector<std::string> header = {"contract", "side", "kind", "start",
                                     "end",      "scheme", "t"};
  for (const auto& g : greek_header(sc.model.order(), false)) header.push_back(g);
  CsvWriter csv(out_dir / "greeks.csv", std::move(header));
  for (const auto& c : sc.contracts) {
    auto row = contract_id_cells(sc, c);
    row.push_back(csv_num(sc.t));
    const SensitivityVector g = contract_greeks(sc, c);
    for (Eigen::Index i = 0; i < g.size(); ++i) row.push_back(csv_num(g(i)));
    csv.add_row(std::move(row));
  }
  csv.write();
  out << "wrote " << csv.path().string() << "\n";
  return 0;
}

int resolve_paths(const Scenario& sc) {
  if (!sc.mc_paths) {
    throw ConfigError("mc.paths: Monte Carlo path count required (set mc.paths or --paths)");
  }
  return *sc.mc_paths;
}

int cmd_option(const Scenario& sc, const std::filesystem::path& out_dir, std::ostream& out) {
  const int p = sc.model.order();
  std::vector<std::string> header = {"option", "side",     "kind", "start", "end", "scheme",
                                     "strike", "exercise", "rate", "t",     "price", "se"};
  for (const auto& g : greek_header(p, true)) header.push_back(g);
  CsvWriter csv(out_dir / "option.csv", std::move(header));

  for (const auto& o : sc.options) {
    const ContractSpec& u = o.underlying;
    const OptionSpec opt{o.strike, o.tau, o.rate};
    std::vector<std::string> row = {o.label,
                                    to_string(u.side),
                                    u.is_period ? "period" : "day",
                                    day_label(sc.epoch, u.start),
                                    u.is_period ? day_label(sc.epoch, u.end) : "",
                                    to_string(u.scheme),
                                    csv_num(o.strike),
                                    day_label(sc.epoch, o.tau),
                                    csv_num(o.rate),
                                    csv_num(sc.t)};
    if (u.scheme == Scheme::Exact) {
      const int paths = resolve_paths(sc);
      const std::uint64_t seed = sc.mc_seed.value_or(0);
      const McEstimate price = call_exact_mc(sc.model, sc.seasonal, u.side, sc.t, opt,
                                             u.start, sc.state, paths, seed);
      row.push_back(csv_num(price.value));
      row.push_back(csv_num(price.se));
      if (o.tau > sc.t) {
        const McGreeks g = call_greek_density_mc(sc.model, sc.seasonal, u.side, sc.t, opt,
                                                 u.start, sc.state, paths, seed);
        for (int i = 0; i < p; ++i) {
          row.push_back(csv_num(g.value(i)));
          row.push_back(csv_num(g.se(i)));
        }
      } else {
        for (int i = 0; i < 2 * p; ++i) row.emplace_back();
      }
    } else {
      double price;
      SensitivityVector g;
      if (u.is_period) {
        price = call_approx(sc.model, sc.seasonal, u.side, sc.t, opt, u.start, u.end,
                            sc.state, u.scheme);
        g = call_approx_greeks(sc.model, sc.seasonal, u.side, sc.t, opt, u.start, u.end,
                               sc.state, u.scheme);
      } else {
        price = call_approx(sc.model, sc.seasonal, u.side, sc.t, opt, u.start, sc.state,
                            u.scheme);
        g = call_approx_greeks(sc.model, sc.seasonal, u.side, sc.t, opt, u.start, sc.state,
                               u.scheme);
      }
      row.push_back(csv_num(price));
      row.emplace_back();
      for (int i = 0; i < p; ++i) {
        row.push_back(csv_num(g(i)));
        row.emplace_back();
      }
    }
    csv.add_row(std::move(row));
  }
  csv.write();
  out << "wrote " << csv.path().string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Figure replication. Each figure sweeps time-to-measurement and tabulates
// Greeks (or prices) from the library calls; no computation happens here.

const ContractSpec* first_period_contract(const Scenario& sc) {
  for (const auto& c : sc.contracts) {
    if (c.is_period) return &c;
  }
  return nullptr;
}

const OptionContractSpec* first_day_option(const Scenario& sc) {
  for (const auto& o : sc.options) {
    if (!o.underlying.is_period) return &o;
  }
  return nullptr;
}

int write_figure(const Scenario& sc, int fig, const std::filesystem::path& out_dir,
                 std::ostream& out) {
  const int p = sc.model.order();
  const StateVector zero = StateVector::Zero(p);
  StateVector e1 = StateVector::Zero(p);
  e1(0) = 1.0;

  const std::string name = "fig" + std::to_string(fig);
  std::vector<std::string> header;

  // Day-futures Greek sweeps (figures 3 to 6): the first day contract's
  // measurement day s is held fixed and the evaluation time walks backwards,
  // t = s - k, so every row prices the same contract.
  if (fig >= 3 && fig <= 6) {
    header = {"s_minus_t"};
    const bool is_relerr = fig == 5 || fig == 6;
    for (const auto& g : greek_header(p, false)) {
      header.push_back(is_relerr ? "relerr_x" + g.substr(3) : g);
    }
    CsvWriter csv(out_dir / (name + ".csv"), header);
    const ContractSpec* day = nullptr;
    for (const auto& c : sc.contracts) {
      if (!c.is_period) {
        day = &c;
        break;
      }
    }
    if (!day) {
      throw ConfigError(name + ": scenario needs a day contract");
    }
    const Side side = day->side;
    const double s = day->start;
    for (int k = sc.day_maturities.lo; k <= sc.day_maturities.hi; ++k) {
      const double t = s - k;
      std::vector<std::string> row = {std::to_string(k)};
      if (fig == 3) {
        const SensitivityVector g =
            dapprox(approx_coeffs_day(sc.model, sc.seasonal, side, t, s, Scheme::ApproxX));
        for (int i = 0; i < p; ++i) row.push_back(csv_num(g(i)));
      } else if (fig == 4) {
        const SensitivityVector g = dfdd_day(sc.model, sc.seasonal, side, t, s, zero);
        for (int i = 0; i < p; ++i) row.push_back(csv_num(g(i)));
      } else {
        const StateVector& x = fig == 5 ? zero : e1;
        const SensitivityVector exact = dfdd_day(sc.model, sc.seasonal, side, t, s, x);
        const SensitivityVector approx =
            dapprox(approx_coeffs_day(sc.model, sc.seasonal, side, t, s, Scheme::ApproxX));
        const RelativeErrorReport rep = relative_error_report(exact, approx);
        for (int i = 0; i < p; ++i) row.push_back(csv_num(rep.value(i)));
      }
      csv.add_row(std::move(row));
    }
    csv.write();
    out << "wrote " << csv.path().string() << "\n";
    return 0;
  }

  // Price of a fixed measurement day as evaluation time approaches it.
  if (fig == 7) {
    const OptionContractSpec* o = first_day_option(sc);
    Side side;
    double s;
    if (o) {
      side = o->underlying.side;
      s = o->underlying.start;
    } else {
      const ContractSpec* day = nullptr;
      for (const auto& c : sc.contracts) {
        if (!c.is_period) {
          day = &c;
          break;
        }
      }
      if (!day) {
        throw ConfigError("fig7: scenario needs a day contract or a day-underlying option");
      }
      side = day->side;
      s = day->start;
    }
    CsvWriter csv(out_dir / (name + ".csv"), {"date", "t", "price"});
    for (int k = sc.price_window.hi; k >= sc.price_window.lo; --k) {
      const double t = s - k;
      csv.add_row({day_label(sc.epoch, t), csv_num(t),
                   csv_num(fdd_day(sc.model, sc.seasonal, side, t, s, sc.state))});
    }
    csv.write();
    out << "wrote " << csv.path().string() << "\n";
    return 0;
  }

  // Call-option Greek sweeps on the first day-underlying option: exact by
  // the Monte Carlo density estimator (8, 10), approximate closed form
  // (9, 11); state zero (8, 9) or e1 (10, 11).
  if (fig >= 8 && fig <= 11) {
    const OptionContractSpec* o = first_day_option(sc);
    if (!o) {
      throw ConfigError(name + ": scenario needs an option on a single-day underlying");
    }
    const OptionSpec opt{o->strike, o->tau, o->rate};
    const double s = o->underlying.start;
    const Side side = o->underlying.side;
    const StateVector& x = (fig == 8 || fig == 9) ? zero : e1;
    const bool exact = fig == 8 || fig == 10;

    header = {"s_minus_t"};
    for (const auto& g : greek_header(p, exact)) header.push_back(g);
    CsvWriter csv(out_dir / (name + ".csv"), header);

    const int paths = exact ? resolve_paths(sc) : 0;
    const std::uint64_t seed = sc.mc_seed.value_or(0);
    for (int k = sc.option_maturities.lo; k <= sc.option_maturities.hi; ++k) {
      const double t = s - k;
      if (exact ? !(t < opt.tau) : !(t <= opt.tau)) continue;
      std::vector<std::string> row = {std::to_string(k)};
      if (exact) {
        const McGreeks g = call_greek_density_mc(sc.model, sc.seasonal, side, t, opt, s, x,
                                                 paths, seed);
        for (int i = 0; i < p; ++i) {
          row.push_back(csv_num(g.value(i)));
          row.push_back(csv_num(g.se(i)));
        }
      } else {
        const SensitivityVector g = call_approx_greeks(sc.model, sc.seasonal, side, t, opt,
                                                       s, x, Scheme::ApproxX);
        for (int i = 0; i < p; ++i) row.push_back(csv_num(g(i)));
      }
      csv.add_row(std::move(row));
    }
    csv.write();
    out << "wrote " << csv.path().string() << "\n";
    return 0;
  }

  // Period-futures Greek sweeps on the first period contract: approximate
  // (12) and exact at state zero (13).
  if (fig == 12 || fig == 13) {
    const ContractSpec* per = first_period_contract(sc);
    if (!per) {
      throw ConfigError(name + ": scenario needs a measurement-period contract");
    }
    header = {"tau1_minus_t"};
    for (const auto& g : greek_header(p, false)) header.push_back(g);
    CsvWriter csv(out_dir / (name + ".csv"), header);
    for (int k = sc.period_maturities.lo; k <= sc.period_maturities.hi; ++k) {
      const double t = per->start - k;
      std::vector<std::string> row = {std::to_string(k)};
      const SensitivityVector g =
          fig == 12 ? dapprox(approx_coeffs_period(sc.model, sc.seasonal, per->side, t,
                                                   per->start, per->end, Scheme::ApproxX))
                    : dfdd_period(sc.model, sc.seasonal, per->side, t, per->start, per->end,
                                  zero);
      for (int i = 0; i < p; ++i) row.push_back(csv_num(g(i)));
      csv.add_row(std::move(row));
    }
    csv.write();
    out << "wrote " << csv.path().string() << "\n";
    return 0;
  }

  throw ConfigError("command: unknown figure " + name);
}

std::string normalize_command(std::string cmd) {
  if (cmd.rfind("figure:", 0) == 0) return cmd.substr(7);
  if (cmd.rfind("figure ", 0) == 0) return cmd.substr(7);
  return cmd;
}

int run_impl(const RunRequest& req, std::ostream& out, std::ostream& err) {
  const std::string cmd = normalize_command(req.command);

  if (cmd == "validate") {
    const std::vector<std::string> diags = validate_file(req.scenario_path);
    for (const auto& dline : diags) out << dline << "\n";
    return diags.empty() ? 0 : 2;
  }

  int fig = 0;
  const bool is_figure = cmd.rfind("fig", 0) == 0 &&
                         [&] {
                           const std::string num = cmd.substr(3);
                           if (num.empty()) return false;
                           for (char ch : num) {
                             if (ch < '0' || ch > '9') return false;
                           }
                           fig = std::stoi(num);
                           return fig >= 3 && fig <= 13;
                         }();
  if (cmd != "price" && cmd != "greeks" && cmd != "option" && !is_figure) {
    err << "error: command: unknown command \"" << req.command
        << "\" (want validate, price, greeks, option, or fig3..fig13)\n";
    return 2;
  }

  Scenario sc = load_scenario(req.scenario_path);
  if (!req.out_dir.empty()) sc.out_dir = req.out_dir;
  if (req.paths) sc.mc_paths = *req.paths;
  if (req.seed) sc.mc_seed = *req.seed;

  const std::filesystem::path out_dir(sc.out_dir);
  std::filesystem::create_directories(out_dir);

  if (cmd == "price") return cmd_price(sc, out_dir, out);
  if (cmd == "greeks") return cmd_greeks(sc, out_dir, out);
  if (cmd == "option") return cmd_option(sc, out_dir, out);
  return write_figure(sc, fig, out_dir, out);
}

}  // namespace

std::vector<std::string> validate_file(const std::string& path) {
  Diags d;
  RawScenario raw = parse_raw(path, d);
  if (d.clean()) {
    try {
      build_scenario(std::move(raw));
    } catch (const StationarityError& e) {
      d.add("model", e.what());
    } catch (const std::invalid_argument& e) {
      d.add("model", e.what());
    }
  }
  return d.list;
}

Scenario load_scenario(const std::string& path) {
  Diags d;
  RawScenario raw = parse_raw(path, d);
  if (!d.clean()) {
    throw ConfigError(join_diags(d.list));
  }
  return build_scenario(std::move(raw));
}

int run(const RunRequest& req, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(req, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const StationarityError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const QuadratureError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace degday
