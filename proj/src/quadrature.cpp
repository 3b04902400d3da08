#include "degday/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "degday/errors.hpp"

namespace degday {
namespace {

// 15-point Kronrod abscissae on [-1, 1] (positive half; the rule is
// symmetric) with the embedded 7-point Gauss rule on the odd-indexed nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};

constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fc = f(center);
  double result_k = kWgk[7] * fc;
  double result_g = kWg[3] * fc;

  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    result_k += kWgk[j] * fsum;
    if (j % 2 == 1) result_g += kWg[j / 2] * fsum;
  }
  result_k *= half;
  result_g *= half;
  return {result_k, std::abs(result_k - result_g)};
}

struct Segment {
  double a, b, integral, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("integrate: non-finite interval");
  }
  if (a > b) throw std::invalid_argument("integrate: a > b");
  if (a == b) return 0.0;

  std::priority_queue<Segment> segments;
  PanelResult first = gk15(f, a, b);
  segments.push({a, b, first.integral, first.error});
  double total = first.integral;
  double total_err = first.error;

  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (static_cast<int>(segments.size()) >= opts.max_panels) {
      throw QuadratureError("integrate: panel budget exhausted before tolerance was met");
    }
    Segment worst = segments.top();
    segments.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval no longer bisectable at double precision; accept its estimate.
      total_err -= worst.error;
      total += 0.0;
      segments.push({worst.a, worst.b, worst.integral, 0.0});
      continue;
    }
    PanelResult left = gk15(f, worst.a, mid);
    PanelResult right = gk15(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_err += left.error + right.error - worst.error;
    segments.push({worst.a, mid, left.integral, left.error});
    segments.push({mid, worst.b, right.integral, right.error});
  }
  return total;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints, const QuadratureOptions& opts) {
  if (a > b) throw std::invalid_argument("integrate: a > b");
  if (a == b) return 0.0;

  std::vector<double> cuts;
  for (double k : breakpoints) {
    if (k > a && k < b) cuts.push_back(k);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty()) return integrate(f, a, b, opts);

  QuadratureOptions piece_opts = opts;
  piece_opts.abs_tol = opts.abs_tol / static_cast<double>(cuts.size() + 1);

  double total = 0.0;
  double lo = a;
  for (double k : cuts) {
    total += integrate(f, lo, k, piece_opts);
    lo = k;
  }
  total += integrate(f, lo, b, piece_opts);
  return total;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int n_panels) {
  if (a > b) throw std::invalid_argument("integrate_panels: a > b");
  if (a == b) return 0.0;
  if (n_panels < 1) throw std::invalid_argument("integrate_panels: need at least one panel");

  // 4-point Gauss-Legendre nodes/weights on [-1, 1].
  constexpr std::array<double, 2> x = {0.3399810435848563, 0.8611363115940526};
  constexpr std::array<double, 2> w = {0.6521451548625461, 0.3478548451374538};

  const double width = (b - a) / n_panels;
  double total = 0.0;
  for (int i = 0; i < n_panels; ++i) {
    const double lo = a + i * width;
    const double center = lo + 0.5 * width;
    const double half = 0.5 * width;
    double acc = 0.0;
    for (int j = 0; j < 2; ++j) {
      acc += w[j] * (f(center - half * x[j]) + f(center + half * x[j]));
    }
    total += acc * half;
  }
  return total;
}

}  // namespace degday
