#include "nhs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <queue>
#include <vector>

namespace nhs {
namespace {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  const double value = kronrod * half;
  double error = std::abs((kronrod - gauss) * half);
  // QUADPACK-style sharpening of the raw difference estimate.
  if (error > 0.0) error = std::min(error, std::pow(200.0 * error, 1.5));
  error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(value));
  return {a, b, value, error};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts) {
  QuadResult result;
  if (a == b) return result;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::priority_queue<Panel> panels;
  Panel first = gk15(f, a, b);
  panels.push(first);
  double total = first.value;
  double error = first.error;
  int evaluations = 15;
  int splits = 0;

  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (splits >= opts.max_subdivisions) {
      result.converged = false;
      break;
    }
    Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be bisected further in double precision.
      result.converged = error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) * 10.0;
      break;
    }
    panels.pop();
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    evaluations += 30;
    ++splits;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum from the panels to shed accumulated rounding in the running totals.
  double value = 0.0, err = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  result.value = sign * value;
  result.abs_error = err;
  result.evaluations = evaluations;
  if (!std::isfinite(value)) result.converged = false;
  return result;
}

QuadResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                 const QuadOptions& opts) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("integrate_to_infinity: scale must be positive and finite");
  }
  QuadResult result;
  double lo = a;
  double width = scale;
  int quiet_panels = 0;
  // Panels stop once two consecutive ones are negligible and the covered
  // length is far beyond the decay scale.
  for (int k = 0; k < 200; ++k) {
    const double hi = lo + width;
    if (!(hi > lo)) break;
    const QuadResult piece = integrate(f, lo, hi, opts);
    result.value += piece.value;
    result.abs_error += piece.abs_error;
    result.evaluations += piece.evaluations;
    result.converged = result.converged && piece.converged;
    const double negligible =
        0.01 * std::max(opts.abs_tol, opts.rel_tol * std::abs(result.value));
    if (std::abs(piece.value) <= negligible) {
      ++quiet_panels;
    } else {
      quiet_panels = 0;
    }
    if (quiet_panels >= 2 && hi - a >= 64.0 * scale) return result;
    lo = hi;
    width *= 2.0;
  }
  result.converged = false;
  return result;
}

const QuadResult& require_converged(const QuadResult& r, const char* context) {
  if (!r.converged) {
    throw QuadratureError(fmt::format("{}: quadrature did not converge (value {:.6g}, "
                                      "estimated error {:.3g})",
                                      context, r.value, r.abs_error),
                          r.value, r.abs_error);
  }
  return r;
}

}  // namespace nhs
