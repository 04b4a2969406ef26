#include "nhs/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nhs {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSeriesTerms = 200;

void check_bessel_arg(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(name) + ": argument must be finite and > 0, got " +
                            std::to_string(x));
  }
}

// Ascending series around the origin; accurate for 0 < x <= 2.
BesselK01 k01_series(double x) {
  const double t = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  constexpr double gamma = std::numbers::egamma;

  // term0 = t^k / (k!)^2, term1 = t^k / (k! (k+1)!)
  double term0 = 1.0;
  double term1 = 1.0;
  double harmonic = 0.0;  // H_k
  double i0 = 0.0, i1_sum = 0.0, k0_tail = 0.0, k1_tail = 0.0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    if (k > 0) {
      term0 *= t / (double(k) * double(k));
      term1 *= t / (double(k) * double(k + 1));
      harmonic += 1.0 / k;
    }
    const double next_harmonic = harmonic + 1.0 / (k + 1);
    i0 += term0;
    i1_sum += term1;
    k0_tail += harmonic * term0;
    // psi(k+1) + psi(k+2) = H_k + H_{k+1} - 2 gamma
    k1_tail += (harmonic + next_harmonic - 2.0 * gamma) * term1;
    if (term0 < kEps * 1e-3 * i0 && term1 < kEps * 1e-3 * i1_sum) break;
  }
  const double i1 = 0.5 * x * i1_sum;
  BesselK01 out;
  out.k0 = -(log_half + gamma) * i0 + k0_tail;
  out.k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_tail;
  return out;
}

// Steed's evaluation of Temme's second continued fraction; x >= 2.
BesselK01 k01_continued_fraction(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  BesselK01 out;
  out.k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  out.k1 = out.k0 * (x + 0.5 - h) / x;
  return out;
}

double lambert_residual_tol(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

}  // namespace

BesselK01 bessel_k01(double x) {
  check_bessel_arg(x, "bessel_k");
  return x <= 2.0 ? k01_series(x) : k01_continued_fraction(x);
}

double bessel_k0(double x) {
  check_bessel_arg(x, "bessel_k0");
  return bessel_k01(x).k0;
}

double bessel_k1(double x) {
  check_bessel_arg(x, "bessel_k1");
  return bessel_k01(x).k1;
}

double lambert_w(BranchW branch, double x) {
  constexpr double inv_e = 0.36787944117144233;  // 1/e rounded to nearest
  if (std::isnan(x) || x < -inv_e * (1.0 + 4.0 * kEps)) {
    throw std::domain_error("lambert_w: argument below -1/e: " + std::to_string(x));
  }
  if (branch == BranchW::MinusOne && !(x < 0.0)) {
    throw std::domain_error("lambert_w: MinusOne branch needs x in [-1/e, 0), got " +
                            std::to_string(x));
  }
  if (branch == BranchW::Principal && x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  // Distance from the branch point, p = sqrt(2 (e x + 1)).
  const double ex1 = std::fma(std::numbers::e, x, 1.0);
  if (ex1 <= 0.0) return -1.0;
  const double p = std::sqrt(2.0 * ex1);

  double w;
  if (branch == BranchW::Principal) {
    if (p < 0.5) {
      w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
    } else if (x < 3.0) {
      w = std::log1p(x);
    } else {
      const double l1 = std::log(x);
      const double l2 = std::log(l1);
      w = l1 - l2 + l2 / l1;
    }
  } else {
    if (p < 0.5) {
      w = -1.0 - p * (1.0 + p * (1.0 / 3.0 + p * 11.0 / 72.0));
    } else {
      const double l1 = std::log(-x);
      const double l2 = std::log(-l1);
      w = l1 - l2 + l2 / l1;
    }
  }

  // Halley refinement on f(w) = w e^w - x.
  for (int iter = 0; iter < 100; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= 0.25 * lambert_residual_tol(x)) break;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    double next = w - step;
    // Keep iterates on the requested side of the branch point.
    if (branch == BranchW::Principal && next < -1.0) next = 0.5 * (w - 1.0);
    if (branch == BranchW::MinusOne && next > -1.0) next = 0.5 * (w - 1.0);
    if (next == w) break;
    w = next;
  }
  return w;
}

}  // namespace nhs
