#include "nhs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nhs/channel.hpp"
#include "nhs/quadrature.hpp"
#include "nhs/specfun.hpp"

namespace nhs {
namespace {

// The E0 integrals are written in s = 2 sqrt(L x), where f(x) dx = s K0(s) ds
// and 1 - F(x) = s K1(s). This removes the logarithmic singularity of K0.
constexpr double kBesselCutoff = 745.0;

struct ScaledK {
  double s_k0;
  double s_k1;
};

ScaledK scaled_k(double s) {
  if (s <= 0.0) return {0.0, 1.0};
  if (s > kBesselCutoff) return {0.0, 0.0};
  const BesselK01 k = bessel_k01(s);
  return {s * k.k0, s * k.k1};
}

const QuadOptions kTight{1e-14, 1e-12, 4000};

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Positive part of a^n with the 0^0 = 1 convention.
double ipow(double base, int n) { return n == 0 ? 1.0 : std::pow(base, n); }

}  // namespace

double p_e0_exact(const SystemParams& params, double p) {
  if (!(p > 0.0)) throw std::domain_error("p_e0_exact: power must be > 0");
  const int m = params.m_devices;
  const double l = params.rate_product();
  const double k = params.lambda0() * params.beta * params.beta * params.eps0();
  const double c = k / (4.0 * l);
  auto integrand = [&](double s) {
    const ScaledK sk = scaled_k(s);
    return std::exp(-c * s * s) * sk.s_k0 * ipow(sk.s_k1, m - 1);
  };
  const double scale = std::min(0.5, 1.0 / std::sqrt(c));
  const QuadResult r =
      require_converged(integrate_to_infinity(integrand, 0.0, scale, kTight), "p_e0_exact");
  const double value = 1.0 - m * std::exp(-params.lambda0() * params.eps0() / p) * r.value;
  return std::clamp(value, 0.0, 1.0);
}

double p_e0_high_snr(const SystemParams& params) {
  const int m = params.m_devices;
  const double l = params.rate_product();
  const double k = params.lambda0() * params.beta * params.beta * params.eps0();
  const double c = k / (4.0 * l);
  auto integrand = [&](double s) {
    const ScaledK sk = scaled_k(s);
    return std::exp(-c * s * s) * ipow(sk.s_k1, m) * s;
  };
  const double scale = std::min(0.5, 1.0 / std::sqrt(c));
  const QuadResult r =
      require_converged(integrate_to_infinity(integrand, 0.0, scale, kTight), "p_e0_high_snr");
  return std::clamp(k / (2.0 * l) * r.value, 0.0, 1.0);
}

double p_e0_evt(const SystemParams& params) {
  const int m = params.m_devices;
  if (m < 3) throw std::domain_error("p_e0_evt: needs M >= 3 so that -1/M lies in (-1/e, 0)");
  const double k = params.lambda0() * params.beta * params.beta * params.eps0();
  const double w = lambert_w(BranchW::MinusOne, -1.0 / m);
  return k / (k - m * params.rate_product() * w);
}

double qm_lower_bound(const SystemParams& params, double p, int m) {
  const int big_m = params.m_devices;
  if (m < 1 || m > big_m) throw std::domain_error("qm_lower_bound: m must lie in [1, M]");
  if (!(p > 0.0)) throw std::domain_error("qm_lower_bound: power must be > 0");
  if (params.epss() == 0.0) return 0.0;

  const double b2 = params.beta * params.beta;
  const double eps0 = params.eps0();
  const double epss = params.epss();
  const double lh = params.lambdah();
  const double l0 = params.lambda0();
  // With u = |h0|^2 - eps0/p, theta = u / (b2 eps0).
  const double theta_rate = lh / (b2 * eps0);  // lh * theta per unit u
  const double decay = (big_m - m) * theta_rate + l0;
  const double prefactor = binomial(big_m, m) * l0 * std::exp(-l0 * eps0 / p);
  const QuadOptions inner_opts{1e-16, 1e-11, 2000};

  // Integral over u for a fixed |s0|^2 = y.
  auto inner = [&](double y) {
    const double cap = epss / (p * b2 * y);  // rate threshold on gamma
    const double u_break = b2 * eps0 * cap;   // theta(u) = cap
    const double u_hi = std::min(u_break, 60.0 / decay);
    double head = 0.0;
    if (u_hi > 0.0) {
      auto f = [&](double u) {
        return ipow(-std::expm1(-theta_rate * u), m) * std::exp(-decay * u);
      };
      head = require_converged(integrate(f, 0.0, u_hi, inner_opts), "qm_lower_bound").value;
    }
    double tail = 0.0;
    if (u_break < 60.0 / decay) {
      tail = ipow(-std::expm1(-lh * cap), m) * std::exp(-decay * u_break) / decay;
    }
    return head + tail;
  };

  // The outer integrand has structure near y ~ 1/p; integrate in log y.
  const double y_scale = std::min({1.0, epss * eps0 * decay / p, lh * epss / (p * b2)});
  const double v_lo = std::log(1e-12 * y_scale);
  const double v_hi = std::log(60.0);
  auto outer = [&](double v) {
    const double y = std::exp(v);
    return y * std::exp(-y) * inner(y);
  };
  const QuadOptions outer_opts{1e-16, 1e-9, 4000};
  const QuadResult r = require_converged(integrate(outer, v_lo, v_hi, outer_opts), "qm_lower_bound");
  return std::clamp(prefactor * r.value, 0.0, 1.0);
}

double TTerms::total() const { return std::accumulate(terms.begin(), terms.end(), 0.0); }

TTerms t_terms_wpt(const SystemParams& params, double p) {
  if (!(p > 0.0)) throw std::domain_error("t_terms_wpt: power must be > 0");
  const int big_m = params.m_devices;
  const LinkScale scale = LinkScale::from(params);
  const double ea = params.eta * params.bar_alpha();
  const double be0 = params.bar_eps0();
  const double bes = params.bar_epss();
  const double l0 = params.lambda0();
  // Second-stage rate threshold on gamma, independent of h0.
  const double second_cap = bes / (ea * p);
  const double f_second_cap = gamma_cdf(second_cap, scale);

  TTerms out;
  out.full_diversity_condition = params.full_diversity_condition();
  out.terms.assign(big_m + 1, 0.0);
  if (bes == 0.0) return out;

  const double h_tau = be0 / p;                 // tau(h0) > 0 beyond this
  const double h_cap = be0 * (1.0 + bes) / p;   // tau(h0) exceeds second_cap beyond this
  const bool bounded = out.full_diversity_condition;
  const double h_gap = bounded ? be0 * (1.0 + bes) / (p * (1.0 - be0 * bes)) : 0.0;

  // Conditional probability of {|S2| = m, outage} for fixed h0.
  auto conditional = [&](int m, double h) {
    const double tau = std::max(0.0, h / (be0 * ea) - 1.0 / (ea * p));
    const double first_cap = bes * (p * h + 1.0) / (ea * p);
    const double f_tau = gamma_cdf(tau, scale);
    const double band = std::max(0.0, gamma_cdf(first_cap, scale) - f_tau);
    const double below = m == 0 ? 1.0 : ipow(std::min(f_tau, f_second_cap), m);
    return below * ipow(band, big_m - m);
  };

  const QuadOptions opts{1e-15, 1e-11, 4000};
  for (int m = 0; m <= big_m; ++m) {
    const double coeff = binomial(big_m, m);
    auto integrand = [&](double h) { return coeff * conditional(m, h) * l0 * std::exp(-l0 * h); };
    double value = 0.0;
    // Segments delimited by the kinks of tau, min{tau, cap} and the band.
    std::vector<double> cuts{0.0, h_tau, h_cap};
    if (bounded) cuts.push_back(h_gap);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] > cuts[i]) {
        value += require_converged(integrate(integrand, cuts[i], cuts[i + 1], opts), "t_terms_wpt")
                     .value;
      }
    }
    const double last = cuts.back();
    if (bounded && m < big_m) {
      // The band is empty beyond h_gap.
    } else if (m == big_m && last >= h_cap) {
      // Only the |S2| = M term survives here, and it no longer depends on h0.
      value += ipow(f_second_cap, big_m) * std::exp(-l0 * last);
    } else {
      const double tail_scale = std::min(1.0 / l0, be0 * ea / scale.rate_product);
      value += require_converged(integrate_to_infinity(integrand, last, tail_scale, opts),
                                 "t_terms_wpt")
                   .value;
    }
    out.terms[m] = std::clamp(value, 0.0, 1.0);
  }
  return out;
}

SlopeFit fit_diversity_slope(const std::vector<CurvePoint>& curve, IndexWindow window) {
  if (curve.empty() || window.first > window.last || window.last >= curve.size()) {
    throw std::invalid_argument("fit_diversity_slope: window outside the curve");
  }
  SlopeFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = window.first; i <= window.last; ++i) {
    const CurvePoint& pt = curve[i];
    if (!(pt.power_ratio > 0.0)) throw std::invalid_argument("fit_diversity_slope: power <= 0");
    if (!(pt.metric > 0.0)) {
      ++fit.zero_points_excluded;
      continue;
    }
    xs.push_back(std::log10(pt.power_ratio));
    ys.push_back(std::log10(pt.metric));
  }
  fit.points_used = static_cast<int>(xs.size());
  if (fit.points_used < 2) {
    throw std::invalid_argument("fit_diversity_slope: fewer than two points with metric > 0");
  }
  const double n = fit.points_used;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_diversity_slope: all powers identical");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

SlopeFit fit_diversity_slope(const std::vector<CurvePoint>& curve) {
  if (curve.empty()) throw std::invalid_argument("fit_diversity_slope: empty curve");
  return fit_diversity_slope(curve, {0, curve.size() - 1});
}

}  // namespace nhs
