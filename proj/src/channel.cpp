#include "nhs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nhs/specfun.hpp"

namespace nhs {
namespace {

// F(x) = 1 - 2 sqrt(t) K1(2 sqrt(t)) with t = L x, summed directly so that
// small t keeps full relative precision:
//   F = t * sum_k [psi(k+1) + psi(k+2) - ln t] t^k / (k! (k+1)!)
double product_cdf_series(double t) {
  const double log_t = std::log(t);
  constexpr double gamma = std::numbers::egamma;
  double term = 1.0;       // t^k / (k! (k+1)!)
  double harmonic = 0.0;   // H_k
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      term *= t / (double(k) * double(k + 1));
      harmonic += 1.0 / k;
    }
    const double psi_sum = harmonic + (harmonic + 1.0 / (k + 1)) - 2.0 * gamma;
    const double contrib = (psi_sum - log_t) * term;
    sum += contrib;
    if (k > 2 && std::abs(contrib) < 1e-18 * std::abs(sum)) break;
  }
  return t * sum;
}

void require(bool ok, const char* what, double x) {
  if (!ok) throw std::domain_error(std::string(what) + " (got " + std::to_string(x) + ")");
}

}  // namespace

LinkScale::LinkScale(double r) : rate_product(r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("LinkScale: rate product must be positive and finite");
  }
}

void sample_realization(const SystemParams& params, CounterRng& rng, ChannelRealization& out) {
  const auto m = static_cast<std::size_t>(params.m_devices);
  out.h0_sq = rng.exponential(params.lambda0());
  out.gamma.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double g_sq = rng.exponential(params.lambdag());
    const double h_sq = rng.exponential(params.lambdah());
    out.gamma[i] = g_sq * h_sq;
  }
  out.s0_sq = rng.exponential(1.0);
}

ChannelRealization sample_realization(const SystemParams& params, CounterRng& rng) {
  ChannelRealization out;
  sample_realization(params, rng, out);
  return out;
}

double gamma_pdf(double x, LinkScale scale) {
  require(x > 0.0 && std::isfinite(x), "gamma_pdf: x must be > 0", x);
  const double l = scale.rate_product;
  const double z = 2.0 * std::sqrt(l * x);
  if (z > 745.0) return 0.0;
  return 2.0 * l * bessel_k0(z);
}

double gamma_cdf(double x, LinkScale scale) {
  require(x >= 0.0 && !std::isnan(x), "gamma_cdf: x must be >= 0", x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double t = scale.rate_product * x;
  if (t <= 1.0) return std::clamp(product_cdf_series(t), 0.0, 1.0);
  return std::clamp(1.0 - gamma_ccdf(x, scale), 0.0, 1.0);
}

double gamma_ccdf(double x, LinkScale scale) {
  require(x >= 0.0 && !std::isnan(x), "gamma_ccdf: x must be >= 0", x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double t = scale.rate_product * x;
  if (t <= 1.0) return std::clamp(1.0 - product_cdf_series(t), 0.0, 1.0);
  const double z = 2.0 * std::sqrt(t);
  if (z > 745.0) return 0.0;
  return std::clamp(z * bessel_k1(z), 0.0, 1.0);
}

double gamma_cdf_small_x(double x, LinkScale scale) {
  const double t = scale.rate_product * x;
  require(x > 0.0 && t < 1.0, "gamma_cdf_small_x: needs 0 < L x < 1", x);
  return -t * std::log(t);
}

double min_order_pdf(double x, int m_devices, LinkScale scale) {
  if (m_devices < 1) throw std::domain_error("min_order_pdf: m_devices must be >= 1");
  const double f = gamma_pdf(x, scale);
  if (m_devices == 1) return f;
  return m_devices * f * std::pow(gamma_ccdf(x, scale), m_devices - 1);
}

}  // namespace nhs
