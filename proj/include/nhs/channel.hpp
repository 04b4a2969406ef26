#pragma once

#include <vector>

#include "nhs/params.hpp"
#include "nhs/rng.hpp"

namespace nhs {

/// One draw of every random channel quantity in a block.
struct ChannelRealization {
  double h0_sq = 0.0;          // |h0|^2
  std::vector<double> gamma;   // |g_m|^2 |h_m|^2, unsorted, one per device
  double s0_sq = 0.0;          // |s0|^2, U0's symbol acting as virtual fading
};

/// Composite rate lambda_h * lambda_g of the product channel.
struct LinkScale {
  double rate_product;
  explicit LinkScale(double rate_product);
  static LinkScale from(const SystemParams& p) { return LinkScale(p.rate_product()); }
};

/// Draws a realization; consumes exactly 2 + 2 M values from `rng`.
ChannelRealization sample_realization(const SystemParams& params, CounterRng& rng);

/// Refills an existing realization in place (no allocation when sized).
void sample_realization(const SystemParams& params, CounterRng& rng, ChannelRealization& out);

/// Density of gamma = |g|^2 |h|^2: 2 L K0(2 sqrt(L x)). Requires x > 0.
double gamma_pdf(double x, LinkScale scale);

/// Distribution function 1 - 2 sqrt(L x) K1(2 sqrt(L x)), clamped to [0,1].
double gamma_cdf(double x, LinkScale scale);

/// Complementary distribution 2 sqrt(L x) K1(2 sqrt(L x)); no cancellation
/// for large x.
double gamma_ccdf(double x, LinkScale scale);

/// Small-argument form -L x ln(L x). Requires 0 < L x < 1.
double gamma_cdf_small_x(double x, LinkScale scale);

/// Density of the smallest of M iid gammas: M f(x) (1 - F(x))^(M-1).
double min_order_pdf(double x, int m_devices, LinkScale scale);

}  // namespace nhs
