#pragma once

#include <cstddef>
#include <vector>

#include "nhs/params.hpp"

namespace nhs {

/// One sample of a figure curve.
struct CurvePoint {
  double power_ratio = 0.0;    // transmit-to-noise ratio, linear
  double metric = 0.0;         // outage probability or rate
  double ci_half_width = 0.0;  // 0 for analytic points
};

struct SlopeFit {
  double slope = 0.0;      // d log10(metric) / d log10(power)
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
  int zero_points_excluded = 0;
};

/// Inclusive index range [first, last] into a curve.
struct IndexWindow {
  std::size_t first = 0;
  std::size_t last = 0;
};

/// Probability that no device is admissible under BAC (the E0 event), by
/// direct quadrature of 1 - M e^{-l0 eps0/p} int e^{-l0 b^2 eps0 x} f(x)(1-F(x))^{M-1} dx.
double p_e0_exact(const SystemParams& params, double p);

/// High-power limit of p_e0_exact:
/// l0 b^2 eps0 int e^{-l0 b^2 eps0 x} (1 - F(x))^M dx. Independent of p.
double p_e0_high_snr(const SystemParams& params);

/// Extreme-value approximation k / (k - M L W_{-1}(-1/M)) with
/// k = l0 b^2 eps0 and L = lh lg. Requires M >= 3.
double p_e0_evt(const SystemParams& params);

/// Probability of {|S0| = m and the admitted device misses rs} when the
/// U0-to-device links are lossless (gamma_m = |h_m|^2). Lower-bounds the
/// Q_m term of the BAC outage. Requires 1 <= m <= M.
double qm_lower_bound(const SystemParams& params, double p, int m);

/// Exact decomposition of the WPT outage by |S2| = m, m = 0..M.
struct TTerms {
  std::vector<double> terms;
  bool full_diversity_condition = true;  // bar_eps0 * bar_epss < 1
  double total() const;
};

/// Conditional-on-h0 integrals T_0..T_M. When bar_eps0 * bar_epss >= 1 the
/// upper limit on |h0|^2 disappears and the integrals run to infinity; the
/// flag in the result records which regime was used.
TTerms t_terms_wpt(const SystemParams& params, double p);

/// Least squares line through (log10 power, log10 metric) over `window`.
/// Zero-metric points are skipped and counted. Throws std::invalid_argument
/// if fewer than two usable points remain.
SlopeFit fit_diversity_slope(const std::vector<CurvePoint>& curve, IndexWindow window);

/// Whole-curve convenience overload.
SlopeFit fit_diversity_slope(const std::vector<CurvePoint>& curve);

}  // namespace nhs
