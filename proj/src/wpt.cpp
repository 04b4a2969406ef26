#include "nhs/wpt.hpp"

#include <algorithm>
#include <cmath>

namespace nhs::wpt {

double tau_signed(double h0_sq, double p, const SystemParams& params) {
  const double e = params.eta * params.bar_alpha();
  return h0_sq / (params.bar_eps0() * e) - 1.0 / (e * p);
}

double tau(double h0_sq, double p, const SystemParams& params) {
  return std::max(0.0, tau_signed(h0_sq, p, params));
}

double rate_wp1(double gamma, double h0_sq, double p, const SystemParams& params) {
  const double snr = params.eta * p * params.bar_alpha() * gamma / (p * h0_sq + 1.0);
  return (1.0 - params.alpha) * std::log2(1.0 + snr);
}

double rate_wp0(double gamma, double h0_sq, double p, const SystemParams& params) {
  const double sinr = p * h0_sq / (params.eta * p * params.bar_alpha() * gamma + 1.0);
  return (1.0 - params.alpha) * std::log2(1.0 + sinr);
}

double rate_wp2(double gamma, double p, const SystemParams& params) {
  return (1.0 - params.alpha) * std::log2(1.0 + params.eta * p * params.bar_alpha() * gamma);
}

ScheduleDecision schedule(const ChannelRealization& real, double p, const SystemParams& params) {
  const double threshold = tau_signed(real.h0_sq, p, params);
  ScheduleDecision best;
  for (int m = 0; m < static_cast<int>(real.gamma.size()); ++m) {
    const double g = real.gamma[m];
    const bool second = g <= threshold;
    const double rate = second ? rate_wp2(g, p, params) : rate_wp1(g, real.h0_sq, p, params);
    if (!best.admitted || rate > best.achieved_rate) {
      best.admitted = m;
      best.sic_stage = second ? SicStage::Second : SicStage::First;
      best.achieved_rate = rate;
    }
  }
  return best;
}

bool outage(const ChannelRealization& real, double p, const SystemParams& params) {
  return schedule(real, p, params).achieved_rate < params.rs;
}

int second_stage_count(const ChannelRealization& real, double p, const SystemParams& params) {
  const double threshold = tau_signed(real.h0_sq, p, params);
  return static_cast<int>(
      std::count_if(real.gamma.begin(), real.gamma.end(), [&](double g) { return g <= threshold; }));
}

}  // namespace nhs::wpt
