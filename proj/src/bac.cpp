#include "nhs/bac.hpp"

#include <algorithm>
#include <cmath>

namespace nhs::bac {

double theta(double h0_sq, double p, const SystemParams& params) {
  const double inv_b2 = 1.0 / (params.beta * params.beta);
  return inv_b2 * h0_sq / params.eps0() - inv_b2 / p;
}

double rate_bac0(double h0_sq, double gamma, double p, const SystemParams& params) {
  const double b2 = params.beta * params.beta;
  return std::log2(1.0 + p * h0_sq / (p * b2 * gamma + 1.0));
}

double rate_bacm(double gamma, double s0_sq, double p, const SystemParams& params) {
  return std::log2(1.0 + p * params.beta * params.beta * gamma * s0_sq);
}

ScheduleDecision schedule(const ChannelRealization& real, double p, const SystemParams& params) {
  const double threshold = theta(real.h0_sq, p, params);
  if (threshold < 0.0) return ScheduleDecision::none();
  int best = -1;
  for (int m = 0; m < static_cast<int>(real.gamma.size()); ++m) {
    const double g = real.gamma[m];
    if (g <= threshold && (best < 0 || g > real.gamma[best])) best = m;
  }
  if (best < 0) return ScheduleDecision::none();
  ScheduleDecision d;
  d.admitted = best;
  d.sic_stage = SicStage::Second;
  d.achieved_rate = rate_bacm(real.gamma[best], real.s0_sq, p, params);
  return d;
}

bool outage(const ChannelRealization& real, double p, const SystemParams& params) {
  const ScheduleDecision d = schedule(real, p, params);
  return !d.is_admitted() || d.achieved_rate < params.rs;
}

int admission_count(const ChannelRealization& real, double p, const SystemParams& params) {
  const double threshold = theta(real.h0_sq, p, params);
  if (threshold < 0.0) return 0;
  return static_cast<int>(
      std::count_if(real.gamma.begin(), real.gamma.end(), [&](double g) { return g <= threshold; }));
}

}  // namespace nhs::bac
