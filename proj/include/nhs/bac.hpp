#pragma once

#include "nhs/channel.hpp"
#include "nhs/params.hpp"
#include "nhs/schedule.hpp"

// BAC-NOMA: the admitted device backscatters U0's signal, so U0 is always
// decoded first and its symbol acts as a multiplicative fade |s0|^2.
namespace nhs::bac {

/// Admission threshold beta^-2 eps0^-1 h0 - beta^-2 p^-1; may be negative.
double theta(double h0_sq, double p, const SystemParams& params);

/// U0's rate with the backscattered signal as interference.
double rate_bac0(double h0_sq, double gamma, double p, const SystemParams& params);

/// Device rate after U0 is removed: log2(1 + p beta^2 gamma |s0|^2).
double rate_bacm(double gamma, double s0_sq, double p, const SystemParams& params);

/// Admits the strongest device with gamma <= theta, or nobody.
ScheduleDecision schedule(const ChannelRealization& real, double p, const SystemParams& params);

/// True when nobody is admitted or the admitted device cannot reach rs.
bool outage(const ChannelRealization& real, double p, const SystemParams& params);

/// Size of the admission set |S0|.
int admission_count(const ChannelRealization& real, double p, const SystemParams& params);

}  // namespace nhs::bac
