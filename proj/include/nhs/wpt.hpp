#pragma once

#include "nhs/channel.hpp"
#include "nhs/params.hpp"
#include "nhs/schedule.hpp"

// WPT-NOMA with hybrid SIC. The admitted device harvests from U0 for a
// fraction alpha of the block and transmits in the rest; `p` is U0's transmit
// power normalised by the noise power.
namespace nhs::wpt {

/// Largest gamma a device may have for U0 to be decoded first:
/// max{0, h0/(bar_eps0 eta bar_alpha) - 1/(eta p bar_alpha)}.
double tau(double h0_sq, double p, const SystemParams& params);

/// tau before clamping at zero; negative when U0 fails even against silence.
double tau_signed(double h0_sq, double p, const SystemParams& params);

/// Rate of a device decoded at the first SIC stage (U0 treated as noise).
double rate_wp1(double gamma, double h0_sq, double p, const SystemParams& params);

/// U0's rate when it is decoded first, with the device as interference.
double rate_wp0(double gamma, double h0_sq, double p, const SystemParams& params);

/// Rate of a device decoded at the second SIC stage (interference free).
double rate_wp2(double gamma, double p, const SystemParams& params);

/// Picks the device and SIC stage with the largest rate. Devices with
/// gamma <= tau may be decoded second; others only first. Ties go to the
/// lowest index.
ScheduleDecision schedule(const ChannelRealization& real, double p, const SystemParams& params);

/// True when the scheduled device cannot reach rs.
bool outage(const ChannelRealization& real, double p, const SystemParams& params);

/// Number of devices eligible for the second stage (|S2|).
int second_stage_count(const ChannelRealization& real, double p, const SystemParams& params);

}  // namespace nhs::wpt
