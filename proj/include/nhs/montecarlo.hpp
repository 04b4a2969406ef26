#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "nhs/analysis.hpp"
#include "nhs/channel.hpp"
#include "nhs/params.hpp"

namespace nhs {

enum class Scheme { WPT, BAC };
enum class Metric { Outage, ErgodicRate };

std::string_view to_string(Scheme s);
std::string_view to_string(Metric m);

struct OutageEstimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double p_hat = 0.0;
  double ci_half_width = 0.0;  // 95%; Wilson interval when failures < 30
  std::uint64_t seed = 0;

  /// Binomial standard error sqrt(p (1-p) / n) at p_hat.
  double std_error() const;
};

struct RateEstimate {
  std::uint64_t trials = 0;
  double mean_rate = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

/// Builds an estimate (and its interval) from raw counts.
OutageEstimate make_outage_estimate(std::uint64_t failures, std::uint64_t trials,
                                    std::uint64_t seed);

struct EngineOptions {
  /// Worker count; 0 picks NHS_THREADS if set, else the hardware count.
  int threads = 0;
};

/// Worker count actually used for `opts`.
int resolve_threads(const EngineOptions& opts);

/// Seed used for the i-th point of a sweep started from `seed`.
std::uint64_t sweep_point_seed(std::uint64_t seed, std::size_t index);

/// Trial t draws its channels from CounterRng(seed, t), so the estimate is a
/// function of (inputs, seed) only, whatever the worker count.
OutageEstimate estimate_outage(Scheme scheme, const SystemParams& params, double p,
                               std::uint64_t trials, std::uint64_t seed,
                               const EngineOptions& opts = {});

/// Mean achieved rate of the scheduled device (0 when nobody is admitted).
RateEstimate estimate_ergodic_rate(Scheme scheme, const SystemParams& params, double p,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const EngineOptions& opts = {});

/// One point per power, each from sweep_point_seed(seed, i).
std::vector<CurvePoint> sweep(Scheme scheme, const SystemParams& params,
                              const std::vector<double>& powers, Metric metric,
                              std::uint64_t trials, std::uint64_t seed,
                              const EngineOptions& opts = {});

/// BAC trials tagged by the size of the admission set.
struct BacEventCounts {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> size_counts;     // index m: trials with |S0| = m (m = 0 is E0)
  std::vector<std::uint64_t> outage_by_size;  // index m: outages with |S0| = m

  std::uint64_t outages() const;
  /// Outage restricted to trials where somebody was admitted (E0 excluded).
  OutageEstimate conditional_on_admission() const;
  /// Joint probability of outage with at least one admissible device.
  OutageEstimate admitted_outage() const;
  OutageEstimate no_admission() const;
};

BacEventCounts estimate_bac_events(const SystemParams& params, double p, std::uint64_t trials,
                                   std::uint64_t seed, const EngineOptions& opts = {});

/// WPT trials tagged by |S2|.
struct WptEventCounts {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> size_counts;
  std::vector<std::uint64_t> outage_by_size;

  std::uint64_t outages() const;
};

WptEventCounts estimate_wpt_events(const SystemParams& params, double p, std::uint64_t trials,
                                   std::uint64_t seed, const EngineOptions& opts = {});

/// Counts trials whose realization satisfies `indicator`; same seeding and
/// partitioning contract as estimate_outage.
OutageEstimate estimate_probability(
    const SystemParams& params, std::uint64_t trials, std::uint64_t seed,
    const std::function<bool(const ChannelRealization&)>& indicator,
    const EngineOptions& opts = {});

}  // namespace nhs
