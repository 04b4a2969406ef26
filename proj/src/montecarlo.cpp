#include "nhs/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "nhs/bac.hpp"
#include "nhs/rng.hpp"
#include "nhs/wpt.hpp"

namespace nhs {
namespace {

constexpr std::uint64_t kBlockSize = 1u << 15;
constexpr double kZ95 = 1.959963984540054;

// Runs trials [0, trials) in fixed-size blocks; each block gets its own
// accumulator and blocks are merged in index order, so the result does not
// depend on how blocks were spread over workers.
template <class Acc, class MakeAcc, class Body, class Merge>
Acc run_blocks(const SystemParams& params, std::uint64_t trials, std::uint64_t seed, int threads,
               MakeAcc make_acc, Body body, Merge merge) {
  const std::uint64_t n_blocks = (trials + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> partial(n_blocks, make_acc());
  std::atomic<std::uint64_t> next{0};

  auto worker = [&]() {
    ChannelRealization real;
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      const std::uint64_t lo = b * kBlockSize;
      const std::uint64_t hi = std::min(trials, lo + kBlockSize);
      Acc& acc = partial[b];
      for (std::uint64_t t = lo; t < hi; ++t) {
        CounterRng rng(seed, t);
        sample_realization(params, rng, real);
        body(acc, real);
      }
    }
  };

  const int n_workers =
      static_cast<int>(std::min<std::uint64_t>(std::max(threads, 1), std::max<std::uint64_t>(n_blocks, 1)));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  }

  Acc total = make_acc();
  for (const Acc& a : partial) merge(total, a);
  return total;
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct RateAcc {
  CompensatedSum sum;
  CompensatedSum sum_sq;
};

void check_trials(std::uint64_t trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

void check_power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("power must be > 0");
}

double scheduled_rate(Scheme scheme, const ChannelRealization& real, double p,
                      const SystemParams& params) {
  return scheme == Scheme::WPT ? wpt::schedule(real, p, params).achieved_rate
                               : bac::schedule(real, p, params).achieved_rate;
}

bool scheme_outage(Scheme scheme, const ChannelRealization& real, double p,
                   const SystemParams& params) {
  return scheme == Scheme::WPT ? wpt::outage(real, p, params) : bac::outage(real, p, params);
}

}  // namespace

std::string_view to_string(Scheme s) { return s == Scheme::WPT ? "WPT" : "BAC"; }

std::string_view to_string(Metric m) {
  return m == Metric::Outage ? "outage" : "ergodic_rate";
}

double OutageEstimate::std_error() const {
  if (trials == 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / double(trials));
}

OutageEstimate make_outage_estimate(std::uint64_t failures, std::uint64_t trials,
                                    std::uint64_t seed) {
  check_trials(trials);
  if (failures > trials) throw std::invalid_argument("failures exceed trials");
  OutageEstimate e;
  e.trials = trials;
  e.failures = failures;
  e.seed = seed;
  const double n = double(trials);
  e.p_hat = double(failures) / n;
  if (failures < 30) {
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    e.ci_half_width =
        kZ95 / denom * std::sqrt(e.p_hat * (1.0 - e.p_hat) / n + z2 / (4.0 * n * n));
  } else {
    e.ci_half_width = kZ95 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / n);
  }
  return e;
}

int resolve_threads(const EngineOptions& opts) {
  if (opts.threads > 0) return opts.threads;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("NHS_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) hw = std::min<long>(hw, cap);
  }
  return hw;
}

std::uint64_t sweep_point_seed(std::uint64_t seed, std::size_t index) {
  return derive_key(seed ^ 0xa5a5a5a5a5a5a5a5ULL, index);
}

OutageEstimate estimate_probability(
    const SystemParams& params, std::uint64_t trials, std::uint64_t seed,
    const std::function<bool(const ChannelRealization&)>& indicator, const EngineOptions& opts) {
  check_trials(trials);
  const auto count = run_blocks<std::uint64_t>(
      params, trials, seed, resolve_threads(opts), [] { return std::uint64_t{0}; },
      [&](std::uint64_t& acc, const ChannelRealization& r) { acc += indicator(r) ? 1 : 0; },
      [](std::uint64_t& total, std::uint64_t part) { total += part; });
  return make_outage_estimate(count, trials, seed);
}

OutageEstimate estimate_outage(Scheme scheme, const SystemParams& params, double p,
                               std::uint64_t trials, std::uint64_t seed,
                               const EngineOptions& opts) {
  check_power(p);
  return estimate_probability(
      params, trials, seed,
      [&](const ChannelRealization& r) { return scheme_outage(scheme, r, p, params); }, opts);
}

RateEstimate estimate_ergodic_rate(Scheme scheme, const SystemParams& params, double p,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const EngineOptions& opts) {
  check_trials(trials);
  check_power(p);
  const RateAcc acc = run_blocks<RateAcc>(
      params, trials, seed, resolve_threads(opts), [] { return RateAcc{}; },
      [&](RateAcc& a, const ChannelRealization& r) {
        const double rate = scheduled_rate(scheme, r, p, params);
        a.sum.add(rate);
        a.sum_sq.add(rate * rate);
      },
      [](RateAcc& total, const RateAcc& part) {
        total.sum.add(part.sum.value());
        total.sum_sq.add(part.sum_sq.value());
      });
  RateEstimate e;
  e.trials = trials;
  e.seed = seed;
  const double n = double(trials);
  e.mean_rate = acc.sum.value() / n;
  if (trials > 1) {
    const double var = std::max(0.0, (acc.sum_sq.value() - n * e.mean_rate * e.mean_rate) / (n - 1.0));
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

std::vector<CurvePoint> sweep(Scheme scheme, const SystemParams& params,
                              const std::vector<double>& powers, Metric metric,
                              std::uint64_t trials, std::uint64_t seed,
                              const EngineOptions& opts) {
  if (powers.empty()) throw std::invalid_argument("sweep: no powers");
  for (std::size_t i = 1; i < powers.size(); ++i) {
    if (!(powers[i] > powers[i - 1])) {
      throw std::invalid_argument("sweep: powers must be strictly increasing");
    }
  }
  std::vector<CurvePoint> out;
  out.reserve(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const std::uint64_t point_seed = sweep_point_seed(seed, i);
    CurvePoint pt;
    pt.power_ratio = powers[i];
    if (metric == Metric::Outage) {
      const OutageEstimate e = estimate_outage(scheme, params, powers[i], trials, point_seed, opts);
      pt.metric = e.p_hat;
      pt.ci_half_width = e.ci_half_width;
    } else {
      const RateEstimate e =
          estimate_ergodic_rate(scheme, params, powers[i], trials, point_seed, opts);
      pt.metric = e.mean_rate;
      pt.ci_half_width = kZ95 * e.std_error;
    }
    out.push_back(pt);
  }
  return out;
}

namespace {

struct SizeTally {
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint64_t> outages;
};

SizeTally make_tally(int m) {
  return {std::vector<std::uint64_t>(m + 1, 0), std::vector<std::uint64_t>(m + 1, 0)};
}

void merge_tally(SizeTally& total, const SizeTally& part) {
  for (std::size_t i = 0; i < total.sizes.size(); ++i) {
    total.sizes[i] += part.sizes[i];
    total.outages[i] += part.outages[i];
  }
}

std::uint64_t sum_counts(const std::vector<std::uint64_t>& v) {
  std::uint64_t s = 0;
  for (auto c : v) s += c;
  return s;
}

}  // namespace

std::uint64_t BacEventCounts::outages() const { return sum_counts(outage_by_size); }

OutageEstimate BacEventCounts::conditional_on_admission() const {
  const std::uint64_t admitted = trials - size_counts.at(0);
  if (admitted == 0) throw std::runtime_error("no trial admitted a device");
  return make_outage_estimate(outages() - outage_by_size.at(0), admitted, seed);
}

OutageEstimate BacEventCounts::admitted_outage() const {
  return make_outage_estimate(outages() - outage_by_size.at(0), trials, seed);
}

OutageEstimate BacEventCounts::no_admission() const {
  return make_outage_estimate(size_counts.at(0), trials, seed);
}

std::uint64_t WptEventCounts::outages() const { return sum_counts(outage_by_size); }

BacEventCounts estimate_bac_events(const SystemParams& params, double p, std::uint64_t trials,
                                   std::uint64_t seed, const EngineOptions& opts) {
  check_trials(trials);
  check_power(p);
  const int m = params.m_devices;
  const SizeTally t = run_blocks<SizeTally>(
      params, trials, seed, resolve_threads(opts), [m] { return make_tally(m); },
      [&](SizeTally& acc, const ChannelRealization& r) {
        const int size = bac::admission_count(r, p, params);
        ++acc.sizes[size];
        if (bac::outage(r, p, params)) ++acc.outages[size];
      },
      merge_tally);
  return {trials, seed, t.sizes, t.outages};
}

WptEventCounts estimate_wpt_events(const SystemParams& params, double p, std::uint64_t trials,
                                   std::uint64_t seed, const EngineOptions& opts) {
  check_trials(trials);
  check_power(p);
  const int m = params.m_devices;
  const SizeTally t = run_blocks<SizeTally>(
      params, trials, seed, resolve_threads(opts), [m] { return make_tally(m); },
      [&](SizeTally& acc, const ChannelRealization& r) {
        const int size = wpt::second_stage_count(r, p, params);
        ++acc.sizes[size];
        if (wpt::outage(r, p, params)) ++acc.outages[size];
      },
      merge_tally);
  return {trials, seed, t.sizes, t.outages};
}

}  // namespace nhs
