#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "nhs/analysis.hpp"
#include "nhs/bac.hpp"
#include "nhs/montecarlo.hpp"

using namespace nhs;

namespace {

SystemParams unit(int m, double r0 = 0.1, double rs = 1.2, double alpha = 0.5) {
  SystemParams raw;
  raw.m_devices = m;
  raw.r0 = r0;
  raw.rs = rs;
  raw.alpha = alpha;
  return SystemParams::unit_links(raw);
}

SystemParams figure(int m, double d0h, double dg) {
  SystemParams raw;
  raw.m_devices = m;
  raw.d0 = raw.dh = d0h;
  raw.dg = dg;
  return SystemParams::make(raw);
}

double dbm(double v) { return std::pow(10.0, (v + 94.0) / 10.0); }

}  // namespace

TEST(MakeOutageEstimate, NormalInterval) {
  const OutageEstimate e = make_outage_estimate(1000, 10000, 3);
  EXPECT_DOUBLE_EQ(e.p_hat, 0.1);
  EXPECT_NEAR(e.ci_half_width, 1.959963984540054 * std::sqrt(0.09 / 1e4), 1e-15);
  EXPECT_NEAR(e.std_error(), 0.003, 1e-15);
  EXPECT_EQ(e.seed, 3u);
}

TEST(MakeOutageEstimate, WilsonIntervalForRareFailures) {
  const OutageEstimate zero = make_outage_estimate(0, 1'000'000, 0);
  EXPECT_EQ(zero.p_hat, 0.0);
  EXPECT_GT(zero.ci_half_width, 0.0);
  EXPECT_LT(zero.ci_half_width, 5e-6);
  const OutageEstimate few = make_outage_estimate(10, 1'000'000, 0);
  EXPECT_GT(few.ci_half_width, 0.0);
  EXPECT_THROW(make_outage_estimate(5, 4, 0), std::invalid_argument);
  EXPECT_THROW(make_outage_estimate(0, 0, 0), std::invalid_argument);
}

TEST(EstimateOutage, ZeroTargetRateNeverFailsForWpt) {
  const OutageEstimate e = estimate_outage(Scheme::WPT, unit(3, 0.1, 0.0), 1.0, 100'000, 1);
  EXPECT_EQ(e.failures, 0u);
  EXPECT_EQ(e.p_hat, 0.0);
}

TEST(EstimateOutage, ZeroTargetRateLeavesOnlyNoAdmissionForBac) {
  const SystemParams s = unit(3, 0.1, 0.0);
  const auto e = estimate_outage(Scheme::BAC, s, 1.0, 100'000, 1);
  const auto ev = estimate_bac_events(s, 1.0, 100'000, 1);
  EXPECT_EQ(e.failures, ev.size_counts[0]);
  EXPECT_EQ(ev.admitted_outage().failures, 0u);
}

TEST(EstimateOutage, VanishingPowerAlwaysFails) {
  for (Scheme sc : {Scheme::WPT, Scheme::BAC}) {
    EXPECT_GT(estimate_outage(sc, unit(3), 1e-6, 100'000, 2).p_hat, 0.999);
  }
}

TEST(EstimateOutage, BacFloorDecomposition) {
  // Fig. 3 geometry at a very high power: the outage is P(E0) plus the
  // admitted-but-short events, which are tagged separately.
  const SystemParams s = figure(3, 100.0, 1.0);
  const double p = 1e13;
  const auto ev = estimate_bac_events(s, p, 10'000'000, 4);
  const auto total = make_outage_estimate(ev.outages(), ev.trials, ev.seed);
  const double residual = total.p_hat - p_e0_high_snr(s) - ev.admitted_outage().p_hat;
  EXPECT_LE(std::abs(residual), 3.0 * total.ci_half_width);
}

TEST(EstimateOutage, RejectsBadInputs) {
  EXPECT_THROW(estimate_outage(Scheme::WPT, unit(1), 1.0, 0, 1), std::invalid_argument);
  EXPECT_THROW(estimate_outage(Scheme::WPT, unit(1), 0.0, 10, 1), std::invalid_argument);
}

TEST(Reproducibility, IdenticalForAnyWorkerCount) {
  const SystemParams s = unit(3);
  const std::uint64_t trials = 300'001;
  const auto ref_out = estimate_outage(Scheme::WPT, s, 100.0, trials, 5, {1});
  const auto ref_rate = estimate_ergodic_rate(Scheme::BAC, s, 100.0, trials, 5, {1});
  const auto ref_ev = estimate_bac_events(s, 100.0, trials, 5, {1});
  for (int threads : {2, 3, 7, 16, 64}) {
    const auto o = estimate_outage(Scheme::WPT, s, 100.0, trials, 5, {threads});
    EXPECT_EQ(o.failures, ref_out.failures) << threads;
    const auto r = estimate_ergodic_rate(Scheme::BAC, s, 100.0, trials, 5, {threads});
    EXPECT_EQ(r.mean_rate, ref_rate.mean_rate) << threads;
    EXPECT_EQ(r.std_error, ref_rate.std_error) << threads;
    const auto ev = estimate_bac_events(s, 100.0, trials, 5, {threads});
    EXPECT_EQ(ev.size_counts, ref_ev.size_counts);
    EXPECT_EQ(ev.outage_by_size, ref_ev.outage_by_size);
  }
}

TEST(Reproducibility, SeedChangesResult) {
  const SystemParams s = unit(2);
  EXPECT_NE(estimate_ergodic_rate(Scheme::WPT, s, 100.0, 10'000, 1).mean_rate,
            estimate_ergodic_rate(Scheme::WPT, s, 100.0, 10'000, 2).mean_rate);
}

TEST(Coverage, NinetyFivePercentIntervalIsCalibrated) {
  // |h0|^2 > ln 10 with unit rate has probability exactly 0.1.
  const SystemParams s = unit(1);
  const double truth = 0.1;
  int covered = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto e = estimate_probability(
        s, 10'000, 1'000'000 + rep,
        [](const ChannelRealization& r) { return r.h0_sq > std::log(10.0); }, {1});
    if (std::abs(e.p_hat - truth) <= e.ci_half_width) ++covered;
  }
  EXPECT_GE(covered, 930);
}

TEST(Coverage, IntervalShrinksBySqrtTwo) {
  const SystemParams s = unit(2);
  const auto a = estimate_outage(Scheme::WPT, s, 30.0, 200'000, 9);
  const auto b = estimate_outage(Scheme::WPT, s, 30.0, 400'000, 9);
  ASSERT_GT(a.failures, 30u);
  EXPECT_NEAR(a.ci_half_width / b.ci_half_width, std::sqrt(2.0), 0.1 * std::sqrt(2.0));
}

TEST(ErgodicRate, IndependentOfTargetRate) {
  for (Scheme sc : {Scheme::WPT, Scheme::BAC}) {
    const auto a = estimate_ergodic_rate(sc, unit(3, 0.1, 1.0), 100.0, 50'000, 3);
    const auto b = estimate_ergodic_rate(sc, unit(3, 0.1, 3.0), 100.0, 50'000, 3);
    EXPECT_EQ(a.mean_rate, b.mean_rate);
    EXPECT_EQ(a.std_error, b.std_error);
  }
}

TEST(ErgodicRate, WptVanishesAsHarvestingTakesTheBlock) {
  double prev = 1e9;
  for (double alpha : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
    const double r = estimate_ergodic_rate(Scheme::WPT, unit(2, 0.1, 1.2, alpha), 100.0, 50'000, 3)
                         .mean_rate;
    EXPECT_LT(r, prev) << alpha;
    prev = r;
  }
  EXPECT_LT(prev, 5e-3);
}

TEST(ErgodicRate, BacSingleDeviceMatchesDirectAverage) {
  // With r0 tiny theta is enormous, so the device is always admitted.
  const SystemParams s = unit(1, 1e-9);
  const double p = 1e3;
  const std::uint64_t n = 10'000'000;
  const auto e = estimate_ergodic_rate(Scheme::BAC, s, p, n, 12);

  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t t = 0; t < n; ++t) {
    CounterRng rng(0xdecafbad, t);
    const double g = rng.exponential(1.0) * rng.exponential(1.0);
    const double v = std::log2(1.0 + p * s.beta * s.beta * g * rng.exponential(1.0));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  EXPECT_LE(std::abs(e.mean_rate - mean), 3.0 * std::hypot(se, e.std_error));
}

TEST(Sweep, SinglePointEqualsEstimate) {
  const SystemParams s = unit(2);
  const auto c = sweep(Scheme::WPT, s, {50.0}, Metric::Outage, 20'000, 8);
  ASSERT_EQ(c.size(), 1u);
  const auto e = estimate_outage(Scheme::WPT, s, 50.0, 20'000, sweep_point_seed(8, 0));
  EXPECT_EQ(c[0].metric, e.p_hat);
  EXPECT_EQ(c[0].ci_half_width, e.ci_half_width);
  EXPECT_EQ(c[0].power_ratio, 50.0);
}

TEST(Sweep, RejectsUnsortedPowers) {
  EXPECT_THROW(sweep(Scheme::WPT, unit(1), {10.0, 10.0}, Metric::Outage, 10, 1),
               std::invalid_argument);
  EXPECT_THROW(sweep(Scheme::WPT, unit(1), {}, Metric::Outage, 10, 1), std::invalid_argument);
}

TEST(Sweep, WptOutageFallsWithPower) {
  const SystemParams s = figure(2, 50.0, 5.0);
  std::vector<double> powers;
  for (double d = 0.0; d <= 50.0; d += 5.0) powers.push_back(dbm(d));
  const auto c = sweep(Scheme::WPT, s, powers, Metric::Outage, 200'000, 21);
  for (std::size_t i = 1; i < c.size(); ++i) {
    EXPECT_LE(c[i].metric, c[i - 1].metric + c[i].ci_half_width + c[i - 1].ci_half_width) << i;
  }
  EXPECT_LT(c.back().metric, 0.01 * c.front().metric);
}

TEST(Sweep, BacFloorIsFlat) {
  // At 1e7 trials a 5% gap is about one standard error of the difference, so
  // the interval half-widths are added to the allowance.
  const SystemParams s = figure(3, 100.0, 1.0);
  const auto c = sweep(Scheme::BAC, s, {dbm(50.0), dbm(60.0), dbm(70.0)}, Metric::Outage,
                       10'000'000, 13);
  const CurvePoint& last = c.back();
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    EXPECT_LE(std::abs(c[i].metric - last.metric),
              0.05 * last.metric + c[i].ci_half_width + last.ci_half_width)
        << i;
  }
  EXPECT_NEAR(last.metric, p_e0_high_snr(s), 3.0 * last.ci_half_width);
}

TEST(Sweep, RateCurveReportsInterval) {
  const auto c = sweep(Scheme::BAC, unit(2), {10.0, 100.0}, Metric::ErgodicRate, 20'000, 2);
  const auto e = estimate_ergodic_rate(Scheme::BAC, unit(2), 100.0, 20'000, sweep_point_seed(2, 1));
  EXPECT_EQ(c[1].metric, e.mean_rate);
  EXPECT_NEAR(c[1].ci_half_width, 1.959963984540054 * e.std_error, 1e-15);
}

TEST(ThreadCount, EnvironmentCapsWorkers) {
  setenv("NHS_THREADS", "1", 1);
  EXPECT_EQ(resolve_threads({}), 1);
  EXPECT_EQ(resolve_threads({5}), 5);
  unsetenv("NHS_THREADS");
  EXPECT_GE(resolve_threads({}), 1);
}
