// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nhs/analysis.hpp"
#include "nhs/channel.hpp"
#include "nhs/experiment.hpp"
#include "nhs/montecarlo.hpp"
#include "nhs/quadrature.hpp"
#include "nhs/specfun.hpp"

using namespace nhs;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

SystemParams unit(int m, double r0, double rs, double alpha = 0.5) {
  SystemParams raw;
  raw.m_devices = m;
  raw.r0 = r0;
  raw.rs = rs;
  raw.alpha = alpha;
  raw.eta = 0.1;
  raw.beta = 0.1;
  return SystemParams::unit_links(raw);
}

SystemParams from_preset(const ExperimentConfig& c, int m, double alpha) {
  SystemParams raw = c.base;
  raw.m_devices = m;
  raw.alpha = alpha;
  return SystemParams::make(raw);
}

double combined(double a, double b) { return std::hypot(a, b); }

std::string fmt_list(const std::vector<double>& v, const char* spec = "{:.3g}") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt::format(fmt::runtime(spec), v[i]);
  }
  return out;
}

// Sweeps P upward in quarter decades until the estimate drops to about 1e-5,
// then fits the last decade.
Outcome wpt_diversity() {
  constexpr std::uint64_t kTrials = 10'000'000;
  bool pass = true;
  std::string detail;
  for (int m : {1, 2, 3}) {
    const SystemParams s = unit(m, 0.1, 1.2);
    std::vector<CurvePoint> curve;
    for (int k = 8; k <= 40; ++k) {
      const double p = std::pow(10.0, k / 4.0);
      const auto e = estimate_outage(Scheme::WPT, s, p, kTrials, derive_key(1, 100 * m + k));
      curve.push_back({p, e.p_hat, e.ci_half_width});
      if (e.p_hat <= 1.5e-5) break;
    }
    const std::size_t last = curve.size() - 1;
    const SlopeFit fit = fit_diversity_slope(curve, {last - 4, last});
    const bool ok = std::abs(fit.slope + m) <= 0.5 && curve.back().metric <= 1.5e-5;
    pass = pass && ok;
    detail += fmt::format("{}M={}: slope {:.3f} over P=1e{:.2f}..1e{:.2f} (outage {:.2e}..{:.2e})",
                          detail.empty() ? "" : "; ", m, fit.slope,
                          std::log10(curve[last - 4].power_ratio),
                          std::log10(curve[last].power_ratio), curve[last - 4].metric,
                          curve[last].metric);
  }
  return {pass, detail};
}

Outcome wpt_floor() {
  bool pass = true;
  std::string detail;
  for (int m : {1, 2, 3}) {
    const SystemParams s = unit(m, 2.0, 1.2);
    std::vector<double> powers;
    for (int k = 2; k <= 8; ++k) powers.push_back(std::pow(10.0, k));
    const auto c = sweep(Scheme::WPT, s, powers, Metric::Outage, 1'000'000, derive_key(2, m));
    const std::size_t n = c.size();
    double spread = 0.0;
    for (std::size_t i = n - 3; i < n; ++i) {
      spread = std::max(spread, std::abs(c[i].metric - c[n - 1].metric) / c[n - 1].metric);
    }
    pass = pass && spread < 0.10 && !s.full_diversity_condition();
    detail += fmt::format("{}M={}: outage {} at P=1e6..1e8, spread {:.2f}%",
                          detail.empty() ? "" : "; ", m,
                          fmt_list({c[n - 3].metric, c[n - 2].metric, c[n - 1].metric}), 100.0 * spread);
  }
  return {pass, detail};
}

Outcome bac_floor() {
  const ExperimentConfig cfg = *preset("fig3");
  const auto dbm = cfg.powers_dbm();
  bool pass = true;
  std::string detail;
  for (int m : cfg.m_devices) {
    const SystemParams s = from_preset(cfg, m, 0.5);
    const double high = p_e0_high_snr(s);
    for (std::size_t i = dbm.size() - 2; i < dbm.size(); ++i) {
      const double p = cfg.power_ratio(dbm[i]);
      const auto e = estimate_outage(Scheme::BAC, s, p, cfg.trials, derive_key(3, 10 * m + i));
      const double exact = p_e0_exact(s, p);
      const bool ok = std::abs(e.p_hat - exact) <= 3.0 * e.ci_half_width &&
                      std::abs(exact - high) < 1e-4;
      pass = pass && ok;
      detail += fmt::format("{}M={} {}dBm: mc {:.4g}+-{:.2g} exact {:.4g} limit {:.4g}",
                            detail.empty() ? "" : "; ", m, dbm[i], e.p_hat, e.ci_half_width,
                            exact, high);
    }
  }
  return {pass, detail};
}

Outcome lemma_trend() {
  std::vector<double> high, ratio;
  bool pass = true;
  for (int m : {1, 2, 4, 8, 16, 32}) {
    high.push_back(p_e0_high_snr(unit(m, 0.1, 1.2)));
    if (high.size() > 1 && !(high.back() < high[high.size() - 2])) pass = false;
  }
  double prev_gap = INFINITY;
  for (int m : {16, 32, 64, 128}) {
    const SystemParams s = unit(m, 0.1, 1.2);
    ratio.push_back(p_e0_evt(s) / p_e0_high_snr(s));
    const double gap = std::abs(1.0 - ratio.back());
    if (!(gap < prev_gap)) pass = false;
    prev_gap = gap;
  }
  return {pass, fmt::format("high-SNR floor M=1..32: {}; evt/high M=16..128: {}",
                            fmt_list(high), fmt_list(ratio, "{:.4f}"))};
}

Outcome bac_diversity_cap() {
  const SystemParams s = unit(3, 0.1, 1.2);
  std::vector<CurvePoint> curve;
  for (int k = 6; k <= 12; ++k) {
    const double p = std::pow(10.0, k / 2.0);
    const auto ev = estimate_bac_events(s, p, 10'000'000, derive_key(5, k));
    const auto c = ev.conditional_on_admission();
    curve.push_back({p, c.p_hat, c.ci_half_width});
  }
  const std::size_t last = curve.size() - 1;
  const SlopeFit fit = fit_diversity_slope(curve, {last - 2, last});
  const bool pass = fit.slope > -1.35 && fit.slope < -0.65;
  return {pass, fmt::format("M=3 conditional outage {} over P=1e5..1e6, slope {:.3f}",
                            fmt_list({curve[last - 2].metric, curve[last - 1].metric,
                                      curve[last].metric}),
                            fit.slope)};
}

Outcome scheme_ordering() {
  const ExperimentConfig cfg = *preset("fig1a");
  const auto dbm = cfg.powers_dbm();
  bool pass = true;
  std::string detail;
  for (int m : {2, 3}) {
    const SystemParams s = from_preset(cfg, m, 0.5);
    for (std::size_t i = dbm.size() - 3; i < dbm.size(); ++i) {
      const double p = cfg.power_ratio(dbm[i]);
      const auto w = estimate_outage(Scheme::WPT, s, p, cfg.trials, derive_key(6, 100 * m + i));
      const auto b = estimate_outage(Scheme::BAC, s, p, cfg.trials, derive_key(7, 100 * m + i));
      const bool ok = b.p_hat - w.p_hat > w.ci_half_width + b.ci_half_width;
      pass = pass && ok;
      detail += fmt::format("{}M={} {}dBm: WPT {:.3g} BAC {:.3g}", detail.empty() ? "" : "; ", m,
                            dbm[i], w.p_hat, b.p_hat);
    }
  }
  return {pass, detail};
}

Outcome rate_crossover() {
  const ExperimentConfig cfg = *preset("fig2b");
  const double p = cfg.power_ratio(cfg.power_dbm_range.stop);
  const SystemParams s = from_preset(cfg, 5, 0.5);
  const auto w = estimate_ergodic_rate(Scheme::WPT, s, p, cfg.trials, derive_key(8, 1));
  const auto b = estimate_ergodic_rate(Scheme::BAC, s, p, cfg.trials, derive_key(8, 2));
  const double sigma = combined(w.std_error, b.std_error);
  const bool pass = b.mean_rate - w.mean_rate > 3.0 * sigma;
  return {pass, fmt::format("{} dBm, M=5: BAC {:.4f} vs WPT {:.4f} BPCU (sigma {:.2g})",
                            cfg.power_dbm_range.stop, b.mean_rate, w.mean_rate, sigma)};
}

Outcome alpha_sensitivity() {
  const ExperimentConfig cfg = *preset("fig4");
  constexpr double kDbm = 25.0;
  const double p = cfg.power_ratio(kDbm);
  std::vector<OutageEstimate> est;
  for (double a : {0.1, 0.5, 0.9}) {
    est.push_back(estimate_outage(Scheme::WPT, from_preset(cfg, 5, a), p, 10'000'000,
                                  derive_key(9, std::uint64_t(a * 10))));
  }
  const auto& mid = est[1];
  bool pass = true;
  for (int i : {0, 2}) {
    pass = pass &&
           est[i].p_hat - mid.p_hat > 3.0 * combined(est[i].ci_half_width, mid.ci_half_width);
  }
  return {pass, fmt::format("{} dBm: outage alpha=0.1 {:.3g}, 0.5 {:.3g}, 0.9 {:.3g}", kDbm,
                            est[0].p_hat, est[1].p_hat, est[2].p_hat)};
}

Outcome t_terms_oracle() {
  const SystemParams s = unit(2, 0.1, 1.2);
  bool pass = true;
  std::string detail;
  for (double p : {1e3, 1e4}) {
    const double analytic = t_terms_wpt(s, p).total();
    const auto e = estimate_outage(Scheme::WPT, s, p, 10'000'000, derive_key(10, std::uint64_t(p)));
    const double sigma = std::sqrt(analytic * (1.0 - analytic) / double(e.trials));
    const double z = (e.p_hat - analytic) / sigma;
    pass = pass && std::abs(z) <= 3.0;
    detail += fmt::format("{}P={:.0e}: T-sum {:.5g} mc {:.5g} ({:+.2f} sigma)",
                          detail.empty() ? "" : "; ", p, analytic, e.p_hat, z);
  }
  return {pass, detail};
}

// K_nu(x) from its integral representation by the trapezoid rule.
double k_integral(int nu, double x) {
  const double t_max = std::acosh(1.0 + 750.0 / x);
  const double h = std::min(2e-3, 0.05 / std::sqrt(x));
  double sum = 0.5;
  for (double t = h; t <= t_max; t += h) sum += std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
  return h * sum * std::exp(-x);
}

Outcome numerics() {
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  check(bessel_k0(1e-8) >= 18.0 && bessel_k0(1e-8) <= 19.0, "K0(1e-8)");
  check(std::abs(bessel_k0(1.0) - 0.42102443824070834) < 1e-15, "K0(1)");
  check(bessel_k0(700.0) < 1e-300, "K0(700)");
  check(std::abs(1e-6 * bessel_k1(1e-6) - 1.0) < 1e-6, "x K1(x) limit");
  check(std::abs(1e-3 * bessel_k1(1e-3) - (1.0 + 0.5e-6 * std::log(0.5e-3))) < 1e-6,
        "K1 small-argument expansion");
  double worst_bessel = 0.0;
  for (double x = 1e-3; x <= 100.0; x *= 1.5) {
    worst_bessel = std::max({worst_bessel, std::abs(bessel_k0(x) / k_integral(0, x) - 1.0),
                             std::abs(bessel_k1(x) / k_integral(1, x) - 1.0)});
  }
  check(worst_bessel <= 1e-10, fmt::format("Bessel oracle {:.1e}", worst_bessel));
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    const double h = 1e-5 * x;
    const double d = (bessel_k0(x + h) - bessel_k0(x - h)) / (2.0 * h);
    check(std::abs(-d / bessel_k1(x) - 1.0) < 1e-6, "K0' = -K1");
  }

  check(std::abs(lambert_w(BranchW::MinusOne, -std::exp(-1.0)) + 1.0) < 1e-7, "W(-1/e)");
  check(lambert_w(BranchW::Principal, 0.0) == 0.0, "W0(0)");
  check(std::abs(lambert_w(BranchW::MinusOne, -0.01) + 6.4728) < 1e-4, "W-1(-0.01)");
  double worst_residual = 0.0;
  for (int i = 1; i < 4000; ++i) {
    const double x = -std::exp(-1.0) * (1.0 - i / 4000.0);
    for (BranchW b : {BranchW::Principal, BranchW::MinusOne}) {
      const double w = lambert_w(b, x);
      worst_residual = std::max(worst_residual, std::abs(w * std::exp(w) - x));
    }
  }
  for (double x = 1e-6; x < 1e100; x *= 7.0) {
    const double w = lambert_w(BranchW::Principal, x);
    worst_residual = std::max(worst_residual, std::abs(w * std::exp(w) - x) / x);
  }
  check(worst_residual <= 1e-12, fmt::format("Lambert residual {:.1e}", worst_residual));
  for (double u : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double w = lambert_w(BranchW::MinusOne, -std::exp(-u - 1.0));
    check(w > -1.0 - std::sqrt(2.0 * u) - u && w < -1.0 - std::sqrt(2.0 * u) - 2.0 / 3.0 * u,
          fmt::format("W-1 bound u={}", u));
  }

  const LinkScale s(1.0);
  check(gamma_cdf(0.0, s) == 0.0, "F(0)");
  check(std::abs(gamma_pdf(1.0, s) - 2.0 * bessel_k0(2.0)) < 1e-15, "f(1)");
  check(std::abs(gamma_cdf(1.0, s) - (1.0 - 2.0 * bessel_k1(2.0))) < 1e-15, "F(1)");
  check(std::abs(gamma_cdf_small_x(1e-4, s) / gamma_cdf(1e-4, s) - 1.0) < 0.02, "small-x CDF");
  for (double x : {1e-4, 0.01, 0.3, 1.0, 4.0}) {
    const double h = 1e-5 * x;
    const double d = (gamma_cdf(x + h, s) - gamma_cdf(x - h, s)) / (2.0 * h);
    check(std::abs(d / gamma_pdf(x, s) - 1.0) < 1e-6, fmt::format("F' = f at {}", x));
  }
  const double norm =
      integrate_to_infinity([&](double t) { return 2.0 * t * gamma_pdf(t * t, s); }, 0.0, 1.0,
                            {1e-13, 1e-12, 4000})
          .value;
  check(std::abs(norm - 1.0) < 1e-8, fmt::format("pdf normalisation {:.1e}", norm - 1.0));
  const double norm5 =
      integrate_to_infinity([&](double t) { return 2.0 * t * min_order_pdf(t * t, 5, s); }, 0.0,
                            0.2, {1e-13, 1e-12, 4000})
          .value;
  check(std::abs(norm5 - 1.0) < 1e-7, "min-order pdf normalisation");

  std::string detail =
      fmt::format("Bessel oracle {:.1e} rel, Lambert residual {:.1e}, pdf norm err {:.1e}",
                  worst_bessel, worst_residual, std::abs(norm - 1.0));
  for (const auto& f : failures) detail += "; failed: " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "WPT diversity gain equals M", wpt_diversity},
      {2, "WPT error floor when bar_eps0 bar_epss >= 1", wpt_floor},
      {3, "BAC floor equals P(E0)", bac_floor},
      {4, "P(E0) falls with M; EVT ratio tends to 1", lemma_trend},
      {5, "BAC diversity capped at one", bac_diversity_cap},
      {6, "WPT outage below BAC outage", scheme_ordering},
      {7, "BAC ergodic rate above WPT", rate_crossover},
      {8, "alpha = 0.5 beats 0.1 and 0.9", alpha_sensitivity},
      {9, "T-term sum matches Monte Carlo", t_terms_oracle},
      {10, "numerics suite", numerics},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("{} criterion {}: {} | {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
               o.detail, secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
