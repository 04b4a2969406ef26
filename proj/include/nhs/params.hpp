#pragma once

#include <string>
#include <vector>

namespace nhs {

/// Scenario constants for one uplink cell: U0 plus `m_devices` energy
/// constrained devices. Rates are in bits per channel use, distances in metres.
///
/// Channel power gains are exponential with RATE d^phi (mean d^-phi), so
/// `lambda0`, `lambdah`, `lambdag` are rates, not variances.
struct SystemParams {
  int m_devices = 1;
  double alpha = 0.5;  // time-switching fraction spent harvesting
  double beta = 0.1;   // backscatter reflection coefficient
  double eta = 0.1;    // harvesting efficiency
  double r0 = 0.1;     // U0 target rate
  double rs = 1.2;     // delay-tolerant device target rate; 0 disables outage
  double phi = 3.5;    // path-loss exponent
  double d0 = 1.0;     // U0 to access point
  double dh = 1.0;     // device to access point
  double dg = 1.0;     // U0 to device

  struct Derived {
    double lambda0;
    double lambdah;
    double lambdag;
    double eps0;      // 2^r0 - 1
    double epss;      // 2^rs - 1
    double bar_eps0;  // 2^(r0/(1-alpha)) - 1
    double bar_epss;  // 2^(rs/(1-alpha)) - 1
    double bar_alpha; // alpha / (1-alpha)
  };

  /// Validates the fields and computes the derived constants. Throws
  /// std::invalid_argument naming the first offending field.
  static SystemParams make(SystemParams raw);

  /// Unit rates (lambda = 1 for every link) regardless of distances; used for
  /// the normalised scenarios in tests.
  static SystemParams unit_links(SystemParams raw);

  /// Overrides the three link rates directly (distances become informational).
  static SystemParams with_rates(SystemParams raw, double lambda0, double lambdah,
                                 double lambdag);

  const Derived& derived() const { return derived_; }

  double lambda0() const { return derived_.lambda0; }
  double lambdah() const { return derived_.lambdah; }
  double lambdag() const { return derived_.lambdag; }
  double eps0() const { return derived_.eps0; }
  double epss() const { return derived_.epss; }
  double bar_eps0() const { return derived_.bar_eps0; }
  double bar_epss() const { return derived_.bar_epss; }
  double bar_alpha() const { return derived_.bar_alpha; }
  double rate_product() const { return derived_.lambdah * derived_.lambdag; }

  /// bar_eps0 * bar_epss < 1: WPT outage decays with full diversity.
  bool full_diversity_condition() const { return bar_eps0() * bar_epss() < 1.0; }

 private:
  Derived derived_{};
};

/// Constraint violations of the raw fields, empty when valid.
std::vector<std::string> violations(const SystemParams& p);

}  // namespace nhs
