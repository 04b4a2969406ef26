#include "nhs/params.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace nhs {
namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

std::vector<std::string> violations(const SystemParams& p) {
  std::vector<std::string> out;
  if (p.m_devices < 1) out.push_back(fmt::format("m_devices must be >= 1 (got {})", p.m_devices));
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    out.push_back(fmt::format("alpha must lie in (0,1) (got {})", p.alpha));
  if (!(p.beta > 0.0 && p.beta <= 1.0))
    out.push_back(fmt::format("beta must lie in (0,1] (got {})", p.beta));
  if (!(p.eta > 0.0 && p.eta <= 1.0))
    out.push_back(fmt::format("eta must lie in (0,1] (got {})", p.eta));
  if (!positive_finite(p.r0)) out.push_back(fmt::format("r0 must be > 0 (got {})", p.r0));
  if (!(p.rs >= 0.0 && std::isfinite(p.rs)))
    out.push_back(fmt::format("rs must be >= 0 (got {})", p.rs));
  if (!positive_finite(p.phi)) out.push_back(fmt::format("phi must be > 0 (got {})", p.phi));
  if (!positive_finite(p.d0)) out.push_back(fmt::format("d0 must be > 0 (got {})", p.d0));
  if (!positive_finite(p.dh)) out.push_back(fmt::format("dh must be > 0 (got {})", p.dh));
  if (!positive_finite(p.dg)) out.push_back(fmt::format("dg must be > 0 (got {})", p.dg));
  return out;
}

SystemParams SystemParams::make(SystemParams raw) {
  return with_rates(raw, std::pow(raw.d0, raw.phi), std::pow(raw.dh, raw.phi),
                    std::pow(raw.dg, raw.phi));
}

SystemParams SystemParams::unit_links(SystemParams raw) { return with_rates(raw, 1.0, 1.0, 1.0); }

SystemParams SystemParams::with_rates(SystemParams raw, double lambda0, double lambdah,
                                      double lambdag) {
  if (auto v = violations(raw); !v.empty()) throw std::invalid_argument(v.front());
  if (!positive_finite(lambda0) || !positive_finite(lambdah) || !positive_finite(lambdag)) {
    throw std::invalid_argument("link rates must be positive and finite");
  }
  Derived& d = raw.derived_;
  d.lambda0 = lambda0;
  d.lambdah = lambdah;
  d.lambdag = lambdag;
  d.eps0 = std::exp2(raw.r0) - 1.0;
  d.epss = std::exp2(raw.rs) - 1.0;
  d.bar_eps0 = std::exp2(raw.r0 / (1.0 - raw.alpha)) - 1.0;
  d.bar_epss = std::exp2(raw.rs / (1.0 - raw.alpha)) - 1.0;
  d.bar_alpha = raw.alpha / (1.0 - raw.alpha);
  return raw;
}

}  // namespace nhs
