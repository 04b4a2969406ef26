#include "nhs/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "nhs/analysis.hpp"

#ifndef NHS_VERSION
#define NHS_VERSION "0.0.0"
#endif

namespace nhs {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError(std::string(key),
                    fmt::format("config key '{}': cannot parse '{}' as {}", key, value, want));
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  // Accept 1e7-style literals as long as they are whole numbers.
  const double d = parse_double(key, v);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) bad_value(key, v, "a non-negative integer");
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec == std::errc{} && ptr == v.data() + v.size()) return out;
  return static_cast<std::uint64_t>(d);
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

Scheme parse_scheme(std::string_view key, std::string_view v) {
  std::string upper(v);
  std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
  if (upper == "WPT") return Scheme::WPT;
  if (upper == "BAC") return Scheme::BAC;
  bad_value(key, v, "a scheme (WPT or BAC)");
}

Metric parse_metric(std::string_view key, std::string_view v) {
  if (v == "outage") return Metric::Outage;
  if (v == "ergodic_rate") return Metric::ErgodicRate;
  bad_value(key, v, "a metric (outage or ergodic_rate)");
}

Overlay parse_overlay(std::string_view key, std::string_view v) {
  if (v == "e0_exact") return Overlay::E0Exact;
  if (v == "e0_high_snr") return Overlay::E0HighSnr;
  if (v == "e0_evt") return Overlay::E0Evt;
  if (v == "t_sum" || v == "t_terms") return Overlay::TSum;
  bad_value(key, v, "an overlay (e0_exact, e0_high_snr, e0_evt, t_terms)");
}

// Shortest text that reads back to the same double.
std::string fmt_double(double v) { return fmt::format("{}", v); }

template <class T, class F>
std::string join(const std::vector<T>& items, F f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += f(items[i]);
  }
  return out;
}

}  // namespace

std::string_view to_string(Overlay o) {
  switch (o) {
    case Overlay::E0Exact:
      return "e0_exact";
    case Overlay::E0HighSnr:
      return "e0_high_snr";
    case Overlay::E0Evt:
      return "e0_evt";
    case Overlay::TSum:
      return "t_sum";
  }
  return "?";
}

std::vector<double> ExperimentConfig::powers_dbm() const {
  const PowerRange& r = power_dbm_range;
  std::vector<double> out;
  if (!(r.step > 0.0) || !(r.stop > r.start)) return out;
  const auto n = static_cast<std::size_t>(std::floor((r.stop - r.start) / r.step + 1e-9)) + 1;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(r.start + double(i) * r.step);
  return out;
}

double ExperimentConfig::power_ratio(double power_dbm) const {
  return std::pow(10.0, (power_dbm - noise_dbm) / 10.0);
}

std::string Violation::message() const {
  return fmt::format("{} {} (got {})", key, constraint, value);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::map<std::string, int> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line),
                        fmt::format("config line {}: expected key = value, got '{}'", line_no, line));
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (++seen[key] > 1) throw ConfigError(key, fmt::format("config key '{}' given twice", key));
    if (value.empty()) throw ConfigError(key, fmt::format("config key '{}' has no value", key));

    if (key == "schemes" || key == "scheme") {
      c.schemes.clear();
      for (auto item : split_list(value)) c.schemes.push_back(parse_scheme(key, item));
    } else if (key == "m_devices") {
      c.m_devices.clear();
      for (auto item : split_list(value)) c.m_devices.push_back(parse_int(key, item));
    } else if (key == "alpha") {
      c.alpha.clear();
      for (auto item : split_list(value)) c.alpha.push_back(parse_double(key, item));
    } else if (key == "beta") {
      c.base.beta = parse_double(key, value);
    } else if (key == "eta") {
      c.base.eta = parse_double(key, value);
    } else if (key == "r0") {
      c.base.r0 = parse_double(key, value);
    } else if (key == "rs") {
      c.base.rs = parse_double(key, value);
    } else if (key == "phi") {
      c.base.phi = parse_double(key, value);
    } else if (key == "d0") {
      c.base.d0 = parse_double(key, value);
    } else if (key == "dh") {
      c.base.dh = parse_double(key, value);
    } else if (key == "dg") {
      c.base.dg = parse_double(key, value);
    } else if (key == "power_dbm_range") {
      const auto parts = split_list(value);
      if (parts.size() != 3) bad_value(key, value, "start,stop,step");
      c.power_dbm_range = {parse_double(key, parts[0]), parse_double(key, parts[1]),
                           parse_double(key, parts[2])};
    } else if (key == "noise_dbm") {
      c.noise_dbm = parse_double(key, value);
    } else if (key == "trials") {
      c.trials = parse_u64(key, value);
    } else if (key == "seed") {
      c.seed = parse_u64(key, value);
    } else if (key == "metric") {
      c.metric = parse_metric(key, value);
    } else if (key == "analytic_overlays") {
      c.analytic_overlays.clear();
      if (value != "none") {
        for (auto item : split_list(value)) c.analytic_overlays.push_back(parse_overlay(key, item));
      }
    } else if (key == "output_path") {
      c.output_path = std::string(value);
    } else {
      throw ConfigError(key, fmt::format("unknown config key '{}'", key));
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::string out;
  auto line = [&](std::string_view k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
  line("schemes", join(c.schemes, [](Scheme s) { return std::string(to_string(s)); }));
  line("m_devices", join(c.m_devices, [](int m) { return std::to_string(m); }));
  line("alpha", join(c.alpha, fmt_double));
  line("beta", fmt_double(c.base.beta));
  line("eta", fmt_double(c.base.eta));
  line("r0", fmt_double(c.base.r0));
  line("rs", fmt_double(c.base.rs));
  line("phi", fmt_double(c.base.phi));
  line("d0", fmt_double(c.base.d0));
  line("dh", fmt_double(c.base.dh));
  line("dg", fmt_double(c.base.dg));
  line("power_dbm_range", fmt::format("{},{},{}", fmt_double(c.power_dbm_range.start),
                                      fmt_double(c.power_dbm_range.stop),
                                      fmt_double(c.power_dbm_range.step)));
  line("noise_dbm", fmt_double(c.noise_dbm));
  line("trials", std::to_string(c.trials));
  line("seed", std::to_string(c.seed));
  line("metric", std::string(to_string(c.metric)));
  line("analytic_overlays",
       c.analytic_overlays.empty()
           ? std::string("none")
           : join(c.analytic_overlays, [](Overlay o) { return std::string(to_string(o)); }));
  if (!c.output_path.empty()) line("output_path", c.output_path);
  return out;
}

std::vector<Violation> validate(const ExperimentConfig& c) {
  std::vector<Violation> out;
  auto add = [&](std::string key, std::string value, std::string constraint) {
    out.push_back({std::move(key), std::move(value), std::move(constraint)});
  };
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) add(key, fmt_double(v), "must be > 0");
  };

  if (c.schemes.empty()) add("schemes", "", "must name at least one of WPT, BAC");
  if (c.m_devices.empty()) add("m_devices", "", "must list at least one value");
  for (int m : c.m_devices) {
    if (m < 1) add("m_devices", std::to_string(m), "must be >= 1");
  }
  if (c.alpha.empty()) add("alpha", "", "must list at least one value");
  for (double a : c.alpha) {
    if (!(a > 0.0 && a < 1.0)) add("alpha", fmt_double(a), "must lie in (0,1)");
  }
  if (!(c.base.beta > 0.0 && c.base.beta <= 1.0))
    add("beta", fmt_double(c.base.beta), "must lie in (0,1]");
  if (!(c.base.eta > 0.0 && c.base.eta <= 1.0))
    add("eta", fmt_double(c.base.eta), "must lie in (0,1]");
  positive("r0", c.base.r0);
  if (!(c.base.rs >= 0.0) || !std::isfinite(c.base.rs))
    add("rs", fmt_double(c.base.rs), "must be >= 0");
  positive("phi", c.base.phi);
  positive("d0", c.base.d0);
  positive("dh", c.base.dh);
  positive("dg", c.base.dg);

  const PowerRange& r = c.power_dbm_range;
  const std::string range_text =
      fmt::format("{},{},{}", fmt_double(r.start), fmt_double(r.stop), fmt_double(r.step));
  if (!std::isfinite(r.start) || !std::isfinite(r.stop) || !(r.start < r.stop))
    add("power_dbm_range", range_text, "must satisfy start < stop");
  if (!(r.step > 0.0) || !std::isfinite(r.step))
    add("power_dbm_range", range_text, "must have step > 0");
  if (!std::isfinite(c.noise_dbm)) add("noise_dbm", fmt_double(c.noise_dbm), "must be finite");
  if (c.trials < 1) add("trials", std::to_string(c.trials), "must be >= 1");

  for (Overlay o : c.analytic_overlays) {
    if (c.metric != Metric::Outage) {
      add("analytic_overlays", std::string(to_string(o)), "requires metric = outage");
    }
    if (o == Overlay::E0Evt) {
      for (int m : c.m_devices) {
        if (m < 3) add("analytic_overlays", "e0_evt", "requires every m_devices >= 3");
      }
    }
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"fig1a", "fig1b", "fig2a", "fig2b", "fig3", "fig4"};
}

std::optional<ExperimentConfig> preset(std::string_view name) {
  ExperimentConfig c;
  c.base.beta = 0.1;
  c.base.eta = 0.1;
  c.base.phi = 3.5;
  c.noise_dbm = -94.0;
  c.alpha = {0.5};
  c.power_dbm_range = {0.0, 50.0, 5.0};
  c.trials = 1'000'000;
  c.seed = 1;
  c.metric = Metric::Outage;

  if (name == "fig1a" || name == "fig1b") {
    c.schemes = {Scheme::WPT, Scheme::BAC};
    c.m_devices = {1, 2, 3};
    c.base.r0 = name == "fig1a" ? 0.1 : 2.0;
    c.base.rs = 1.2;
    c.base.d0 = c.base.dh = 50.0;
    c.base.dg = 5.0;
    c.analytic_overlays = {Overlay::TSum};
  } else if (name == "fig2a" || name == "fig2b") {
    c.schemes = {Scheme::WPT, Scheme::BAC};
    c.m_devices = {5};
    c.base.r0 = 2.0;
    c.base.rs = 3.0;
    c.base.d0 = c.base.dh = 10.0;
    c.base.dg = 5.0;
    c.metric = name == "fig2a" ? Metric::Outage : Metric::ErgodicRate;
  } else if (name == "fig3") {
    c.schemes = {Scheme::WPT, Scheme::BAC};
    c.m_devices = {1, 3, 5};
    c.base.r0 = 0.1;
    c.base.rs = 1.2;
    c.base.d0 = c.base.dh = 100.0;
    c.base.dg = 1.0;
    c.power_dbm_range = {0.0, 70.0, 5.0};
    c.trials = 10'000'000;
    c.analytic_overlays = {Overlay::E0Exact};
  } else if (name == "fig4") {
    c.schemes = {Scheme::WPT};
    c.m_devices = {5};
    c.alpha = {0.1, 0.3, 0.5, 0.7, 0.9};
    c.base.r0 = 0.1;
    c.base.rs = 2.0;
    c.base.d0 = c.base.dh = 50.0;
    c.base.dg = 5.0;
  } else {
    return std::nullopt;
  }
  return c;
}

std::string_view csv_columns() {
  return "scheme,source,m_devices,alpha,power_dbm,power_ratio,metric,value,ci_half_width,trials,"
         "seed";
}

void run_experiment(const ExperimentConfig& config, std::ostream& out, const EngineOptions& opts) {
  if (const auto v = validate(config); !v.empty()) throw std::invalid_argument(v.front().message());

  const std::vector<double> dbm = config.powers_dbm();
  std::vector<double> ratios;
  ratios.reserve(dbm.size());
  for (double d : dbm) ratios.push_back(config.power_ratio(d));

  fmt::print(out, "# generated by nhs {}\n{}\n", NHS_VERSION, csv_columns());
  const std::string_view metric = to_string(config.metric);

  auto row = [&](Scheme s, std::string_view source, int m, double alpha, std::size_t i,
                 double value, double ci, std::uint64_t trials, std::uint64_t seed) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{}\n", to_string(s), source, m, fmt_double(alpha),
               fmt_double(dbm[i]), fmt_double(ratios[i]), metric, fmt_double(value),
               fmt_double(ci), trials, seed);
  };

  std::uint64_t curve_index = 0;
  for (Scheme scheme : config.schemes) {
    for (int m : config.m_devices) {
      for (double alpha : config.alpha) {
        SystemParams raw = config.base;
        raw.m_devices = m;
        raw.alpha = alpha;
        const SystemParams params = SystemParams::make(raw);
        const std::uint64_t curve_seed = derive_key(config.seed, curve_index++);

        const auto curve =
            sweep(scheme, params, ratios, config.metric, config.trials, curve_seed, opts);
        for (std::size_t i = 0; i < curve.size(); ++i) {
          row(scheme, "mc", m, alpha, i, curve[i].metric, curve[i].ci_half_width, config.trials,
              sweep_point_seed(curve_seed, i));
        }

        for (Overlay o : config.analytic_overlays) {
          const bool bac_overlay = o != Overlay::TSum;
          if (bac_overlay != (scheme == Scheme::BAC)) continue;
          for (std::size_t i = 0; i < ratios.size(); ++i) {
            double value = 0.0;
            switch (o) {
              case Overlay::E0Exact:
                value = p_e0_exact(params, ratios[i]);
                break;
              case Overlay::E0HighSnr:
                value = p_e0_high_snr(params);
                break;
              case Overlay::E0Evt:
                value = p_e0_evt(params);
                break;
              case Overlay::TSum:
                value = t_terms_wpt(params, ratios[i]).total();
                break;
            }
            row(scheme, to_string(o), m, alpha, i, value, 0.0, 0, 0);
          }
        }
      }
    }
  }
}

}  // namespace nhs
