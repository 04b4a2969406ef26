#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nhs/analysis.hpp"
#include "nhs/bac.hpp"
#include "nhs/channel.hpp"
#include "nhs/experiment.hpp"
#include "nhs/montecarlo.hpp"
#include "nhs/rng.hpp"
#include "nhs/specfun.hpp"
#include "nhs/wpt.hpp"

namespace py = pybind11;
using namespace nhs;

namespace {

SystemParams raw_params(int m_devices, double alpha, double beta, double eta, double r0, double rs,
                        double phi, double d0, double dh, double dg) {
  SystemParams p;
  p.m_devices = m_devices;
  p.alpha = alpha;
  p.beta = beta;
  p.eta = eta;
  p.r0 = r0;
  p.rs = rs;
  p.phi = phi;
  p.d0 = d0;
  p.dh = dh;
  p.dg = dg;
  return p;
}

#define NHS_PARAM_ARGS                                                                      \
  py::arg("m_devices") = 1, py::arg("alpha") = 0.5, py::arg("beta") = 0.1,                 \
  py::arg("eta") = 0.1, py::arg("r0") = 0.1, py::arg("rs") = 1.2, py::arg("phi") = 3.5,    \
  py::arg("d0") = 1.0, py::arg("dh") = 1.0, py::arg("dg") = 1.0

EngineOptions engine(int threads) { return EngineOptions{threads}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Outage and rate analysis of WPT and backscatter NOMA uplinks";
  m.attr("__version__") = NHS_VERSION;

  py::enum_<BranchW>(m, "BranchW")
      .value("Principal", BranchW::Principal)
      .value("MinusOne", BranchW::MinusOne);
  py::enum_<Scheme>(m, "Scheme").value("WPT", Scheme::WPT).value("BAC", Scheme::BAC);
  py::enum_<Metric>(m, "Metric")
      .value("Outage", Metric::Outage)
      .value("ErgodicRate", Metric::ErgodicRate);
  py::enum_<SicStage>(m, "SicStage")
      .value("First", SicStage::First)
      .value("Second", SicStage::Second)
      .value("NotAdmitted", SicStage::NotAdmitted);

  m.def("bessel_k0", &bessel_k0, py::arg("x"));
  m.def("bessel_k1", &bessel_k1, py::arg("x"));
  m.def("lambert_w", &lambert_w, py::arg("branch"), py::arg("x"));

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](int m_devices, double alpha, double beta, double eta, double r0, double rs,
                       double phi, double d0, double dh, double dg) {
             return SystemParams::make(
                 raw_params(m_devices, alpha, beta, eta, r0, rs, phi, d0, dh, dg));
           }),
           NHS_PARAM_ARGS)
      .def_static(
          "unit_links",
          [](int m_devices, double alpha, double beta, double eta, double r0, double rs,
             double phi, double d0, double dh, double dg) {
            return SystemParams::unit_links(
                raw_params(m_devices, alpha, beta, eta, r0, rs, phi, d0, dh, dg));
          },
          NHS_PARAM_ARGS)
      .def_static(
          "with_rates",
          [](double lambda0, double lambdah, double lambdag, int m_devices, double alpha,
             double beta, double eta, double r0, double rs, double phi, double d0, double dh,
             double dg) {
            return SystemParams::with_rates(
                raw_params(m_devices, alpha, beta, eta, r0, rs, phi, d0, dh, dg), lambda0,
                lambdah, lambdag);
          },
          py::arg("lambda0"), py::arg("lambdah"), py::arg("lambdag"), NHS_PARAM_ARGS)
      .def_readonly("m_devices", &SystemParams::m_devices)
      .def_readonly("alpha", &SystemParams::alpha)
      .def_readonly("beta", &SystemParams::beta)
      .def_readonly("eta", &SystemParams::eta)
      .def_readonly("r0", &SystemParams::r0)
      .def_readonly("rs", &SystemParams::rs)
      .def_readonly("phi", &SystemParams::phi)
      .def_readonly("d0", &SystemParams::d0)
      .def_readonly("dh", &SystemParams::dh)
      .def_readonly("dg", &SystemParams::dg)
      .def_property_readonly("lambda0", &SystemParams::lambda0)
      .def_property_readonly("lambdah", &SystemParams::lambdah)
      .def_property_readonly("lambdag", &SystemParams::lambdag)
      .def_property_readonly("eps0", &SystemParams::eps0)
      .def_property_readonly("epss", &SystemParams::epss)
      .def_property_readonly("bar_eps0", &SystemParams::bar_eps0)
      .def_property_readonly("bar_epss", &SystemParams::bar_epss)
      .def_property_readonly("bar_alpha", &SystemParams::bar_alpha)
      .def_property_readonly("rate_product", &SystemParams::rate_product)
      .def_property_readonly("full_diversity_condition", &SystemParams::full_diversity_condition)
      .def("__repr__", [](const SystemParams& p) {
        std::ostringstream s;
        s << "SystemParams(m_devices=" << p.m_devices << ", alpha=" << p.alpha
          << ", r0=" << p.r0 << ", rs=" << p.rs << ", lambda0=" << p.lambda0()
          << ", lambdah=" << p.lambdah() << ", lambdag=" << p.lambdag() << ")";
        return s.str();
      });

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def(py::init<>())
      .def(py::init([](double h0_sq, std::vector<double> gamma, double s0_sq) {
             return ChannelRealization{h0_sq, std::move(gamma), s0_sq};
           }),
           py::arg("h0_sq"), py::arg("gamma"), py::arg("s0_sq") = 1.0)
      .def_readwrite("h0_sq", &ChannelRealization::h0_sq)
      .def_readwrite("gamma", &ChannelRealization::gamma)
      .def_readwrite("s0_sq", &ChannelRealization::s0_sq);

  m.def(
      "sample_realization",
      [](const SystemParams& p, std::uint64_t seed, std::uint64_t trial) {
        CounterRng rng(seed, trial);
        return sample_realization(p, rng);
      },
      py::arg("params"), py::arg("seed"), py::arg("trial") = 0,
      "Realization drawn for trial `trial` of a run seeded with `seed`.");

  m.def("gamma_pdf", [](double x, double l) { return gamma_pdf(x, LinkScale(l)); },
        py::arg("x"), py::arg("rate_product"));
  m.def("gamma_cdf", [](double x, double l) { return gamma_cdf(x, LinkScale(l)); },
        py::arg("x"), py::arg("rate_product"));
  m.def("gamma_ccdf", [](double x, double l) { return gamma_ccdf(x, LinkScale(l)); },
        py::arg("x"), py::arg("rate_product"));
  m.def("min_order_pdf",
        [](double x, int m_devices, double l) { return min_order_pdf(x, m_devices, LinkScale(l)); },
        py::arg("x"), py::arg("m_devices"), py::arg("rate_product"));

  py::class_<ScheduleDecision>(m, "ScheduleDecision")
      .def_readonly("admitted", &ScheduleDecision::admitted)
      .def_readonly("sic_stage", &ScheduleDecision::sic_stage)
      .def_readonly("achieved_rate", &ScheduleDecision::achieved_rate);

  auto wpt_mod = m.def_submodule("wpt", "WPT-NOMA with hybrid SIC");
  wpt_mod.def("tau", &wpt::tau, py::arg("h0_sq"), py::arg("p"), py::arg("params"));
  wpt_mod.def("rate_wp0", &wpt::rate_wp0, py::arg("gamma"), py::arg("h0_sq"), py::arg("p"),
              py::arg("params"));
  wpt_mod.def("rate_wp1", &wpt::rate_wp1, py::arg("gamma"), py::arg("h0_sq"), py::arg("p"),
              py::arg("params"));
  wpt_mod.def("rate_wp2", &wpt::rate_wp2, py::arg("gamma"), py::arg("p"), py::arg("params"));
  wpt_mod.def("schedule", &wpt::schedule, py::arg("realization"), py::arg("p"),
              py::arg("params"));
  wpt_mod.def("outage", &wpt::outage, py::arg("realization"), py::arg("p"), py::arg("params"));

  auto bac_mod = m.def_submodule("bac", "Backscatter NOMA");
  bac_mod.def("theta", &bac::theta, py::arg("h0_sq"), py::arg("p"), py::arg("params"));
  bac_mod.def("rate_bac0", &bac::rate_bac0, py::arg("h0_sq"), py::arg("gamma"), py::arg("p"),
              py::arg("params"));
  bac_mod.def("rate_bacm", &bac::rate_bacm, py::arg("gamma"), py::arg("s0_sq"), py::arg("p"),
              py::arg("params"));
  bac_mod.def("schedule", &bac::schedule, py::arg("realization"), py::arg("p"),
              py::arg("params"));
  bac_mod.def("outage", &bac::outage, py::arg("realization"), py::arg("p"), py::arg("params"));

  py::class_<OutageEstimate>(m, "OutageEstimate")
      .def_readonly("trials", &OutageEstimate::trials)
      .def_readonly("failures", &OutageEstimate::failures)
      .def_readonly("p_hat", &OutageEstimate::p_hat)
      .def_readonly("ci_half_width", &OutageEstimate::ci_half_width)
      .def_readonly("seed", &OutageEstimate::seed)
      .def("__repr__", [](const OutageEstimate& e) {
        std::ostringstream s;
        s << "OutageEstimate(p_hat=" << e.p_hat << ", ci_half_width=" << e.ci_half_width
          << ", trials=" << e.trials << ")";
        return s.str();
      });
  py::class_<RateEstimate>(m, "RateEstimate")
      .def_readonly("trials", &RateEstimate::trials)
      .def_readonly("mean_rate", &RateEstimate::mean_rate)
      .def_readonly("std_error", &RateEstimate::std_error)
      .def_readonly("seed", &RateEstimate::seed);
  py::class_<CurvePoint>(m, "CurvePoint")
      .def(py::init([](double p, double v, double ci) { return CurvePoint{p, v, ci}; }),
           py::arg("power_ratio"), py::arg("metric"), py::arg("ci_half_width") = 0.0)
      .def_readonly("power_ratio", &CurvePoint::power_ratio)
      .def_readonly("metric", &CurvePoint::metric)
      .def_readonly("ci_half_width", &CurvePoint::ci_half_width);
  py::class_<BacEventCounts>(m, "BacEventCounts")
      .def_readonly("trials", &BacEventCounts::trials)
      .def_readonly("size_counts", &BacEventCounts::size_counts)
      .def_readonly("outage_by_size", &BacEventCounts::outage_by_size)
      .def("conditional_on_admission", &BacEventCounts::conditional_on_admission)
      .def("no_admission", &BacEventCounts::no_admission);

  m.def(
      "estimate_outage",
      [](Scheme s, const SystemParams& p, double power, std::uint64_t trials, std::uint64_t seed,
         int threads) { return estimate_outage(s, p, power, trials, seed, engine(threads)); },
      py::arg("scheme"), py::arg("params"), py::arg("p"), py::arg("trials"), py::arg("seed"),
      py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def(
      "estimate_ergodic_rate",
      [](Scheme s, const SystemParams& p, double power, std::uint64_t trials, std::uint64_t seed,
         int threads) { return estimate_ergodic_rate(s, p, power, trials, seed, engine(threads)); },
      py::arg("scheme"), py::arg("params"), py::arg("p"), py::arg("trials"), py::arg("seed"),
      py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def(
      "sweep",
      [](Scheme s, const SystemParams& p, const std::vector<double>& powers, Metric metric,
         std::uint64_t trials, std::uint64_t seed, int threads) {
        return sweep(s, p, powers, metric, trials, seed, engine(threads));
      },
      py::arg("scheme"), py::arg("params"), py::arg("powers"), py::arg("metric"),
      py::arg("trials"), py::arg("seed"), py::arg("threads") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "estimate_bac_events",
      [](const SystemParams& p, double power, std::uint64_t trials, std::uint64_t seed,
         int threads) { return estimate_bac_events(p, power, trials, seed, engine(threads)); },
      py::arg("params"), py::arg("p"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def("p_e0_exact", &p_e0_exact, py::arg("params"), py::arg("p"));
  m.def("p_e0_high_snr", &p_e0_high_snr, py::arg("params"));
  m.def("p_e0_evt", &p_e0_evt, py::arg("params"));
  m.def("qm_lower_bound", &qm_lower_bound, py::arg("params"), py::arg("p"), py::arg("m"));
  m.def(
      "t_terms_wpt", [](const SystemParams& p, double power) { return t_terms_wpt(p, power).terms; },
      py::arg("params"), py::arg("p"), "T_0..T_M; their sum is the WPT outage probability.");

  py::class_<SlopeFit>(m, "SlopeFit")
      .def_readonly("slope", &SlopeFit::slope)
      .def_readonly("intercept", &SlopeFit::intercept)
      .def_readonly("r_squared", &SlopeFit::r_squared)
      .def_readonly("points_used", &SlopeFit::points_used)
      .def_readonly("zero_points_excluded", &SlopeFit::zero_points_excluded);
  m.def(
      "fit_diversity_slope",
      [](const std::vector<CurvePoint>& curve, std::optional<std::pair<std::size_t, std::size_t>> w) {
        if (!w) return fit_diversity_slope(curve);
        return fit_diversity_slope(curve, IndexWindow{w->first, w->second});
      },
      py::arg("curve"), py::arg("window") = py::none());

  m.def("preset_names", &preset_names);
  m.def(
      "preset_config",
      [](const std::string& name) {
        const auto c = preset(name);
        if (!c) throw py::key_error("unknown preset " + name);
        return to_config_text(*c);
      },
      py::arg("name"), "Config text of a figure preset.");
  m.def(
      "validate_config",
      [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& v : validate(parse_config(text))) out.push_back(v.message());
        return out;
      },
      py::arg("text"));
  m.def(
      "run_config",
      [](const std::string& text, int threads) {
        const ExperimentConfig c = parse_config(text);
        std::ostringstream out;
        {
          py::gil_scoped_release release;
          run_experiment(c, out, engine(threads));
        }
        return out.str();
      },
      py::arg("text"), py::arg("threads") = 0, "Runs a config and returns the CSV text.");

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
