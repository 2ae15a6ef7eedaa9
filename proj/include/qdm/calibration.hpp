#pragma once

// Calibration against the measured single-dot cell: E12 = 920 meV and an
// effective recombination rate gamma1 = 0.19 gamma. The only free scale is
// hbar*gamma, which enters through the tunneling frequencies of the molecule.

#include <cmath>
#include <vector>

#include "qdm/golden_section.hpp"
#include "qdm/model.hpp"
#include "qdm/sweeps.hpp"

namespace qdm {

struct CalibrationTargets {
  double Voc_sqd = 871.0;   // mV
  double jsc_sqd = 0.018;   // e*gamma
  double Pm_sqd = 13.66;    // gamma*meV
  double jsc_qdm = 0.0300;  // e*gamma
  double Pm_qdm = 22.28;    // gamma*meV
};

inline ModelParams calibration_params(double hbar_gamma = ModelParams{}.hbar_gamma) {
  ModelParams p = with_distance(ModelParams{}, 2.0);
  p.E12 = 920.0;
  p.gamma1 = 0.19;
  p.gamma2 = 1.0;
  p.gamma_c = 100.0;
  p.gamma_v = 0.05;
  p.hbar_gamma = hbar_gamma;
  return p;
}

struct CalibrationReport {
  double hbar_gamma = 0.0;
  double Voc_sqd = 0.0;
  double jsc_sqd = 0.0;
  double Pm_sqd = 0.0;
  double jsc_qdm = 0.0;
  double Pm_qdm = 0.0;
  bool jsc_sqd_lower_bound = false;
  bool jsc_qdm_lower_bound = false;
  double objective = 0.0;  // sum of squared relative deviations
};

namespace detail {

inline double rel2(double value, double target) {
  const double r = (value - target) / target;
  return r * r;
}

}  // namespace detail

inline CalibrationReport evaluate_calibration(const ModelParams& base, double hbar_gamma,
                                              const LogAxis& grid = {},
                                              const CalibrationTargets& t = {}) {
  ModelParams p = base;
  p.hbar_gamma = hbar_gamma;
  CalibrationReport r;
  r.hbar_gamma = hbar_gamma;

  const IVCurve sqd = iv_curve(p, ModelKind::sqd, grid);
  const ShortCircuitCurrent js = short_circuit_current(sqd);
  r.Voc_sqd = open_circuit_voltage(p, ModelKind::sqd).Voc;
  r.jsc_sqd = js.jsc;
  r.jsc_sqd_lower_bound = js.lower_bound;
  r.Pm_sqd = max_power_point(sqd).P_m;

  const IVCurve qdm = iv_curve(p, ModelKind::qdm, grid);
  const ShortCircuitCurrent jq = short_circuit_current(qdm);
  r.jsc_qdm = jq.jsc;
  r.jsc_qdm_lower_bound = jq.lower_bound;
  r.Pm_qdm = max_power_point(qdm).P_m;

  r.objective = detail::rel2(r.Voc_sqd, t.Voc_sqd) + detail::rel2(r.jsc_sqd, t.jsc_sqd) +
                detail::rel2(r.Pm_sqd, t.Pm_sqd) + detail::rel2(r.jsc_qdm, t.jsc_qdm) +
                detail::rel2(r.Pm_qdm, t.Pm_qdm);
  return r;
}

struct CalibrationRange {
  double min = 1e-4;  // meV
  double max = 1e-2;  // meV
  int scan_points = 9;
};

// Log-spaced scan of hbar*gamma followed by golden-section refinement of the
// best bracket.
inline CalibrationReport calibrate_hbar_gamma(const ModelParams& base = calibration_params(),
                                              const CalibrationRange& range = {},
                                              const LogAxis& grid = {},
                                              const CalibrationTargets& t = {}) {
  const std::vector<double> hg = log_space(range.min, range.max, range.scan_points);
  const auto scan = parallel_map<CalibrationReport>(
      hg.size(), [&](std::size_t i) { return evaluate_calibration(base, hg[i], grid, t); });

  std::size_t best = 0;
  for (std::size_t i = 1; i < scan.size(); ++i) {
    if (scan[i].objective < scan[best].objective) best = i;
  }
  const std::size_t lo = best == 0 ? 0 : best - 1;
  const std::size_t hi = best + 1 == hg.size() ? best : best + 1;
  auto score = [&](double u) { return -evaluate_calibration(base, std::pow(10.0, u), grid, t).objective; };
  const LineMaximum m =
      golden_section_maximize(score, std::log10(hg[lo]), std::log10(hg[hi]), 1e-3);

  CalibrationReport refined = evaluate_calibration(base, std::pow(10.0, m.x), grid, t);
  return refined.objective <= scan[best].objective ? refined : scan[best];
}

}  // namespace qdm
