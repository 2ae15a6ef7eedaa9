#pragma once

// Load-rate parameterized IV characteristics, maximum-power points and the
// parameter scans built on top of them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdm/errors.hpp"
#include "qdm/golden_section.hpp"
#include "qdm/model.hpp"
#include "qdm/observables.hpp"
#include "qdm/parallel.hpp"

namespace qdm {

inline std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw ConfigError("log grid needs 0 < min < max and at least 2 points");
  }
  std::vector<double> v(static_cast<std::size_t>(n));
  const double a = std::log10(lo);
  const double step = (std::log10(hi) - a) / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::pow(10.0, a + step * i);
  v.front() = lo;
  v.back() = hi;
  return v;
}

// Log-spaced axis [min, max] with `points` samples.
struct LogAxis {
  double min = 1e-6;
  double max = 1e6;
  int points = 200;

  std::vector<double> values() const { return log_space(min, max, points); }
};

inline constexpr int kMinCurvePoints = 50;

struct IVCurve {
  std::vector<PhotovoltaicPoint> points;
  // Load rates whose voltage was undefined, with the current found there.
  std::vector<std::pair<double, double>> undefined_voltage;
  ModelParams params;
  ModelKind kind = ModelKind::qdm;
  BandAlignment alignment = BandAlignment::reference;

  double max_coh13() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.coh13);
    return m;
  }
  double max_coh24() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.coh24);
    return m;
  }
};

inline IVCurve iv_curve(const ModelParams& p, ModelKind kind, const LogAxis& grid = {},
                        BandAlignment tag = BandAlignment::reference) {
  if (grid.points < kMinCurvePoints) {
    throw ConfigError("IV curve needs at least " + std::to_string(kMinCurvePoints) +
                      " load-rate points");
  }
  IVCurve curve;
  curve.params = p;
  curve.kind = kind;
  curve.alignment = tag;
  const LevelEnergies e = derive_level_energies(p, kind);

  for (double Gamma : grid.values()) {
    ModelParams q = p;
    q.Gamma = Gamma;
    PhotovoltaicPoint pt;
    pt.Gamma = Gamma;
    try {
      pt.state = solve_steady(build_generator(q, kind));
    } catch (const Error&) {
      rethrow_with_context("Gamma=" + detail::fmt_g(Gamma));
    }
    pt.j = current(pt.state, Gamma);
    const CoherenceMagnitudes c = coherence_magnitudes(pt.state);
    pt.coh13 = c.rho13;
    pt.coh24 = c.rho24;
    try {
      pt.V = voltage(pt.state, e, q.kTc);
    } catch (const VoltageUndefinedError&) {
      curve.undefined_voltage.emplace_back(Gamma, pt.j);
      continue;
    }
    pt.P = power(pt.j, pt.V);
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

struct MaxPowerPoint {
  double Gamma_star = 0.0;
  double j_mpp = 0.0;
  double V_mpp = 0.0;
  double P_m = 0.0;
  double eta = 0.0;
  PhotovoltaicPoint point;
};

// Grid argmax refined by golden-section search in ln(Gamma) between the two
// neighbouring grid points.
inline MaxPowerPoint max_power_point(const IVCurve& curve) {
  const auto& pts = curve.points;
  if (pts.empty()) {
    throw BoundaryMaximumError("IV curve has no point with a defined voltage");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].P > pts[best].P) best = i;
  }
  if (!(pts[best].P > 0.0)) {
    throw BoundaryMaximumError("no interior maximum with P > 0");
  }
  if (best == 0 || best + 1 == pts.size()) {
    throw BoundaryMaximumError("power maximum on the grid boundary at Gamma=" +
                               detail::fmt_g(pts[best].Gamma) + "; widen the load grid");
  }

  // A point without a photovoltage delivers no power.
  auto power_at = [&](double log_gamma) {
    try {
      return evaluate_point(curve.params, curve.kind, std::exp(log_gamma)).P;
    } catch (const VoltageUndefinedError&) {
      return 0.0;
    }
  };
  const LineMaximum m = golden_section_maximize(power_at, std::log(pts[best - 1].Gamma),
                                                std::log(pts[best + 1].Gamma), 1e-6);

  PhotovoltaicPoint refined = pts[best];
  if (m.value > pts[best].P) {
    const PhotovoltaicPoint candidate = evaluate_point(curve.params, curve.kind, std::exp(m.x));
    if (candidate.P > refined.P) refined = candidate;
  }

  MaxPowerPoint mpp;
  mpp.Gamma_star = refined.Gamma;
  mpp.j_mpp = refined.j;
  mpp.V_mpp = refined.V;
  mpp.P_m = refined.P;
  mpp.eta = efficiency(refined.P, supplied_power(refined.j, curve.params.E12));
  mpp.point = std::move(refined);
  return mpp;
}

inline MaxPowerPoint max_power_point(const ModelParams& p, ModelKind kind,
                                     const LogAxis& grid = {}) {
  return max_power_point(iv_curve(p, kind, grid));
}

struct OpenCircuitVoltage {
  double Voc = 0.0;
  bool extrapolated = false;
};

inline constexpr double kVocAgreement = 0.1;  // mV

inline OpenCircuitVoltage open_circuit_voltage(const ModelParams& p, ModelKind kind) {
  constexpr double g1 = 1e-6;
  constexpr double g2 = 1e-7;
  const double v1 = evaluate_point(p, kind, g1).V;
  const double v2 = evaluate_point(p, kind, g2).V;
  if (std::abs(v1 - v2) <= kVocAgreement) return {v1, false};

  const double v0 = v2 - (v1 - v2) * g2 / (g1 - g2);
  const double v3 = evaluate_point(p, kind, 1e-8).V;
  if (std::abs(v3 - v0) > kVocAgreement) {
    throw NumericalError("open-circuit voltage did not converge: V(1e-6)=" + detail::fmt_g(v1) +
                         ", V(1e-7)=" + detail::fmt_g(v2) + ", V(1e-8)=" + detail::fmt_g(v3));
  }
  return {v0, true};
}

struct ShortCircuitCurrent {
  double jsc = 0.0;
  // True when no V = 0 crossing was bracketed and the value is the current at
  // the largest usable load rate.
  bool lower_bound = false;
};

inline constexpr double kCurrentPlateauTolerance = 1e-3;

inline ShortCircuitCurrent short_circuit_current(const IVCurve& curve) {
  const auto& pts = curve.points;
  if (pts.empty()) {
    double jmax = 0.0;
    for (const auto& [g, j] : curve.undefined_voltage) jmax = std::max(jmax, j);
    if (!curve.undefined_voltage.empty() && jmax == 0.0) return {0.0, false};
    throw NumericalError("IV curve has no usable point for the short-circuit current");
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double va = pts[i].V;
    const double vb = pts[i + 1].V;
    if (va >= 0.0 && vb < 0.0) {
      const double t = va / (va - vb);
      return {pts[i].j + t * (pts[i + 1].j - pts[i].j), false};
    }
  }
  const bool truncated_tail = !curve.undefined_voltage.empty() &&
                              curve.undefined_voltage.back().first > pts.back().Gamma;
  if (truncated_tail) return {pts.back().j, true};

  if (pts.size() >= 2) {
    const double ja = pts[pts.size() - 2].j;
    const double jb = pts.back().j;
    if (jb == 0.0 || std::abs(jb - ja) <= kCurrentPlateauTolerance * std::abs(jb)) {
      return {jb, true};
    }
  }
  throw NumericalError("IV curve neither crosses V = 0 nor saturates in current; widen the grid");
}

struct CurrentGain {
  double delta_j = 0.0;
  double delta_Pm = 0.0;
  MaxPowerPoint qdm;
  MaxPowerPoint sqd;
};

// Relative change of the max-power current (and of the max power) of the
// molecule against the single dot built from the same parameters.
inline CurrentGain relative_current_gain(const ModelParams& p, const LogAxis& grid = {}) {
  CurrentGain g;
  g.qdm = max_power_point(p, ModelKind::qdm, grid);
  g.sqd = max_power_point(p, ModelKind::sqd, grid);
  if (!(g.sqd.j_mpp > 0.0)) {
    throw DomainError("relative current gain undefined: single-dot current is zero");
  }
  g.delta_j = (g.qdm.j_mpp - g.sqd.j_mpp) / g.sqd.j_mpp;
  g.delta_Pm = (g.qdm.P_m - g.sqd.P_m) / g.sqd.P_m;
  return g;
}

struct ScenarioResult {
  // inputs
  double d = std::numeric_limits<double>::quiet_NaN();
  double gamma_c = 0.0;
  double gamma_v = 0.0;
  BandAlignment alignment = BandAlignment::reference;
  double gamma_13 = 0.0;
  double gamma_24 = 0.0;
  ModelKind kind = ModelKind::qdm;
  // outputs
  double jsc = 0.0;
  double Voc = 0.0;
  double P_m = 0.0;
  double eta = 0.0;
  double Gamma_star = 0.0;
  double j_mpp = 0.0;
  double V_mpp = 0.0;
  std::optional<double> delta_j;
  std::optional<double> delta_Pm;
  double max_coh13 = 0.0;
  double max_coh24 = 0.0;
  std::string error;

  bool ok() const { return error.empty(); }
};

inline ScenarioResult evaluate_scenario(const ModelParams& p, ModelKind kind, double d,
                                        BandAlignment tag, const LogAxis& grid = {}) {
  ScenarioResult r;
  r.d = d;
  r.gamma_c = p.gamma_c;
  r.gamma_v = p.gamma_v;
  r.alignment = tag;
  r.gamma_13 = p.gamma_13;
  r.gamma_24 = p.gamma_24;
  r.kind = kind;

  const IVCurve curve = iv_curve(p, kind, grid, tag);
  const MaxPowerPoint mpp = max_power_point(curve);
  r.jsc = short_circuit_current(curve).jsc;
  r.Voc = open_circuit_voltage(p, kind).Voc;
  r.P_m = mpp.P_m;
  r.eta = mpp.eta;
  r.Gamma_star = mpp.Gamma_star;
  r.j_mpp = mpp.j_mpp;
  r.V_mpp = mpp.V_mpp;
  r.max_coh13 = curve.max_coh13();
  r.max_coh24 = curve.max_coh24();
  return r;
}

struct GammaGridScan {
  std::vector<double> gamma_c;  // column axis
  std::vector<double> gamma_v;  // row axis
  // Row-major: cells[iv * gamma_c.size() + ic].
  std::vector<ScenarioResult> cells;
  // Points (gamma_c, gamma_v) where delta_j crosses zero along gamma_v.
  std::vector<std::pair<double, double>> zero_contour;

  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.ok(); }));
  }
  const ScenarioResult& at(std::size_t iv, std::size_t ic) const {
    return cells[iv * gamma_c.size() + ic];
  }
};

namespace detail {

inline std::vector<std::pair<double, double>> zero_crossings(const GammaGridScan& s) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t ic = 0; ic < s.gamma_c.size(); ++ic) {
    for (std::size_t iv = 0; iv + 1 < s.gamma_v.size(); ++iv) {
      const auto& a = s.at(iv, ic);
      const auto& b = s.at(iv + 1, ic);
      if (!a.ok() || !b.ok() || !a.delta_j || !b.delta_j) continue;
      const double da = *a.delta_j;
      const double db = *b.delta_j;
      if ((da < 0.0) == (db < 0.0)) continue;
      const double ua = std::log10(s.gamma_v[iv]);
      const double ub = std::log10(s.gamma_v[iv + 1]);
      const double u = ua + (0.0 - da) * (ub - ua) / (db - da);
      out.emplace_back(s.gamma_c[ic], std::pow(10.0, u));
    }
  }
  return out;
}

}  // namespace detail

// delta_j over a (gamma_c, gamma_v) grid; every other parameter is taken
// from p. `d` only labels the cells. Cell failures are recorded in the cell
// and do not abort the scan.
inline GammaGridScan gamma_grid_scan(const ModelParams& p, const LogAxis& gc_axis,
                                     const LogAxis& gv_axis, const LogAxis& grid = {},
                                     double d = std::numeric_limits<double>::quiet_NaN()) {
  GammaGridScan scan;
  scan.gamma_c = gc_axis.values();
  scan.gamma_v = gv_axis.values();
  const ModelParams& base = p;
  const std::size_t nc = scan.gamma_c.size();
  const std::size_t n = nc * scan.gamma_v.size();

  scan.cells = parallel_map<ScenarioResult>(n, [&](std::size_t k) {
    ModelParams q = base;
    q.gamma_c = scan.gamma_c[k % nc];
    q.gamma_v = scan.gamma_v[k / nc];
    ScenarioResult r;
    r.d = d;
    r.gamma_c = q.gamma_c;
    r.gamma_v = q.gamma_v;
    r.gamma_13 = q.gamma_13;
    r.gamma_24 = q.gamma_24;
    try {
      const IVCurve curve = iv_curve(q, ModelKind::qdm, grid);
      const MaxPowerPoint mq = max_power_point(curve);
      const MaxPowerPoint ms = max_power_point(q, ModelKind::sqd, grid);
      r.jsc = short_circuit_current(curve).jsc;
      r.Voc = curve.points.front().V;
      r.P_m = mq.P_m;
      r.eta = mq.eta;
      r.Gamma_star = mq.Gamma_star;
      r.j_mpp = mq.j_mpp;
      r.V_mpp = mq.V_mpp;
      r.max_coh13 = curve.max_coh13();
      r.max_coh24 = curve.max_coh24();
      if (!(ms.j_mpp > 0.0)) throw DomainError("single-dot current is zero");
      r.delta_j = (mq.j_mpp - ms.j_mpp) / ms.j_mpp;
      r.delta_Pm = (mq.P_m - ms.P_m) / ms.P_m;
    } catch (const Error& e) {
      r.error = e.what();
    }
    return r;
  });
  scan.zero_contour = detail::zero_crossings(scan);
  return scan;
}

inline std::vector<double> default_distances() { return {2, 3, 4, 5, 6, 7, 8, 9, 10}; }

// Efficiency and max power versus barrier width for each band alignment.
// Rows are ordered alignment-major.
inline std::vector<ScenarioResult> efficiency_vs_distance(
    const ModelParams& p, const std::vector<double>& d_grid = default_distances(),
    const std::vector<BandAlignment>& alignments = {kAllAlignments.begin(), kAllAlignments.end()},
    const LogAxis& grid = {}) {
  const std::size_t nd = d_grid.size();
  return parallel_map<ScenarioResult>(alignments.size() * nd, [&](std::size_t k) {
    const BandAlignment a = alignments[k / nd];
    const double d = d_grid[k % nd];
    const ModelParams q = with_distance(apply_band_alignment(p, a), d);
    try {
      return evaluate_scenario(q, ModelKind::qdm, d, a, grid);
    } catch (const Error&) {
      rethrow_with_context("alignment " + std::string(to_string(a)) + ", d=" + detail::fmt_g(d));
    }
  });
}

struct RateSet {
  std::string label;
  double gamma_c = 0.0;
  double gamma_v = 0.0;
};

// The two escape-rate sets used throughout: (b) slow hole escape and (d)
// fast hole escape.
inline std::vector<RateSet> default_rate_sets() {
  return {{"b", 100.0, 0.05}, {"d", 50.0, 5.0}};
}

struct PhononAssistedRow {
  std::string rate_set;
  double gamma_c = 0.0;
  double gamma_v = 0.0;
  double d = 0.0;
  double rate = 0.0;  // gamma_13 = gamma_24
  double P_m = 0.0;
  double P_m_baseline = 0.0;
  double gain = 0.0;  // P_m / P_m_baseline - 1
};

inline std::vector<PhononAssistedRow> phonon_assisted_comparison(
    const ModelParams& p, const std::vector<double>& rates = {0.001, 0.01, 0.1},
    const std::vector<RateSet>& rate_sets = default_rate_sets(),
    const std::vector<double>& distances = {2.0, 10.0}, const LogAxis& grid = {}) {
  struct Job {
    std::size_t set;
    double d;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < rate_sets.size(); ++s) {
    for (double d : distances) jobs.push_back({s, d});
  }
  const std::size_t nr = rates.size() + 1;  // slot 0 is the baseline
  const auto pm = parallel_map<double>(jobs.size() * nr, [&](std::size_t k) {
    const Job& job = jobs[k / nr];
    ModelParams q = with_distance(p, job.d);
    q.gamma_c = rate_sets[job.set].gamma_c;
    q.gamma_v = rate_sets[job.set].gamma_v;
    const double rate = (k % nr == 0) ? 0.0 : rates[k % nr - 1];
    q.gamma_13 = rate;
    q.gamma_24 = rate;
    try {
      return max_power_point(q, ModelKind::qdm, grid).P_m;
    } catch (const Error&) {
      rethrow_with_context("rate set " + rate_sets[job.set].label + ", d=" + detail::fmt_g(job.d) +
                           ", gamma_13=gamma_24=" + detail::fmt_g(rate));
    }
  });

  std::vector<PhononAssistedRow> rows;
  for (std::size_t jb = 0; jb < jobs.size(); ++jb) {
    const double base = pm[jb * nr];
    for (std::size_t r = 0; r < rates.size(); ++r) {
      PhononAssistedRow row;
      row.rate_set = rate_sets[jobs[jb].set].label;
      row.gamma_c = rate_sets[jobs[jb].set].gamma_c;
      row.gamma_v = rate_sets[jobs[jb].set].gamma_v;
      row.d = jobs[jb].d;
      row.rate = rates[r];
      row.P_m = pm[jb * nr + r + 1];
      row.P_m_baseline = base;
      row.gain = row.P_m / base - 1.0;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qdm
