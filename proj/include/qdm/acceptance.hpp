#pragma once

// Built-in acceptance suite shared by the test binary and `qdm verify`.
// Each criterion reports PASS/FAIL together with the values it measured.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdm/analytics.hpp"
#include "qdm/calibration.hpp"
#include "qdm/generator.hpp"
#include "qdm/model.hpp"
#include "qdm/steady_state.hpp"
#include "qdm/sweeps.hpp"

namespace qdm::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20240607;
  int random_sets = 100;
};

namespace detail {

inline bool within_rel(double v, double target, double rel) {
  return std::abs(v - target) <= rel * std::abs(target);
}

inline bool within_abs(double v, double target, double tol) { return std::abs(v - target) <= tol; }

class Report {
public:
  void check(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    if (!os_.str().empty()) os_ << "; ";
    os_ << (ok ? "" : "MISS ") << what;
  }
  void note(const std::string& what) {
    if (!os_.str().empty()) os_ << "; ";
    os_ << what;
  }
  bool pass() const { return pass_; }
  std::string text() const { return os_.str(); }

private:
  bool pass_ = true;
  std::ostringstream os_;
};

inline std::string num(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

inline std::string pct(double v) { return num(100.0 * v, 3) + "%"; }

// Slowest nonzero decay rate of the generator on its active slots.
inline double spectral_gap(const GeneratorMatrix& g) {
  std::vector<int> idx;
  for (int i = 0; i < kStateSize; ++i) {
    if (g.active[static_cast<std::size_t>(i)]) idx.push_back(i);
  }
  const int n = static_cast<int>(idx.size());
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = g.matrix(idx[r], idx[c]);
  }
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(a, false).eigenvalues();
  const double scale = a.cwiseAbs().maxCoeff();
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& z : ev) {
    const double re = -z.real();
    if (re > 1e-12 * scale) gap = std::min(gap, re);
  }
  return gap;
}

}  // namespace detail

// ---- 1, 2: calibration ----------------------------------------------------

inline CriterionResult sqd_calibration(const CalibrationReport& cal, double seconds) {
  const CalibrationTargets t;
  detail::Report r;
  r.check(detail::within_rel(cal.Voc_sqd, t.Voc_sqd, 0.02), "Voc=" + detail::num(cal.Voc_sqd) + " mV");
  r.check(detail::within_rel(cal.jsc_sqd, t.jsc_sqd, 0.10), "jsc=" + detail::num(cal.jsc_sqd));
  r.check(detail::within_rel(cal.Pm_sqd, t.Pm_sqd, 0.10), "Pm=" + detail::num(cal.Pm_sqd));
  r.check(seconds < 30.0, "runtime " + detail::num(seconds, 3) + " s");
  r.note("calibrated hbar_gamma=" + detail::num(cal.hbar_gamma) + " meV");
  return {1, "single-dot calibration", r.pass(), r.text(), seconds};
}

inline CriterionResult qdm_calibration(const CalibrationReport& cal) {
  const CalibrationTargets t;
  detail::Report r;
  r.check(detail::within_rel(cal.jsc_qdm, t.jsc_qdm, 0.10), "jsc=" + detail::num(cal.jsc_qdm));
  r.check(detail::within_rel(cal.Pm_qdm, t.Pm_qdm, 0.10), "Pm=" + detail::num(cal.Pm_qdm));
  r.check(cal.jsc_qdm > cal.jsc_sqd && cal.Pm_qdm > cal.Pm_sqd, "QDM above SQD");
  r.note("hbar_gamma=" + detail::num(cal.hbar_gamma) + " meV");
  return {2, "molecule calibration", r.pass(), r.text(), 0.0};
}

// ---- 3: relative gains ----------------------------------------------------

inline CriterionResult relative_gains(double hbar_gamma) {
  detail::Report r;
  struct Case {
    double gc, gv, dj, dp;
  };
  for (const Case c : {Case{100.0, 0.05, 0.07, 0.09}, Case{50.0, 5.0, 0.31, 0.32}}) {
    ModelParams p = with_distance(ModelParams{}, 2.0);
    p.gamma_c = c.gc;
    p.gamma_v = c.gv;
    p.hbar_gamma = hbar_gamma;
    const CurrentGain g = relative_current_gain(p);
    const std::string tag = "(" + detail::num(c.gc) + "," + detail::num(c.gv) + ") ";
    r.check(detail::within_abs(g.delta_j, c.dj, 0.03), tag + "dj=" + detail::pct(g.delta_j));
    r.check(detail::within_abs(g.delta_Pm, c.dp, 0.03), tag + "dPm=" + detail::pct(g.delta_Pm));
  }
  r.note("hbar_gamma=" + detail::num(hbar_gamma) + " meV");
  return {3, "relative current and power gains", r.pass(), r.text(), 0.0};
}

// ---- 4: grid scan -----------------------------------------------------------

inline LogAxis scan_gamma_c_axis() { return {1.0, 500.0, 40}; }
inline LogAxis scan_gamma_v_axis() { return {1e-4, 20.0, 40}; }

// gamma_c counts as "much larger" than gamma_v at a factor of 10.
inline constexpr double kDominanceFactor = 10.0;
inline constexpr double kPlateauTolerance = 0.005;
// Width of the "dj ~ 0" band used for the sign test at d = 10 nm.
inline constexpr double kGainSignThreshold = 0.01;

inline CriterionResult grid_scan_ceiling(double hbar_gamma) {
  ModelParams p;
  p.hbar_gamma = hbar_gamma;
  detail::Report r;

  const GammaGridScan near = gamma_grid_scan(with_distance(p, 2.0), scan_gamma_c_axis(), scan_gamma_v_axis(), {}, 2.0);
  const ScenarioResult* best = nullptr;
  for (const auto& c : near.cells) {
    if (c.ok() && c.delta_j && (!best || *c.delta_j > *best->delta_j)) best = &c;
  }
  if (!best) {
    r.check(false, "no valid cell at d=2");
  } else {
    r.check(*best->delta_j >= 0.27 && *best->delta_j <= 0.33,
            "d=2 max dj=" + detail::pct(*best->delta_j));
    // The ceiling is a plateau in gamma_c; it counts as attained in the
    // region when the best cell there is within kPlateauTolerance of it.
    double region_best = -1.0;
    for (const auto& c : near.cells) {
      if (c.ok() && c.delta_j && c.gamma_v >= 5.0 && c.gamma_c >= kDominanceFactor * c.gamma_v) {
        region_best = std::max(region_best, *c.delta_j);
      }
    }
    r.check(region_best >= *best->delta_j - kPlateauTolerance,
            "best at gv>=5, gc>=10 gv: " + detail::pct(region_best) + " (global argmax gc=" +
                detail::num(best->gamma_c) + ", gv=" + detail::num(best->gamma_v) + ")");
  }
  r.note("failed cells " + std::to_string(near.failures()));

  const GammaGridScan far = gamma_grid_scan(with_distance(p, 10.0), scan_gamma_c_axis(), scan_gamma_v_axis(), {}, 10.0);
  std::size_t positive = 0;
  std::size_t misplaced = 0;
  double worst = 0.0;
  for (const auto& c : far.cells) {
    if (!c.ok() || !c.delta_j) continue;
    if (!(c.gamma_v > 1.0)) worst = std::max(worst, *c.delta_j);
    if (*c.delta_j <= kGainSignThreshold) continue;
    ++positive;
    if (!(c.gamma_v > 1.0)) ++misplaced;
  }
  r.check(positive > 0 && misplaced == 0,
          "d=10 cells with dj>1%: " + std::to_string(positive) + ", at gv<=1: " +
              std::to_string(misplaced) + " (max dj at gv<=1: " + detail::pct(worst) + ")");
  r.note("failed cells " + std::to_string(far.failures()));
  return {4, "grid-scan ceiling", r.pass(), r.text(), 0.0};
}

// ---- 5: asymptotic currents -----------------------------------------------

inline CriterionResult asymptotic_oracle() {
  detail::Report r;
  constexpr double kLargeGamma = 1e4;
  ModelParams p;
  p.Te = 50.0;
  p.Th = 50.0;
  p.gamma_c = 1e3;
  p.gamma_v = 1.0;
  // identical dots so that n1 = n2 and the ratio formula applies
  p.delta_e = 0.0;
  p.delta_h = 0.0;
  p.delta_c = 2.0;
  p.delta_v = 2.0;

  // The closed forms are first order in n1, so away from the headline
  // occupation the sun is cooled until n1 << 2 nv + 1.
  auto check_at = [&](double delta_v, double kTs, bool headline) {
    ModelParams q = p;
    q.delta_v = delta_v;
    q.kTs = kTs;
    const ThermalOccupations nq = thermal_occupations(q, ModelKind::qdm);
    const double jq = evaluate_point(q, ModelKind::qdm, kLargeGamma).j;
    const double js = evaluate_point(q, ModelKind::sqd, kLargeGamma).j;
    const double aq = asymptotic_current_qdm(nq.n1, nq.n2, nq.nv);
    const double as = asymptotic_current_sqd(nq.n1, nq.nv);
    const double bound = current_ratio_bound(nq.nv);
    const std::string tag = "nv=" + detail::num(nq.nv) + " ";
    r.check(detail::within_rel(jq, aq, 0.05), tag + "jQDM=" + detail::num(jq) + " vs " + detail::num(aq));
    r.check(detail::within_rel(js, as, 0.05), tag + "jSQD=" + detail::num(js) + " vs " + detail::num(as));
    r.check(detail::within_rel(jq / js, bound, 0.05),
            tag + "ratio=" + detail::num(jq / js) + " vs " + detail::num(bound));
    if (headline) {
      r.check(detail::within_abs(jq / js, 4.0 / 3.0, 0.03), "ratio vs 4/3: " + detail::num(jq / js));
    }
  };
  check_at(2.0, 500.0, true);
  check_at(20.0, 200.0, false);
  check_at(80.0, 200.0, false);
  return {5, "asymptotic current oracle", r.pass(), r.text(), 0.0};
}

// ---- 6: Carnot bound and alignments -----------------------------------------

inline constexpr double kCarnotBound = 1.0 - 25.9 / 500.0;

inline CriterionResult carnot_and_alignments(double hbar_gamma) {
  ModelParams p;
  p.hbar_gamma = hbar_gamma;
  const std::vector<double> ds = default_distances();
  const auto rows = efficiency_vs_distance(p, ds);
  const std::size_t nd = ds.size();
  auto eta = [&](std::size_t a, std::size_t k) { return rows[a * nd + k].eta; };

  detail::Report r;
  double eta_max = 0.0;
  for (const auto& row : rows) eta_max = std::max(eta_max, row.eta);
  r.check(eta_max < kCarnotBound, "max eta=" + detail::num(eta_max, 5) + " < " + detail::num(kCarnotBound, 5));

  const std::size_t a2 = 2;
  std::size_t a2_best = 0;
  std::string leaders;
  for (std::size_t k = 0; k < nd; ++k) {
    std::size_t lead = 0;
    for (std::size_t a = 1; a < kAllAlignments.size(); ++a) {
      if (eta(a, k) > eta(lead, k)) lead = a;
    }
    if (lead == a2) ++a2_best;
    if (k == 0 || k + 1 == nd) {
      leaders += (leaders.empty() ? "" : ",") + std::string("d=") + detail::num(ds[k]) + ":" +
                 std::string(to_string(kAllAlignments[lead]));
    }
  }
  std::size_t a2_power = 0;
  for (std::size_t k = 0; k < nd; ++k) {
    bool top = true;
    for (std::size_t a = 0; a < kAllAlignments.size(); ++a) top = top && rows[a * nd + k].P_m <= rows[a2 * nd + k].P_m;
    if (top) ++a2_power;
  }
  r.note("A2 highest Pm at " + std::to_string(a2_power) + "/" + std::to_string(nd) + " distances");
  r.check(a2_best == nd, "A2 highest eta at " + std::to_string(a2_best) + "/" +
                             std::to_string(nd) + " distances (leader " + leaders + ")");

  for (std::size_t a : {std::size_t{1}, std::size_t{3}, std::size_t{2}}) {
    double lo = 1.0, hi = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < nd; ++k) {
      lo = std::min(lo, eta(a, k));
      hi = std::max(hi, eta(a, k));
      mean += eta(a, k) / static_cast<double>(nd);
    }
    r.check((hi - lo) / mean < 0.10, std::string(to_string(kAllAlignments[a])) +
                                         " eta spread " + detail::pct((hi - lo) / mean));
  }
  return {6, "Carnot bound and band alignments", r.pass(), r.text(), 0.0};
}

// ---- 7: phonon-assisted tunneling -------------------------------------------

inline CriterionResult phonon_assisted(double hbar_gamma) {
  ModelParams p;
  p.hbar_gamma = hbar_gamma;
  detail::Report r;
  const auto rows = phonon_assisted_comparison(p, {0.001, 0.01});
  auto gain = [&](const std::string& set, double d, double rate) {
    for (const auto& row : rows) {
      if (row.rate_set == set && row.d == d && row.rate == rate) return row.gain;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double b2 = gain("b", 2.0, 0.001);
  const double b10 = gain("b", 10.0, 0.001);
  const double d2 = gain("d", 2.0, 0.001);
  r.check(detail::within_abs(b2, 0.077, 0.03), "set b d=2 gain=" + detail::pct(b2));
  r.check(detail::within_abs(b10, 0.147, 0.03), "set b d=10 gain=" + detail::pct(b10));
  r.check(std::abs(d2) < 0.01, "set d d=2 change=" + detail::pct(d2));
  r.check(b2 > 0.0 && b10 > b2, "gain signs and ordering");
  r.note("best match at rate 0.01: " + detail::pct(gain("b", 2.0, 0.01)) + ", " +
         detail::pct(gain("b", 10.0, 0.01)) + ", set d " + detail::pct(gain("d", 2.0, 0.01)));
  return {7, "phonon-assisted gains", r.pass(), r.text(), 0.0};
}

// ---- 8: property suite --------------------------------------------------------

inline ModelParams random_params(std::mt19937_64& rng) {
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto log_uniform = [&](double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); };
  ModelParams p = with_distance(ModelParams{}, uniform(2.0, 10.0));
  p.gamma_c = log_uniform(1.0, 200.0);
  p.gamma_v = log_uniform(1e-3, 10.0);
  p.Gamma = log_uniform(1e-3, 1e3);
  return p;
}

inline CriterionResult property_suite(const Options& opt) {
  detail::Report r;
  std::mt19937_64 rng(opt.seed);

  double oracle_err = 0.0;
  double trace_err = 0.0;
  double min_pop = 0.0;
  double psd_excess = -1.0;
  double homogeneity_err = 0.0;
  for (int k = 0; k < opt.random_sets; ++k) {
    const ModelParams p = random_params(rng);
    const GeneratorMatrix g = build_qdm_generator(p);
    const SteadyState s = solve_steady(g);

    std::uniform_real_distribution<double> u(0.0, 1.0);
    StateVector x0 = StateVector::Zero();
    for (int i = 0; i < kPopulations; ++i) x0(i) = u(rng);
    x0 /= x0.head<kPopulations>().sum();
    const double dt = 0.08 / g.max_abs_entry();
    const double t_final = 45.0 / detail::spectral_gap(g);
    const StateVector x = evolve(g, x0, t_final, dt);
    oracle_err = std::max(oracle_err, (x - s.x).cwiseAbs().maxCoeff());
    trace_err = std::max(trace_err, std::abs(s.trace() - 1.0));
    min_pop = std::min(min_pop, s.x.head<kPopulations>().minCoeff());
    psd_excess = std::max(psd_excess, std::norm(s.rho13()) - s.population(1) * s.population(3));
    psd_excess = std::max(psd_excess, std::norm(s.rho24()) - s.population(2) * s.population(4));

    const double lambda = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
    ModelParams q = p;
    for (double* v : {&q.gamma1, &q.gamma2, &q.gamma_c, &q.gamma_v, &q.Gamma, &q.gamma_13, &q.gamma_24}) {
      *v *= lambda;
    }
    q.hbar_gamma /= lambda;
    const GeneratorMatrix gq = build_qdm_generator(q);
    const double scale = g.max_abs_entry() * lambda;
    homogeneity_err = std::max(homogeneity_err, (gq.matrix - lambda * g.matrix).cwiseAbs().maxCoeff() / scale);
    homogeneity_err = std::max(homogeneity_err, (solve_steady(gq).x - s.x).cwiseAbs().maxCoeff());
  }
  r.check(oracle_err <= 1e-6, "oracle max diff " + detail::num(oracle_err, 3) + " over " +
                                  std::to_string(opt.random_sets) + " sets");
  r.check(trace_err <= 1e-12, "trace err " + detail::num(trace_err, 3));
  r.check(min_pop >= -kPopulationTolerance, "min population " + detail::num(min_pop, 3));
  r.check(psd_excess <= 1e-9, "coherence bound excess " + detail::num(psd_excess, 3));
  r.check(homogeneity_err <= 1e-9, "homogeneity err " + detail::num(homogeneity_err, 3));

  // two-level identities
  double tls_err = 0.0;
  double argmax_err = 0.0;
  for (int k = 0; k < 50; ++k) {
    std::uniform_real_distribution<double> u(0.1, 10.0);
    TlsParams t{u(rng), u(rng) - 5.0, u(rng), u(rng)};
    const TlsSteady s = tls_steady(t);
    tls_err = std::max(tls_err, std::abs(s.rho_ee - s.rho_ee_from_coherence));

    const double w_star = tls_saturation_threshold(t.delta, t.gamma0, t.gammap);
    auto coh = [&](double lw) {
      TlsParams q = t;
      q.W = std::exp(lw);
      return std::abs(tls_steady(q).rho_eg);
    };
    const std::vector<double> grid = log_space(w_star * 1e-2, w_star * 1e2, 401);
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (coh(std::log(grid[i])) > coh(std::log(grid[best]))) best = i;
    }
    const LineMaximum m = golden_section_maximize(coh, std::log(grid[best - 1]),
                                                  std::log(grid[best + 1]), 1e-9);
    argmax_err = std::max(argmax_err, std::abs(std::exp(m.x) / w_star - 1.0));
  }
  r.check(tls_err <= 1e-12, "TLS identity err " + detail::num(tls_err, 3));
  r.check(argmax_err <= 1e-3, "TLS argmax vs W' " + detail::num(argmax_err, 3));

  // current-coherence linearity and coherence trend over d
  for (const RateSet& set : default_rate_sets()) {
    std::vector<CoherenceSample> samples;
    std::vector<double> max_coh;
    for (double d : default_distances()) {
      ModelParams q = with_distance(ModelParams{}, d);
      q.gamma_c = set.gamma_c;
      q.gamma_v = set.gamma_v;
      const IVCurve c = iv_curve(q, ModelKind::qdm);
      const MaxPowerPoint m = max_power_point(c);
      samples.push_back({q.Te, m.j_mpp, m.point.coh13});
      max_coh.push_back(c.max_coh13());
    }
    const LinearityFit f = coherence_linearity_check(samples);
    r.check(f.r_squared >= 0.98, "set " + set.label + " R2=" + detail::num(f.r_squared, 5));
    bool decreasing_in_te = true;  // Te falls as d grows
    for (std::size_t i = 1; i < max_coh.size(); ++i) {
      decreasing_in_te = decreasing_in_te && max_coh[i] > max_coh[i - 1];
    }
    r.check(decreasing_in_te, "set " + set.label + " max|rho13| decreasing in Te");
  }
  return {8, "property suite", r.pass(), r.text(), 0.0};
}

// ---- runner -----------------------------------------------------------------

inline std::vector<CriterionResult> run_all(const Options& opt = {}) {
  using clock = std::chrono::steady_clock;
  std::vector<CriterionResult> out;
  auto timed = [&](auto&& fn) {
    const auto t0 = clock::now();
    CriterionResult res = fn();
    res.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.push_back(std::move(res));
  };

  const auto t0 = clock::now();
  const CalibrationReport cal = calibrate_hbar_gamma();
  const double cal_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  out.push_back(sqd_calibration(cal, cal_seconds));
  timed([&] { return qdm_calibration(cal); });
  const double hg = cal.hbar_gamma;
  timed([&] { return relative_gains(hg); });
  timed([&] { return grid_scan_ceiling(hg); });
  timed([&] { return asymptotic_oracle(); });
  timed([&] { return carnot_and_alignments(hg); });
  timed([&] { return phonon_assisted(hg); });
  timed([&] { return property_suite(opt); });
  return out;
}

inline std::string format_line(const CriterionResult& c) {
  std::ostringstream os;
  os << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << detail::num(c.seconds, 3)
     << " s): " << c.detail;
  return os.str();
}

}  // namespace qdm::acceptance
