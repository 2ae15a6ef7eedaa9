#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qdm/analytics.hpp"
#include "qdm/golden_section.hpp"
#include "qdm/sweeps.hpp"

using namespace qdm;

// Occupations quoted to five digits, as used in the closed-form examples.
constexpr double kN1 = 0.12048;
constexpr double kNv = 12.4585;

TEST(AsymptoticCurrents, Limits) {
  EXPECT_DOUBLE_EQ(asymptotic_current_qdm(0.2, 0.3, 0.0), 0.25);
  EXPECT_DOUBLE_EQ(asymptotic_current_sqd(0.2, 0.0), 0.2);
  EXPECT_DOUBLE_EQ(current_ratio_bound(0.0), 1.0);
}

TEST(AsymptoticCurrents, ReferenceValues) {
  // 30-digit evaluations of the closed forms
  EXPECT_NEAR(asymptotic_current_qdm(kN1, kN1, kNv), 0.0823598471130525, 1e-14);
  EXPECT_NEAR(asymptotic_current_qdm(kN1, kN1, kNv), 0.0824, 1e-4);
  EXPECT_NEAR(asymptotic_current_sqd(kN1, kNv), 0.0625643430952657, 1e-14);
  EXPECT_NEAR(asymptotic_current_sqd(kN1, kNv), 0.0626, 1e-4);
  EXPECT_NEAR(current_ratio_bound(kNv), 1.31640233139896636, 1e-14);
  EXPECT_NEAR(current_ratio_bound(kNv), 1.3165, 1e-4);
}

TEST(AsymptoticCurrents, RatioIncreasesTowardFourThirds) {
  double prev = current_ratio_bound(0.0);
  for (double nv = 0.01; nv < 1e6; nv *= 2.0) {
    const double r = current_ratio_bound(nv);
    EXPECT_GT(r, prev);
    EXPECT_LT(r, 4.0 / 3.0);
    prev = r;
  }
  EXPECT_NEAR(current_ratio_bound(1e12), 4.0 / 3.0, 1e-11);
}

TEST(AsymptoticCurrents, DimensionlessInTheRateUnit) {
  // depends on occupations only; the same occupations at any gamma give the
  // same current in units of e*gamma
  const double a = asymptotic_current_qdm(0.1, 0.12, 3.0);
  const double b = asymptotic_current_qdm(0.1, 0.12, 3.0);
  EXPECT_EQ(a, b);
}

TEST(AsymptoticCurrents, FullSolverInTheStrongTunnelingLimit) {
  ModelParams p;
  p.Te = p.Th = 60.0;
  p.delta_e = p.delta_h = 0.0;
  p.gamma_c = 1e3;
  p.gamma_v = 1.0;
  const ThermalOccupations n = thermal_occupations(p);
  const double jq = evaluate_point(p, ModelKind::qdm, 1e4).j;
  const double js = evaluate_point(p, ModelKind::sqd, 1e5).j;
  EXPECT_NEAR(jq, asymptotic_current_qdm(n.n1, n.n2, n.nv), 0.05 * jq);
  EXPECT_NEAR(js, asymptotic_current_sqd(n.n1, n.nv), 0.05 * js);
  EXPECT_NEAR(jq / js, 4.0 / 3.0, 0.03);
}

TEST(Tls, TrivialCases) {
  const TlsSteady zero = tls_steady({0.0, 1.0, 2.0, 3.0});
  EXPECT_EQ(zero.rho_ee, 0.0);
  EXPECT_EQ(std::abs(zero.rho_eg), 0.0);

  const TlsSteady quarter = tls_steady({std::sqrt(2.0 * 3.0), 0.0, 2.0, 3.0});
  EXPECT_NEAR(quarter.rho_ee, 0.25, 1e-15);

  const TlsSteady strong = tls_steady({1e6, 0.0, 1.0, 1.0});
  EXPECT_NEAR(strong.rho_ee, 0.5, 1e-9);
  EXPECT_LT(std::abs(strong.rho_eg), 1e-5);
}

TEST(Tls, PopulationCoherenceIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 20.0);
  for (int k = 0; k < 1000; ++k) {
    const TlsParams p{u(rng), u(rng) - 10.0, u(rng), u(rng)};
    const TlsSteady s = tls_steady(p);
    EXPECT_NEAR(s.rho_ee, s.rho_ee_from_coherence, 1e-12);
  }
}

TEST(Tls, RejectsInvalidDamping) {
  EXPECT_THROW(tls_steady({1.0, 0.0, 0.0, 1.0}), DomainError);
  EXPECT_THROW(tls_steady({-1.0, 0.0, 1.0, 1.0}), DomainError);
  EXPECT_THROW(tls_saturation_threshold(0.0, 1.0, 0.0), DomainError);
}

TEST(Tls, SaturationThreshold) {
  EXPECT_DOUBLE_EQ(tls_saturation_threshold(0.0, 2.5, 2.5), 2.5);
  EXPECT_DOUBLE_EQ(tls_saturation_threshold(0.0, 6.0, 1.5), 3.0);
}

TEST(Tls, CoherenceMaximumSitsAtThreshold) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 10.0);
  for (int k = 0; k < 200; ++k) {
    const double delta = u(rng) - 5.0, g0 = u(rng), gp = u(rng);
    const double w_star = tls_saturation_threshold(delta, g0, gp);
    // dense scan of W, independent of the threshold formula
    double best_w = 0.0, best = -1.0;
    for (int i = 0; i <= 20000; ++i) {
      const double w = w_star * std::pow(10.0, -2.0 + 4.0 * i / 20000.0);
      const double c = std::abs(tls_steady({w, delta, g0, gp}).rho_eg);
      if (c > best) {
        best = c;
        best_w = w;
      }
    }
    EXPECT_NEAR(best_w / w_star, 1.0, 1e-3);
  }
}

TEST(Linearity, ExactLineHasUnitRSquared) {
  std::vector<CoherenceSample> s;
  for (int i = 1; i <= 6; ++i) s.push_back({0.5 * i, 2.0 * 0.5 * i * 0.01, 0.01});
  const LinearityFit f = coherence_linearity_check(s);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.used, 6u);
}

TEST(Linearity, ZeroCoherenceIsExcluded) {
  std::vector<CoherenceSample> s;
  for (int i = 1; i <= 6; ++i) s.push_back({1.0 * i, 3.0 * i, 1.0});
  s.push_back({7.0, 1.0, 0.0});
  const LinearityFit f = coherence_linearity_check(s);
  EXPECT_EQ(f.excluded, 1u);
  EXPECT_NEAR(f.slope, 3.0, 1e-12);
  s.resize(4);
  EXPECT_THROW(coherence_linearity_check(s), DomainError);
}

TEST(Linearity, CurrentTracksTunnelingTimesCoherence) {
  for (const RateSet& set : default_rate_sets()) {
    std::vector<CoherenceSample> s;
    for (double d : default_distances()) {
      ModelParams p = with_distance(ModelParams{}, d);
      p.gamma_c = set.gamma_c;
      p.gamma_v = set.gamma_v;
      const MaxPowerPoint m = max_power_point(p, ModelKind::qdm);
      s.push_back({p.Te, m.j_mpp, m.point.coh13});
    }
    EXPECT_GE(coherence_linearity_check(s).r_squared, 0.98) << set.label;
  }
}

// The order of the two slopes depends on the unspecified hbar*gamma: the
// fast-hole-escape set is steeper only toward the top of the allowed range.
TEST(Linearity, SlopeOrderingDependsOnEnergyScale) {
  auto slope = [](const RateSet& set, double hg) {
    std::vector<CoherenceSample> s;
    for (double d : default_distances()) {
      ModelParams p = with_distance(ModelParams{}, d);
      p.gamma_c = set.gamma_c;
      p.gamma_v = set.gamma_v;
      p.hbar_gamma = hg;
      const MaxPowerPoint m = max_power_point(p, ModelKind::qdm);
      s.push_back({p.Te, m.j_mpp, m.point.coh13});
    }
    return coherence_linearity_check(s).slope;
  };
  const auto sets = default_rate_sets();
  EXPECT_GT(slope(sets[1], 1e-2), slope(sets[0], 1e-2));
  EXPECT_LT(slope(sets[1], 6.58e-4), slope(sets[0], 6.58e-4));
}

TEST(Coherence, ValenceCoherenceGrowsWithHoleTunneling) {
  ModelParams base;
  base.gamma_v = 0.005;
  double prev = 0.0;
  for (double d = 10.0; d >= 2.0; d -= 1.0) {
    const IVCurve c = iv_curve(with_distance(base, d), ModelKind::qdm);
    EXPECT_GT(c.max_coh24(), prev) << "d=" << d;
    EXPECT_GT(c.max_coh24(), 10.0 * c.max_coh13()) << "d=" << d;
    prev = c.max_coh24();
  }
}

TEST(Coherence, ConductionCoherenceLargerAtWeakTunneling) {
  const double near = iv_curve(with_distance(ModelParams{}, 2.0), ModelKind::qdm).max_coh13();
  const double far = iv_curve(with_distance(ModelParams{}, 10.0), ModelKind::qdm).max_coh13();
  EXPECT_GT(far, near);
}

TEST(GoldenSection, FindsParabolaVertex) {
  const LineMaximum m = golden_section_maximize([](double x) { return -(x - 1.3) * (x - 1.3); }, 0.0, 4.0, 1e-10);
  EXPECT_NEAR(m.x, 1.3, 1e-8);
  EXPECT_GT(m.evaluations, 10);
}
