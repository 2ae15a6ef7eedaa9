#include <gtest/gtest.h>

#include <random>

#include "qdm/acceptance.hpp"
#include "support/lindblad_reference.hpp"

using namespace qdm;

// Random physical parameter sets drawn over the whole allowed box.
TEST(Properties, SteadyStateIsAPhysicalDensityMatrix) {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 300; ++k) {
    const ModelParams p = acceptance::random_params(rng);
    for (ModelKind kind : {ModelKind::qdm, ModelKind::sqd}) {
      const SteadyState s = solve_steady(build_generator(p, kind));
      EXPECT_NEAR(s.trace(), 1.0, 1e-12);
      for (int i = 0; i < kPopulations; ++i) EXPECT_GE(s.x(i), -kPopulationTolerance);
      EXPECT_LE(std::norm(s.rho13()), s.population(1) * s.population(3) + 1e-12);
      EXPECT_LE(std::norm(s.rho24()), s.population(2) * s.population(4) + 1e-12);
    }
  }
}

TEST(Properties, ReferenceLindbladAgreesOnRandomSets) {
  std::mt19937_64 rng(202);
  for (int k = 0; k < 40; ++k) {
    ModelParams p = acceptance::random_params(rng);
    p.gamma_13 = std::uniform_real_distribution<double>(0.0, 0.05)(rng);
    p.gamma_24 = p.gamma_13;
    const SteadyState s = solve_steady(build_qdm_generator(p));
    const reference::Mat6 rho = reference::steady_state(reference::build(p, false));
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.x(i), rho(i, i).real(), 1e-9);
    EXPECT_NEAR(std::abs(s.rho13() - rho(0, 2)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(s.rho24() - rho(1, 3)), 0.0, 1e-9);
  }
}

TEST(Properties, TimeEvolutionConvergesToSolver) {
  acceptance::Options opt;
  opt.seed = 7;
  opt.random_sets = 15;
  const acceptance::CriterionResult r = acceptance::property_suite(opt);
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Properties, PowerNeverExceedsSupply) {
  std::mt19937_64 rng(303);
  for (int k = 0; k < 100; ++k) {
    const ModelParams p = acceptance::random_params(rng);
    const PhotovoltaicPoint pt = evaluate_point(p, ModelKind::qdm, p.Gamma);
    EXPECT_LE(pt.P, supplied_power(pt.j, p.E12));
    EXPECT_LT(efficiency(pt.P, supplied_power(pt.j, p.E12)), acceptance::kCarnotBound);
  }
}
