#include <gtest/gtest.h>

#include <cmath>

#include "qdm/observables.hpp"

using namespace qdm;

namespace {

SteadyState with_contacts(double p5, double p6) {
  SteadyState s;
  s.x(slot::rho55) = p5;
  s.x(slot::rho66) = p6;
  s.x(slot::rho22) = 1.0 - p5 - p6;
  return s;
}

}  // namespace

TEST(Current, IsLoadRateTimesContactPopulation) {
  const SteadyState s = with_contacts(0.2, 0.3);
  EXPECT_DOUBLE_EQ(current(s, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(current(s, 5.0), 1.0);
  SteadyState neg = s;
  neg.x(slot::rho55) = -1e-12;
  EXPECT_EQ(current(neg, 5.0), 0.0);
}

TEST(Voltage, EntropicTerm) {
  const LevelEnergies e = derive_level_energies(ModelParams{});
  EXPECT_DOUBLE_EQ(voltage(with_contacts(0.25, 0.25), e, 25.9), e.E56());
  const double r = std::exp(1.0);
  EXPECT_NEAR(voltage(with_contacts(0.1 * r, 0.1), e, 25.9), e.E56() + 25.9, 1e-12);
}

TEST(Voltage, UndefinedWhenContactEmpties) {
  const LevelEnergies e = derive_level_energies(ModelParams{});
  EXPECT_THROW(voltage(with_contacts(0.0, 0.5), e, 25.9), VoltageUndefinedError);
  EXPECT_THROW(voltage(with_contacts(0.5, 0.0), e, 25.9), VoltageUndefinedError);
}

TEST(Power, ProductsAndEfficiency) {
  EXPECT_EQ(power(0.0, 900.0), 0.0);
  EXPECT_DOUBLE_EQ(power(0.03, 800.0), 24.0);
  EXPECT_EQ(supplied_power(0.0, 920.0), 0.0);
  EXPECT_NEAR(supplied_power(0.0300, 920.0), 27.6, 1e-12);
  EXPECT_EQ(efficiency(0.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(efficiency(1.0, 4.0), 0.25);
  EXPECT_THROW(efficiency(1.0, 0.0), DomainError);
}

TEST(Coherence, VanishesWithoutTunneling) {
  ModelParams p;
  p.Te = 0.0;
  const PhotovoltaicPoint pt = evaluate_point(p, ModelKind::qdm, 1.0);
  EXPECT_EQ(pt.coh13, 0.0);
  EXPECT_GT(pt.coh24, 0.0);
}

TEST(EvaluatePoint, ConsistentObservables) {
  const ModelParams p;
  for (double G : {1e-3, 1.0, 1e3}) {
    const PhotovoltaicPoint pt = evaluate_point(p, ModelKind::qdm, G);
    EXPECT_EQ(pt.P, pt.j * pt.V);
    EXPECT_GE(pt.j, 0.0);
    EXPECT_GE(pt.coh13, 0.0);
    EXPECT_LE(pt.coh13, 0.5);
    EXPECT_LE(pt.coh24, 0.5);
    EXPECT_LT(pt.V, p.E12);
    EXPECT_GE(supplied_power(pt.j, p.E12), pt.P);
  }
}
