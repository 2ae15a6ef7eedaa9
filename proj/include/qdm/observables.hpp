#pragma once

// Photovoltaic quantities of a steady state. Currents are in units of
// e*gamma, voltages in meV/e (numerically mV), powers in gamma*meV.

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "qdm/errors.hpp"
#include "qdm/model.hpp"
#include "qdm/steady_state.hpp"

namespace qdm {

inline constexpr double kVoltagePopulationFloor = 1e-300;

inline double current(const SteadyState& s, double Gamma) {
  return Gamma * s.population(5);
}

// Photovoltage across the contacts:  V = (E5 - E6) + kTc ln(rho55 / rho66).
inline double voltage(const SteadyState& s, const LevelEnergies& e, double kTc) {
  const double p5 = s.population(5);
  const double p6 = s.population(6);
  if (!(p5 > kVoltagePopulationFloor) || !(p6 > kVoltagePopulationFloor)) {
    throw VoltageUndefinedError("photovoltage undefined: rho55=" + std::to_string(p5) +
                                ", rho66=" + std::to_string(p6));
  }
  return e.E56() + kTc * std::log(p5 / p6);
}

inline double power(double j, double V) { return j * V; }

// Power drawn from the sun to sustain current j through the E12 transition.
inline double supplied_power(double j, double E12) { return j * E12; }

inline double efficiency(double Pm, double P_supplied) {
  if (!(P_supplied > 0.0)) {
    throw DomainError("efficiency undefined: supplied power must be > 0");
  }
  return Pm / P_supplied;
}

struct CoherenceMagnitudes {
  double rho13 = 0.0;
  double rho24 = 0.0;
};

inline CoherenceMagnitudes coherence_magnitudes(const SteadyState& s) {
  return {std::abs(s.rho13()), std::abs(s.rho24())};
}

struct PhotovoltaicPoint {
  double Gamma = 0.0;
  double j = 0.0;
  double V = 0.0;
  double P = 0.0;
  double coh13 = 0.0;
  double coh24 = 0.0;
  SteadyState state;
};

// Solves the steady state at load rate Gamma and evaluates every observable.
// Throws VoltageUndefinedError when rho55 or rho66 underflows.
inline PhotovoltaicPoint evaluate_point(ModelParams p, ModelKind kind, double Gamma) {
  p.Gamma = Gamma;
  const LevelEnergies e = derive_level_energies(p, kind);
  PhotovoltaicPoint pt;
  pt.Gamma = Gamma;
  pt.state = solve_steady(build_generator(p, kind));
  pt.j = current(pt.state, Gamma);
  const CoherenceMagnitudes c = coherence_magnitudes(pt.state);
  pt.coh13 = c.rho13;
  pt.coh24 = c.rho24;
  pt.V = voltage(pt.state, e, p.kTc);
  pt.P = power(pt.j, pt.V);
  return pt;
}

}  // namespace qdm
