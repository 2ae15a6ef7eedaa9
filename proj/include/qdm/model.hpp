#pragma once

// Physical parameters of the quantum-dot-molecule photocell, level energies
// and the thermal occupations of the photon and phonon reservoirs.
//
// Units: energies in meV, rates in multiples of the reference radiative
// rate gamma, distances in nm.

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "qdm/errors.hpp"

namespace qdm {

enum class ModelKind { qdm, sqd };

inline std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::qdm ? "qdm" : "sqd";
}

inline ModelKind parse_model_kind(std::string_view name) {
  if (name == "qdm") return ModelKind::qdm;
  if (name == "sqd") return ModelKind::sqd;
  throw ConfigError("unknown model kind '" + std::string(name) + "' (expected qdm or sqd)");
}

struct ModelParams {
  double E12 = 1115.0;          // gap of dot 1
  double delta_e = 3.0;         // conduction detuning between the dots
  double delta_h = 3.0;         // valence detuning between the dots
  double delta_c = 2.0;         // conduction contact offset
  double delta_v = 2.0;         // valence contact offset
  double Te = 4.409504041637082;   // hbar*T_e at d = 2 nm
  double Th = 0.6076467128536821;  // hbar*T_h at d = 2 nm
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double gamma_c = 100.0;
  double gamma_v = 0.05;
  double Gamma = 1.0;           // load rate
  double kTs = 500.0;
  double kTc = 25.9;
  double hbar_gamma = 6.58e-4;  // hbar*gamma, gamma = 1/ns
  double gamma_13 = 0.0;        // phonon-assisted conduction tunneling
  double gamma_24 = 0.0;        // phonon-assisted valence tunneling

  double E34() const { return E12 - (delta_e + delta_h); }

  // Throws DomainError on the first violated invariant.
  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    const std::array<double, 17> all{E12,    delta_e, delta_h, delta_c, delta_v, Te,
                                     Th,     gamma1,  gamma2,  gamma_c, gamma_v, Gamma,
                                     kTs,    kTc,     hbar_gamma, gamma_13, gamma_24};
    for (double v : all) {
      if (!finite(v)) throw DomainError("model parameters must be finite");
    }
    const std::array<std::pair<const char*, double>, 9> rates{{{"gamma1", gamma1},
                                                               {"gamma2", gamma2},
                                                               {"gamma_c", gamma_c},
                                                               {"gamma_v", gamma_v},
                                                               {"Gamma", Gamma},
                                                               {"gamma_13", gamma_13},
                                                               {"gamma_24", gamma_24},
                                                               {"Te", Te},
                                                               {"Th", Th}}};
    for (const auto& [name, v] : rates) {
      if (v < 0.0) throw DomainError(std::string(name) + " must be >= 0");
    }
    if (!(kTs > 0.0)) throw DomainError("kTs must be > 0");
    if (!(kTc > 0.0)) throw DomainError("kTc must be > 0");
    if (!(E12 > 0.0)) throw DomainError("E12 must be > 0");
    if (!(hbar_gamma > 0.0)) throw DomainError("hbar_gamma must be > 0");
  }
};

// Mean occupation of a bosonic mode of energy E in a bath at thermal energy kT.
inline double bose_occupation(double E, double kT) {
  if (!(E > 0.0) || !(kT > 0.0)) {
    throw DomainError("bose_occupation requires E > 0 and kT > 0 (got E=" + std::to_string(E) +
                      ", kT=" + std::to_string(kT) + ")");
  }
  return 1.0 / std::expm1(E / kT);
}

// Energies of |1>..|6> with w2 = 0 as reference.
struct LevelEnergies {
  std::array<double, 6> w{};

  double operator[](int level) const { return w[static_cast<std::size_t>(level - 1)]; }
  double E12() const { return w[0] - w[1]; }
  double E34() const { return w[2] - w[3]; }
  double E35() const { return w[2] - w[4]; }
  double E15() const { return w[0] - w[4]; }
  double E62() const { return w[5] - w[1]; }
  double E56() const { return w[4] - w[5]; }
};

// For the single-dot baseline the conduction contact hangs below |1>
// instead of |3>; the QDM-only levels |3>,|4> keep their QDM placement.
inline LevelEnergies derive_level_energies(const ModelParams& p,
                                           ModelKind kind = ModelKind::qdm) {
  LevelEnergies e;
  const double w2 = 0.0;
  const double w1 = p.E12;
  const double w3 = w1 - p.delta_e;
  const double w4 = w2 + p.delta_h;
  const double w5 = (kind == ModelKind::qdm ? w3 : w1) - p.delta_c;
  const double w6 = w2 + p.delta_v;
  e.w = {w1, w2, w3, w4, w5, w6};

  if (kind == ModelKind::qdm && !(e.E34() > 0.0)) {
    throw GeometryError("E34 = E12 - (delta_e + delta_h) must be > 0 (got " +
                        std::to_string(e.E34()) + " meV)");
  }
  if (!(p.delta_c > 0.0)) {
    throw GeometryError("conduction contact offset must be > 0 so the escape channel is downhill");
  }
  if (!(e.E62() > 0.0)) {
    throw GeometryError("valence contact offset must be > 0 so the return channel is downhill");
  }
  return e;
}

struct ThermalOccupations {
  double n1 = 0.0;  // photons at E12
  double n2 = 0.0;  // photons at E34
  double nc = 0.0;  // phonons at the conduction contact gap
  double nv = 0.0;  // phonons at E62
};

inline ThermalOccupations thermal_occupations(const ModelParams& p,
                                              ModelKind kind = ModelKind::qdm) {
  const LevelEnergies e = derive_level_energies(p, kind);
  ThermalOccupations n;
  n.n1 = bose_occupation(e.E12(), p.kTs);
  n.n2 = kind == ModelKind::qdm ? bose_occupation(e.E34(), p.kTs) : 0.0;
  n.nc = bose_occupation(kind == ModelKind::qdm ? e.E35() : e.E15(), p.kTc);
  n.nv = bose_occupation(e.E62(), p.kTc);
  return n;
}

struct Tunneling {
  double Te = 0.0;  // meV
  double Th = 0.0;  // meV
};

// Exponential fit of the measured anticrossing energies versus barrier
// width; the tunneling energy is half the anticrossing gap.
inline Tunneling tunneling_from_distance(double d_nm) {
  if (!(d_nm > 0.0)) {
    throw DomainError("barrier width must be > 0 nm");
  }
  constexpr double kAnticrossingE = 11.67;  // meV
  constexpr double kLengthE = 7.14;         // nm
  constexpr double kAnticrossingH = 2.2;    // meV
  constexpr double kLengthH = 3.37;         // nm
  return {0.5 * kAnticrossingE * std::exp(-d_nm / kLengthE),
          0.5 * kAnticrossingH * std::exp(-d_nm / kLengthH)};
}

inline ModelParams with_distance(ModelParams p, double d_nm) {
  const Tunneling t = tunneling_from_distance(d_nm);
  p.Te = t.Te;
  p.Th = t.Th;
  return p;
}

enum class BandAlignment { reference, A1, A2, B1, B2 };

inline constexpr std::array<BandAlignment, 5> kAllAlignments{
    BandAlignment::reference, BandAlignment::A1, BandAlignment::A2, BandAlignment::B1,
    BandAlignment::B2};

inline std::string_view to_string(BandAlignment a) {
  switch (a) {
    case BandAlignment::reference: return "0";
    case BandAlignment::A1: return "A1";
    case BandAlignment::A2: return "A2";
    case BandAlignment::B1: return "B1";
    case BandAlignment::B2: return "B2";
  }
  return "?";
}

inline BandAlignment parse_alignment(std::string_view name) {
  for (BandAlignment a : kAllAlignments) {
    if (name == to_string(a)) return a;
  }
  throw ConfigError("unknown band alignment '" + std::string(name) +
                    "' (expected one of 0, A1, A2, B1, B2)");
}

// Replaces (delta_e, delta_h) per the alignment table. The incoming
// detunings are taken as the reference pair; contact offsets are untouched.
inline ModelParams apply_band_alignment(ModelParams p, BandAlignment a) {
  const double de0 = p.delta_e;
  const double dh0 = p.delta_h;
  switch (a) {
    case BandAlignment::reference:
      break;
    case BandAlignment::A1:
      p.delta_e = 0.0;
      p.delta_h = dh0 + de0;
      break;
    case BandAlignment::A2:
      p.delta_e = dh0 + de0;
      p.delta_h = 0.0;
      break;
    case BandAlignment::B1:
      p.delta_e = -p.delta_c;
      p.delta_h = dh0 + de0 + p.delta_c;
      break;
    case BandAlignment::B2:
      p.delta_e = de0 + dh0 - p.delta_v;
      p.delta_h = p.delta_v;
      break;
  }
  return p;
}

}  // namespace qdm
