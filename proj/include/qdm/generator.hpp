#pragma once

// Real linear generator of the reduced density-matrix dynamics.
//
// State layout (12 slots):
//   0..5  rho11 .. rho66
//   6, 7  Re rho13, Im rho13
//   8, 9  Re rho24, Im rho24
//   10,11 spare, always zero
// rho31 and rho42 are eliminated through hermiticity. Time is measured in
// units of 1/gamma; energies enter as frequencies E / (hbar*gamma).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>

#include "qdm/model.hpp"

namespace qdm {

inline constexpr int kStateSize = 12;
inline constexpr int kPopulations = 6;

namespace slot {
inline constexpr int rho11 = 0;
inline constexpr int rho22 = 1;
inline constexpr int rho33 = 2;
inline constexpr int rho44 = 3;
inline constexpr int rho55 = 4;
inline constexpr int rho66 = 5;
inline constexpr int re13 = 6;
inline constexpr int im13 = 7;
inline constexpr int re24 = 8;
inline constexpr int im24 = 9;
inline constexpr int spare0 = 10;
inline constexpr int spare1 = 11;
}  // namespace slot

using StateVector = Eigen::Matrix<double, kStateSize, 1>;
using GeneratorData = Eigen::Matrix<double, kStateSize, kStateSize>;
using SlotMask = std::bitset<kStateSize>;

// Below this splitting the phonon-assisted occupation is evaluated at the
// floor energy instead of diverging.
inline constexpr double kPhononEnergyFloor = 0.01;  // meV

struct GeneratorMatrix {
  GeneratorData matrix = GeneratorData::Zero();
  ModelKind kind = ModelKind::qdm;
  // Slots that take part in the dynamics. Everything else is held at zero.
  SlotMask active;

  double max_abs_entry() const { return matrix.cwiseAbs().maxCoeff(); }

  // Copy that keeps only the slots in `mask` (intersected with the active set).
  GeneratorMatrix restricted(SlotMask mask) const {
    GeneratorMatrix r = *this;
    r.active &= mask;
    for (int i = 0; i < kStateSize; ++i) {
      if (!r.active[static_cast<std::size_t>(i)]) {
        r.matrix.row(i).setZero();
        r.matrix.col(i).setZero();
      }
    }
    return r;
  }

  bool operator==(const GeneratorMatrix& o) const {
    return kind == o.kind && active == o.active && matrix == o.matrix;
  }
};

namespace detail {

// Incoherent population transfer rates: rate[to][from].
struct RateTable {
  std::array<std::array<double, kPopulations>, kPopulations> rate{};

  void add(int from, int to, double r) { rate[to - 1][from - 1] += r; }

  // Thermal channel between two levels; `upper` relaxes into `lower` with
  // rate*(n+1) and is re-excited with rate*n.
  void thermal(int upper, int lower, double r, double n) {
    add(upper, lower, r * (n + 1.0));
    add(lower, upper, r * n);
  }

  double outflow(int level) const {
    double s = 0.0;
    for (int to = 0; to < kPopulations; ++to) s += rate[to][level - 1];
    return s;
  }
};

inline void write_populations(GeneratorData& m, const RateTable& t) {
  for (int from = 0; from < kPopulations; ++from) {
    double out = 0.0;
    for (int to = 0; to < kPopulations; ++to) {
      if (to == from) continue;
      m(to, from) += t.rate[to][from];
      out += t.rate[to][from];
    }
    m(from, from) -= out;
  }
}

// Adds the commutator and dephasing terms of one tunneling-coupled pair
// (a, b) with coherence stored at (re, im):
//   d rho_aa/dt = -2 W Im rho_ab,  d rho_bb/dt = +2 W Im rho_ab
//   d rho_ab/dt = -i w rho_ab - i W (rho_bb - rho_aa) - D rho_ab
inline void write_coherent_pair(GeneratorData& m, int a, int b, int re, int im, double coupling,
                                double detuning, double dephasing) {
  m(a, im) += -2.0 * coupling;
  m(b, im) += 2.0 * coupling;

  m(re, re) += -dephasing;
  m(re, im) += detuning;

  m(im, re) += -detuning;
  m(im, im) += -dephasing;
  m(im, b) += -coupling;
  m(im, a) += coupling;
}

inline void add_phonon_assisted(RateTable& t, int i, int j, double wi, double wj, double rate,
                                double kTc) {
  if (rate <= 0.0) return;
  const double split = std::max(std::abs(wi - wj), kPhononEnergyFloor);
  const double n = bose_occupation(split, kTc);
  if (wi >= wj) {
    t.thermal(i, j, rate, n);
  } else {
    t.thermal(j, i, rate, n);
  }
}

}  // namespace detail

inline GeneratorMatrix build_qdm_generator(const ModelParams& p) {
  p.validate();
  const LevelEnergies e = derive_level_energies(p, ModelKind::qdm);
  const ThermalOccupations n = thermal_occupations(p, ModelKind::qdm);

  detail::RateTable t;
  t.thermal(1, 2, p.gamma1, n.n1);
  t.thermal(3, 4, p.gamma2, n.n2);
  t.thermal(3, 5, p.gamma_c, n.nc);
  t.thermal(6, 2, p.gamma_v, n.nv);
  t.add(5, 6, p.Gamma);
  detail::add_phonon_assisted(t, 1, 3, e[1], e[3], p.gamma_13, p.kTc);
  detail::add_phonon_assisted(t, 2, 4, e[2], e[4], p.gamma_24, p.kTc);

  GeneratorMatrix g;
  g.kind = ModelKind::qdm;
  for (int i = 0; i < 10; ++i) g.active.set(static_cast<std::size_t>(i));
  detail::write_populations(g.matrix, t);

  const double scale = 1.0 / p.hbar_gamma;
  const double dephasing13 = 0.5 * (t.outflow(1) + t.outflow(3));
  const double dephasing24 = 0.5 * (t.outflow(2) + t.outflow(4));
  detail::write_coherent_pair(g.matrix, slot::rho11, slot::rho33, slot::re13, slot::im13,
                              p.Te * scale, (e[1] - e[3]) * scale, dephasing13);
  detail::write_coherent_pair(g.matrix, slot::rho22, slot::rho44, slot::re24, slot::im24,
                              p.Th * scale, (e[2] - e[4]) * scale, dephasing24);
  return g;
}

// Single-dot baseline on levels |1>,|2>,|5>,|6>; the escape into the
// conduction contact is attached to |1>.
inline GeneratorMatrix build_sqd_generator(const ModelParams& p) {
  p.validate();
  const ThermalOccupations n = thermal_occupations(p, ModelKind::sqd);

  detail::RateTable t;
  t.thermal(1, 2, p.gamma1, n.n1);
  t.thermal(1, 5, p.gamma_c, n.nc);
  t.thermal(6, 2, p.gamma_v, n.nv);
  t.add(5, 6, p.Gamma);

  GeneratorMatrix g;
  g.kind = ModelKind::sqd;
  for (int i : {slot::rho11, slot::rho22, slot::rho55, slot::rho66}) {
    g.active.set(static_cast<std::size_t>(i));
  }
  detail::write_populations(g.matrix, t);
  return g;
}

inline GeneratorMatrix build_generator(const ModelParams& p, ModelKind kind) {
  return kind == ModelKind::qdm ? build_qdm_generator(p) : build_sqd_generator(p);
}

}  // namespace qdm
