#pragma once

// Closed-form reference results: large-tunneling short-circuit currents,
// the molecule/single-dot current ratio, the driven two-level system and the
// current-coherence regression.

#include <cmath>
#include <complex>
#include <vector>

#include "qdm/errors.hpp"

namespace qdm {

// Short-circuit current of the molecule for Te -> infinity, in e*gamma.
inline double asymptotic_current_qdm(double n1, double n2, double nv) {
  return (n1 + n2) * (nv + 1.0) / (3.0 * nv + 2.0);
}

// Short-circuit current of the single dot, in e*gamma.
inline double asymptotic_current_sqd(double n1, double nv) {
  return n1 * (nv + 1.0) / (2.0 * nv + 1.0);
}

// Ratio of the two asymptotic currents for identical dots (n1 = n2).
inline double current_ratio_bound(double nv) { return (4.0 * nv + 2.0) / (3.0 * nv + 2.0); }

struct TlsParams {
  double W = 0.0;       // drive coupling
  double delta = 0.0;   // detuning
  double gamma0 = 1.0;  // population damping
  double gammap = 1.0;  // coherence damping

  void validate() const {
    if (!(gamma0 > 0.0) || !(gammap > 0.0)) {
      throw DomainError("two-level damping rates must be > 0");
    }
    if (!(W >= 0.0)) throw DomainError("two-level drive W must be >= 0");
  }
};

struct TlsSteady {
  double rho_ee = 0.0;
  std::complex<double> rho_eg;
  // rho_ee recomputed from |rho_eg|; equals rho_ee identically.
  double rho_ee_from_coherence = 0.0;
};

inline TlsSteady tls_steady(const TlsParams& p) {
  p.validate();
  const double d = p.delta / p.gammap;
  const double sat = p.W * p.W / (p.gamma0 * p.gammap);
  const double denom = 1.0 + d * d + sat;
  TlsSteady s;
  s.rho_ee = 0.5 * sat / denom;
  s.rho_eg = std::complex<double>(0.0, -p.W / (2.0 * p.gammap)) * std::complex<double>(1.0, d) /
             denom;
  s.rho_ee_from_coherence = (p.gammap / p.gamma0) * p.W /
                            std::sqrt(p.gammap * p.gammap + p.delta * p.delta) *
                            std::abs(s.rho_eg);
  return s;
}

// Drive strength beyond which the coherence decreases again.
inline double tls_saturation_threshold(double delta, double gamma0, double gammap) {
  if (!(gammap > 0.0) || !(gamma0 > 0.0)) {
    throw DomainError("two-level damping rates must be > 0");
  }
  return std::sqrt(gamma0 / gammap) * std::sqrt(delta * delta + gammap * gammap);
}

struct CoherenceSample {
  double Te = 0.0;
  double j_mpp = 0.0;
  double coh13 = 0.0;
};

struct LinearityFit {
  double slope = 0.0;
  double r_squared = 0.0;  // uncentered, for a line through the origin
  std::size_t used = 0;
  std::size_t excluded = 0;  // samples with zero coherence
};

// Least-squares fit y = slope * Te with y = j_mpp / coh13.
inline LinearityFit coherence_linearity_check(const std::vector<CoherenceSample>& data) {
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  LinearityFit f;
  std::vector<std::pair<double, double>> xy;
  for (const auto& s : data) {
    if (!(s.coh13 > 0.0)) {
      ++f.excluded;
      continue;
    }
    xy.emplace_back(s.Te, s.j_mpp / s.coh13);
  }
  f.used = xy.size();
  if (f.used < 5) {
    throw DomainError("linearity check needs at least 5 samples with nonzero coherence");
  }
  for (const auto& [x, y] : xy) {
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  f.slope = sxy / sxx;
  double ss_res = 0.0;
  for (const auto& [x, y] : xy) ss_res += (y - f.slope * x) * (y - f.slope * x);
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace qdm
