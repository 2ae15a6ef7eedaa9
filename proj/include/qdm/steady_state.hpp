#pragma once

// Stationary solution of the master equation and a time-integration oracle.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "qdm/errors.hpp"
#include "qdm/generator.hpp"

namespace qdm {

inline constexpr double kDegeneracyThreshold = 1e-12;  // relative to max |G_ij|
inline constexpr double kMaxConditionEstimate = 1e15;
inline constexpr double kPopulationTolerance = 1e-10;

struct SteadyState {
  StateVector x = StateVector::Zero();
  double residual = 0.0;            // max |G x|
  double condition_estimate = 0.0;  // pivot ratio of the constrained system
  ModelKind kind = ModelKind::qdm;

  // Population of level 1..6, with round-off negatives clamped to zero.
  double population(int level) const { return std::max(0.0, x(level - 1)); }
  std::complex<double> rho13() const { return {x(slot::re13), x(slot::im13)}; }
  std::complex<double> rho24() const { return {x(slot::re24), x(slot::im24)}; }
  double trace() const { return x.head<kPopulations>().sum(); }
};

inline double residual(const GeneratorMatrix& g, const StateVector& x) {
  return (g.matrix * x).cwiseAbs().maxCoeff();
}

namespace detail {

inline std::vector<int> active_indices(const GeneratorMatrix& g) {
  std::vector<int> idx;
  for (int i = 0; i < kStateSize; ++i) {
    if (g.active[static_cast<std::size_t>(i)]) idx.push_back(i);
  }
  return idx;
}

inline std::string slot_name(int i) {
  static const char* names[kStateSize] = {"1",     "2",     "3",     "4",     "5",     "6",
                                          "Re13",  "Im13",  "Re24",  "Im24",  "spare0", "spare1"};
  return names[i];
}

// Connected components of the active slots, treating any nonzero coupling
// in either direction as an edge.
inline std::string describe_blocks(const GeneratorMatrix& g, const std::vector<int>& idx) {
  const std::size_t n = idx.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (g.matrix(idx[a], idx[b]) != 0.0 || g.matrix(idx[b], idx[a]) != 0.0) {
        parent[find(a)] = find(b);
      }
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<std::size_t> roots;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t r = find(a);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      blocks.push_back({idx[a]});
    } else {
      blocks[static_cast<std::size_t>(it - roots.begin())].push_back(idx[a]);
    }
  }
  std::ostringstream os;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (k) os << " | ";
    os << '{';
    for (std::size_t m = 0; m < blocks[k].size(); ++m) {
      if (m) os << ',';
      os << slot_name(blocks[k][m]);
    }
    os << '}';
  }
  return os.str();
}

}  // namespace detail

// Solves G x = 0 with the rho66 equation replaced by sum(rho_ii) = 1. If rho66
// is not part of the active set the last active population row is used.
inline SteadyState solve_steady(const GeneratorMatrix& g) {
  const std::vector<int> idx = detail::active_indices(g);
  const int n = static_cast<int>(idx.size());

  int constraint_row = -1;
  for (int k = 0; k < n; ++k) {
    if (idx[static_cast<std::size_t>(k)] < kPopulations) constraint_row = k;
  }
  if (constraint_row < 0) {
    throw DegenerateSteadyStateError("generator has no active population");
  }

  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = g.matrix(idx[r], idx[c]);
  }
  const double scale = a.cwiseAbs().maxCoeff();

  if (n > 1) {
    if (scale == 0.0) {
      throw DegenerateSteadyStateError("zero generator: every state is stationary; blocks " +
                                       detail::describe_blocks(g, idx));
    }
    // Full pivoting orders |U_kk| decreasingly; the second-to-last pivot
    // estimates the second-smallest singular value.
    Eigen::FullPivLU<Eigen::MatrixXd> probe(a);
    const double second_smallest = std::abs(probe.matrixLU()(n - 2, n - 2));
    if (second_smallest < kDegeneracyThreshold * scale) {
      throw DegenerateSteadyStateError(
          "multiple steady states (second-smallest pivot " + std::to_string(second_smallest) +
          "); disconnected blocks " + detail::describe_blocks(g, idx));
    }
  }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < n; ++c) {
    a(constraint_row, c) = idx[static_cast<std::size_t>(c)] < kPopulations ? 1.0 : 0.0;
  }
  rhs(constraint_row) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  const double pmax = std::abs(lu.matrixLU()(0, 0));
  const double pmin = std::abs(lu.matrixLU()(n - 1, n - 1));
  const double cond = pmin > 0.0 ? pmax / pmin : std::numeric_limits<double>::infinity();
  if (!(cond < kMaxConditionEstimate)) {
    throw NumericalError("steady-state solve is singular or ill-conditioned (pivot ratio " +
                             std::to_string(cond) + ")",
                         cond);
  }
  const Eigen::VectorXd y = lu.solve(rhs);

  SteadyState s;
  s.kind = g.kind;
  s.condition_estimate = cond;
  for (int k = 0; k < n; ++k) s.x(idx[static_cast<std::size_t>(k)]) = y(k);
  s.x /= s.x.head<kPopulations>().sum();

  // Negative populations within the round-off bound of this solve are zeroed;
  // anything beyond it is a genuine failure.
  const double noise = std::max(kPopulationTolerance, 64.0 * std::numeric_limits<double>::epsilon() * cond);
  for (int i = 0; i < kPopulations; ++i) {
    if (s.x(i) < 0.0 && s.x(i) >= -noise) s.x(i) = 0.0;
    if (s.x(i) < -noise) {
      throw NumericalError("steady state has negative population rho" + std::to_string(i + 1) +
                               std::to_string(i + 1) + " = " + detail::fmt_g(s.x(i)),
                           cond);
    }
  }
  s.residual = residual(g, s.x);
  return s;
}

// Fixed-step classical RK4 for dx/dt = G x. For a linear autonomous system
// one RK4 step is the matrix polynomial
//   M = I + hG + (hG)^2/2 + (hG)^3/6 + (hG)^4/24,
// so N steps are applied as M^N by binary powering in extended precision.
inline StateVector evolve(const GeneratorMatrix& g, const StateVector& x0, double t_final,
                          double dt) {
  if (!(t_final > 0.0) || !(dt > 0.0)) {
    throw DomainError("evolve requires t_final > 0 and dt > 0");
  }
  const double trace0 = x0.head<kPopulations>().sum();
  if (std::abs(trace0 - 1.0) > 1e-9) {
    throw DomainError("evolve requires a normalized initial state (trace " +
                      std::to_string(trace0) + ")");
  }
  const double largest_rate = g.max_abs_entry();
  if (dt * largest_rate > 0.1) {
    throw DomainError("step too large: dt * largest rate = " +
                      std::to_string(dt * largest_rate) + " exceeds 0.1");
  }

  using LMatrix = Eigen::Matrix<long double, kStateSize, kStateSize>;
  using LVector = Eigen::Matrix<long double, kStateSize, 1>;

  unsigned long long steps = static_cast<unsigned long long>(std::ceil(t_final / dt));
  const long double h = static_cast<long double>(t_final) / static_cast<long double>(steps);

  const LMatrix hg = h * g.matrix.cast<long double>();
  const LMatrix id = LMatrix::Identity();
  LMatrix power = id + hg * (id + hg * (id / 2 + hg * (id / 6 + hg / 24)));

  LVector x = x0.cast<long double>();
  while (steps) {
    if (steps & 1ULL) x = power * x;
    steps >>= 1ULL;
    if (steps) power = power * power;
  }

  StateVector out = x.cast<double>();
  const double trace1 = out.head<kPopulations>().sum();
  if (std::abs(trace1 - trace0) > 1e-9) {
    throw NumericalError("evolve lost trace conservation: " + std::to_string(trace1));
  }
  return out;
}

}  // namespace qdm
