#pragma once

// Algorithmic Wold decomposition of a vector under an isometry.
//
// With K = H (-) TH the wandering subspace, the projection onto T^j K is
// P_j = T^j (I - TT*) T*^j, and the remainder after J levels is
// R_J = T^{J+1} T*^{J+1} x. Everything is computed from apply/apply_adjoint,
// never from a basis of K.

#include <cmath>
#include <cstddef>
#include <vector>

#include "coblab/operators.hpp"

namespace coblab {

inline constexpr std::size_t kDefaultCutoff = 512;

template <class Vec>
struct WoldSplit {
  std::vector<Vec> components;  // x_0 .. x_J
  Vec residual;                 // R_J
  std::size_t J = 0;
  bool exact = false;
};

/// (I - TT*) v: the component of v in the wandering subspace K.
template <class Op, class Vec>
  requires IsometricSetting<Op, Vec>
Vec wandering_project(const Op& op, const Vec& v) {
  assert_isometric(op);
  return combine(1.0, v, -1.0, apply(op, apply_adjoint(op, v)));
}

/// x_j = P_j x.
template <class Op, class Vec>
  requires IsometricSetting<Op, Vec>
Vec wold_component(const Op& op, const Vec& x, std::size_t j) {
  assert_isometric(op);
  Vec v = x;
  for (std::size_t i = 0; i < j && !v.empty(); ++i) v = apply_adjoint(op, v);
  return apply_power(op, wandering_project(op, v), j);
}

namespace detail {

// Orbit terms T*^j x for j = 0 .. J + 1 together with J and exactness.
template <class Vec>
struct OrbitWindow {
  std::vector<Vec> terms;
  std::size_t J = 0;
  bool exact = false;
  bool unitary_tail = false;
};

template <class Op, class Vec>
OrbitWindow<Vec> orbit_window(const Op& op, const Vec& x, std::size_t cutoff) {
  auto orbit = adjoint_orbit(op, x, cutoff + 1);
  OrbitWindow<Vec> w;
  w.exact = orbit.exact;
  w.unitary_tail = orbit.unitary_tail;
  const std::size_t last = orbit.terms.size() - 1;
  w.terms = std::move(orbit.terms);
  // J is the last index with nonzero T*^J x; at least 0.
  w.J = last == 0 ? 0 : last - 1;
  if (w.terms.size() < w.J + 2) w.terms.push_back(apply_adjoint(op, w.terms.back()));
  return w;
}

// Wandering seeds w_j = (I - TT*) T*^j x, so that x_j = T^j w_j.
template <class Op, class Vec>
std::vector<Vec> wandering_seeds(const Op& op, const OrbitWindow<Vec>& w) {
  std::vector<Vec> seeds;
  seeds.reserve(w.J + 1);
  for (std::size_t j = 0; j <= w.J; ++j) {
    seeds.push_back(combine(1.0, w.terms[j], -1.0, apply(op, w.terms[j + 1])));
  }
  return seeds;
}

}  // namespace detail

/// Components x_0..x_J and residual R_J. J is where the adjoint orbit ends
/// (exact) or the cutoff (exact = false).
template <class Op, class Vec>
  requires IsometricSetting<Op, Vec>
WoldSplit<Vec> wold_split(const Op& op, const Vec& x, std::size_t cutoff = kDefaultCutoff) {
  assert_isometric(op);
  auto w = detail::orbit_window(op, x, cutoff);
  auto seeds = detail::wandering_seeds(op, w);
  WoldSplit<Vec> split{{}, Vec(x.space()), w.J, w.exact};
  split.components.reserve(seeds.size());
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    split.components.push_back(apply_power(op, std::move(seeds[j]), j));
  }
  split.residual = apply_power(op, w.terms[w.J + 1], w.J + 1);
  return split;
}

struct DecayFit {
  double beta = 0.0;          // ||x_j|| ~ 2^{-beta j}
  double fit_residual = 0.0;  // RMS of log2 residuals
  std::size_t points = 0;
};

/// Least-squares slope of log2 ||x_j|| against j over the nonzero entries.
DecayFit fit_log2_decay(const std::vector<double>& norms);

/// Decay rate of the Wold components; needs an exact split with at least
/// three nonzero components.
template <class Op, class Vec>
  requires IsometricSetting<Op, Vec>
DecayFit component_decay(const Op& op, const Vec& x, std::size_t cutoff = kDefaultCutoff) {
  const auto split = wold_split(op, x, cutoff);
  if (!split.exact) throw Error("component decay needs an exactly terminating adjoint orbit");
  std::vector<double> norms;
  norms.reserve(split.components.size());
  for (const auto& c : split.components) norms.push_back(norm(c));
  return fit_log2_decay(norms);
}

}  // namespace coblab
