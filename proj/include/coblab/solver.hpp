#pragma once

// Constructive solver for (I - T)y = x with T an isometry, and the
// isometry-side condition checks: summability of k ||T*^k x||, the exact
// Cesaro limit of ||sum T^k x||^2 / n, growth profiles and the Browder
// boundedness diagnostic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coblab/operators.hpp"
#include "coblab/wold.hpp"

namespace coblab {

enum class Verdict { solved, not_coboundary, inconclusive };

const char* to_string(Verdict v);

struct ConditionReport {
  double summab_value = 0.0;
  bool summab_exact = false;
  bool summab_divergent = false;
  std::optional<double> ergodic_limit;
  double browder_sup = 0.0;
  bool browder_bounded = false;
  std::size_t browder_bounded_up_to = 0;
  std::vector<std::string> notes;
};

template <class Vec>
struct SolveResult {
  Verdict verdict = Verdict::inconclusive;
  std::optional<Vec> solution;
  double residual = 0.0;
  std::optional<double> growth_constant;
  /// sum_{r <= J} ||y_r||^2 over the levels that were built.
  double partial_energy = 0.0;
  std::size_t levels = 0;
  ConditionReport diagnostics;
  // Filled by the contraction solver: ||Dy|| and | ||Ty|| - ||y|| |.
  std::optional<double> defect_norm;
  std::optional<double> isometry_gap;
};

struct SolveOptions {
  Tolerances tol;
  std::size_t cutoff = kDefaultCutoff;
  std::size_t browder_horizon = 256;
};

struct Summability {
  double value = 0.0;
  bool exact = false;
  /// The orbit settled on a nonzero unitary-part vector, so the series diverges.
  bool divergent = false;
};

/// sum_k k ||T*^k x|| over the adjoint orbit.
template <class Op, class Vec>
Summability summability(const Op& op, const Vec& x, std::size_t cutoff = kDefaultCutoff) {
  const auto orbit = adjoint_orbit(op, x, cutoff);
  Summability s;
  for (std::size_t k = 0; k < orbit.terms.size(); ++k) {
    s.value += static_cast<double>(k) * norm(orbit.terms[k]);
  }
  s.exact = orbit.exact;
  s.divergent = orbit.unitary_tail;
  return s;
}

/// lim (1/n) ||sum_{k=0}^n T^k x||^2 = ||x||^2 + 2 Re sum_{k>=1} <x, T^k x>,
/// exact when the adjoint orbit reaches zero (<x, T^k x> = <T*^k x, x>).
template <class Op, class Vec>
  requires IsometricSetting<Op, Vec>
double ergodic_limit(const Op& op, const Vec& x, std::size_t cutoff = kDefaultCutoff) {
  assert_isometric(op);
  const auto orbit = adjoint_orbit(op, x, cutoff);
  if (!orbit.exact || orbit.unitary_tail) {
    throw Error("limit not exactly computable: adjoint orbit does not terminate at zero");
  }
  double value = std::real(inner(x, x));
  for (std::size_t k = 1; k < orbit.terms.size(); ++k) {
    value += 2.0 * std::real(inner(orbit.terms[k], x));
  }
  return value;
}

/// (n, ||sum_{k=0}^n T^k x||^2 / n) for each requested n (n + 1 summands).
template <class Op, class Vec>
std::vector<std::pair<std::size_t, double>> growth_profile(const Op& op, const Vec& x,
                                                           const std::vector<std::size_t>& ns) {
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] == 0 || (i > 0 && ns[i] <= ns[i - 1])) {
      throw Error("growth profile needs strictly increasing positive n");
    }
  }
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(ns.size());
  Vec sum = x;
  Vec term = x;
  std::size_t k = 0;
  for (const auto n : ns) {
    while (k < n) {
      if (!term.empty()) term = apply(op, term);
      sum.add_scaled(1.0, term);
      ++k;
    }
    out.emplace_back(n, std::real(inner(sum, sum)) / static_cast<double>(n));
  }
  return out;
}

struct BrowderBound {
  double sup = 0.0;
  bool bounded = false;
  /// norms[n - 1] = ||S_n(T)x||, n = 1..N.
  std::vector<double> norms;
};

/// Running supremum of ||S_n(T)x|| (n summands) for n <= N. The bounded flag
/// is heuristic: the running supremum must not grow over the last quarter
/// by more than a relative trend_tol.
template <class Op, class Vec>
BrowderBound browder_bound(const Op& op, const Vec& x, std::size_t N, double trend_tol = 1e-6) {
  if (N == 0) throw Error("browder bound needs N >= 1");
  BrowderBound b;
  b.norms.reserve(N);
  Vec sum(x.space());
  Vec term = x;
  for (std::size_t n = 1; n <= N; ++n) {
    sum.add_scaled(1.0, term);
    b.norms.push_back(norm(sum));
    if (n < N && !term.empty()) term = apply(op, term);
  }
  const std::size_t head = std::max<std::size_t>(1, (3 * N) / 4);
  const double head_sup = *std::max_element(b.norms.begin(), b.norms.begin() + head);
  b.sup = *std::max_element(b.norms.begin(), b.norms.end());
  b.bounded = b.sup <= head_sup * (1.0 + trend_tol) + kZeroEps;
  return b;
}

/// ||x - (y - Ty)||.
template <class Op, class Vec>
double verify_coboundary(const Op& op, const Vec& x, const Vec& y) {
  return norm(combine(1.0, x, -1.0, combine(1.0, y, -1.0, apply(op, y))));
}

/// Solves (I - T)y = x for an isometry T.
///
/// With x_r the Wold components, the solution must satisfy y_0 = x_0 and
/// y_r = x_r + T y_{r-1}. Writing x_r = T^r w_r with w_r the wandering seeds,
/// the recursion becomes y_r = T^r W_r with W_r = W_{r-1} + w_r, which avoids
/// re-applying T^r at every level. Once the adjoint orbit has terminated at
/// J, x_r = 0 for r > J and y_{J+m} = T^m y_J, so the y_r are square-summable
/// iff y_J = 0; ||y_J||^2 is then the Cesaro growth limit.
template <class Op, class Vec>
  requires IsometricSetting<Op, Vec>
SolveResult<Vec> solve_isometry(const Op& op, const Vec& x, const SolveOptions& opts = {}) {
  assert_isometric(op);
  opts.tol.validate();
  SolveResult<Vec> result;
  auto& diag = result.diagnostics;

  auto w = detail::orbit_window(op, x, opts.cutoff);
  for (std::size_t k = 0; k <= w.J; ++k) diag.summab_value += static_cast<double>(k) * norm(w.terms[k]);
  diag.summab_exact = w.exact;
  diag.summab_divergent = w.unitary_tail;

  const auto browder = browder_bound(op, x, std::max<std::size_t>(opts.browder_horizon, 1),
                                     opts.tol.trend_tol);
  diag.browder_sup = browder.sup;
  diag.browder_bounded = browder.bounded;
  diag.browder_bounded_up_to = browder.norms.size();

  const auto seeds = detail::wandering_seeds(op, w);
  std::vector<Vec> cumulative;
  cumulative.reserve(seeds.size());
  for (const auto& s : seeds) {
    if (cumulative.empty()) {
      cumulative.push_back(s);
    } else {
      cumulative.push_back(combine(1.0, cumulative.back(), 1.0, s, opts.tol.zero_eps));
    }
    const double n = norm(cumulative.back());
    result.partial_energy += n * n;
  }
  result.levels = w.J + 1;

  // y = sum_{r<=J} T^r W_r by Horner's rule.
  auto assemble = [&] {
    Vec y = cumulative.back();
    for (std::size_t r = cumulative.size() - 1; r-- > 0;) {
      y = combine(1.0, cumulative[r], 1.0, apply(op, y), opts.tol.zero_eps);
    }
    return y;
  };

  const double residual_part = norm(w.terms[w.J + 1]);  // ||R_J|| = ||T*^{J+1} x||
  if (!w.exact) {
    const Vec y = assemble();
    result.residual = verify_coboundary(op, x, y);
    diag.notes.push_back("adjoint orbit truncated at cutoff " + std::to_string(opts.cutoff) +
                         "; summability of k||T*^k x|| is not certified");
    return result;
  }

  if (w.unitary_tail && residual_part > opts.tol.residual_tol) {
    result.residual = norm(x);
    diag.notes.push_back("x has a component of norm " + std::to_string(residual_part) +
                         " in the unitary part of the Wold decomposition; k||T*^k x|| is not "
                         "summable and the shift-part construction does not apply");
    return result;
  }
  if (!w.unitary_tail) diag.ergodic_limit = ergodic_limit(op, x, opts.cutoff);

  const double tail = norm(cumulative.back());  // ||y_J||
  const Vec y = assemble();
  result.residual = verify_coboundary(op, x, y);
  if (tail <= opts.tol.residual_tol) {
    if (result.residual <= opts.tol.residual_tol) {
      result.verdict = Verdict::solved;
      result.solution = y;
    } else {
      diag.notes.push_back("construction terminated but the residual check failed");
    }
    return result;
  }
  result.verdict = Verdict::not_coboundary;
  result.growth_constant = tail * tail;
  diag.notes.push_back("y_J does not vanish: ||sum_{k<=n} T^k x||^2 / n tends to ||y_J||^2 > 0");
  return result;
}

}  // namespace coblab
