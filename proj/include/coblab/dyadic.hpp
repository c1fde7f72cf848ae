#pragma once

// The functional equation f(t) = g(t) - g(b t) for trigonometric polynomials,
// solved exactly in Fourier-coefficient space.
//
// The Koopman operator Tg(t) = g(bt) sends mode n to b n, so the equation
// decouples along the chains {m b^k : k >= 0} with m not divisible by b:
//   g^(m b^k) = sum_{i <= k} f^(m b^i).
// A chain admits a square-summable g iff its full coefficient sum vanishes.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coblab/core.hpp"
#include "coblab/operators.hpp"

namespace coblab {

/// Zero-mean trigonometric polynomial sum_n a_n e^{2 pi i n t}.
class FourierSeries {
 public:
  explicit FourierSeries(int base = 2) : coeffs_(Space::fourier(base)) {}
  /// Throws if mode 0 is present, or if `hermitian` and a_{-n} != conj(a_n).
  FourierSeries(const std::map<std::int64_t, cplx>& modes, int base = 2, bool hermitian = false);
  explicit FourierSeries(CoeffVector coeffs, bool hermitian = false);

  const CoeffVector& coeffs() const { return coeffs_; }
  int base() const { return coeffs_.space().base(); }
  bool hermitian() const { return hermitian_; }
  cplx at(std::int64_t mode) const;

 private:
  void check_hermitian() const;

  CoeffVector coeffs_;
  bool hermitian_ = false;
};

OperatorSpec koopman(const FourierSeries& f);

/// Largest k with base^k dividing n.
std::uint32_t val2(std::int64_t n, int base = 2);

struct Obstruction {
  std::int64_t root = 0;  // m, not divisible by the base (sign included)
  cplx terminal_sum;       // sum_i f^(m b^i)
};

struct ChainVerdict {
  bool solvable = false;
  std::optional<FourierSeries> g;
  std::vector<Obstruction> obstructions;
  /// ||(g - Tg) - f|| in coefficient space when solvable.
  double substitution_residual = 0.0;
};

ChainVerdict chain_solve(const FourierSeries& f, double zero_eps = kZeroEps);

/// sum_n val(n)^{4 + epsilon} |f^(n)|^2 over the support.
double valuation_condition(const FourierSeries& f, double epsilon);

struct BlockEnergyProfile {
  /// (i, sum_k |f^((2k+1) b^i)|^2) for i = 0 .. i_max.
  std::vector<std::pair<std::uint32_t, double>> levels;
  /// energy ~ 2^{-alpha i}, from a log2 fit over the nonzero levels.
  std::optional<double> alpha;
  std::optional<double> fit_residual;
};

BlockEnergyProfile block_energy_profile(const FourierSeries& f, std::uint32_t i_max);

/// (1/n) int_0^1 |sum_{i=0}^n f(b^i t)|^2 dt via Parseval.
double ergodic_integral(const FourierSeries& f, std::size_t n);

/// f(j/m) for j = 0 .. m-1.
std::vector<cplx> synthesize_samples(const FourierSeries& f, std::size_t m);

}  // namespace coblab
