#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "coblab/dyadic.hpp"
#include "coblab/solver.hpp"
#include "support.hpp"

using namespace coblab;
using testing_support::Rng;

namespace {

FourierSeries random_series(Rng& rng, int base, int max_abs, int nnz) {
  return FourierSeries(testing_support::random_fourier_vector(rng, base, max_abs, nnz));
}

// f = g - Tg for a random g, so every chain sum cancels.
FourierSeries random_solvable(Rng& rng, int base, int max_abs, int nnz) {
  const auto g = testing_support::random_fourier_vector(rng, base, max_abs, nnz);
  const OperatorSpec T(DoublingKoopman{base});
  return FourierSeries(g - apply(T, g));
}

// sum_n a_n e^{2 pi i n t}, evaluated term by term.
cplx evaluate(const std::map<std::int64_t, cplx>& coeffs, double t) {
  cplx s = 0.0;
  for (const auto& [n, a] : coeffs) s += a * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(n) * t);
  return s;
}

std::map<std::int64_t, cplx> as_map(const FourierSeries& f) {
  std::map<std::int64_t, cplx> out;
  for (const auto& [idx, c] : f.coeffs().entries()) out[*std::get<FourierIndex>(idx.key).mode(f.base())] = c;
  return out;
}

}  // namespace

TEST_CASE("val2 examples") {
  CHECK(val2(12) == 2);
  CHECK(val2(7) == 0);
  CHECK(val2(-8) == 3);
  CHECK(val2(18, 3) == 2);
  CHECK_THROWS(val2(0));
}

TEST_CASE("FourierSeries invariants") {
  CHECK_THROWS_WITH(FourierSeries({{0, 1.0}}), doctest::Contains("mode 0"));
  CHECK_NOTHROW(FourierSeries({{1, cplx(1, 2)}, {-1, cplx(1, -2)}}, 2, true));
  CHECK_THROWS(FourierSeries({{1, cplx(1, 2)}, {-1, cplx(1, 2)}}, 2, true));
  CHECK_THROWS(FourierSeries({{3, 1.0}}, 2, true));
  const FourierSeries f({{5, 2.0}, {-10, cplx(0, 1)}}, 2);
  CHECK(f.at(5) == cplx(2.0));
  CHECK(f.at(-10) == cplx(0, 1));
  CHECK(f.at(7) == cplx(0.0));
}

TEST_CASE("chain_solve examples") {
  const auto a = chain_solve(FourierSeries({{1, 1.0}, {2, -1.0}}));
  CHECK(a.solvable);
  REQUIRE(a.g);
  CHECK(a.g->coeffs().size() == 1);
  CHECK(a.g->at(1) == cplx(1.0));
  CHECK(a.substitution_residual == 0.0);

  const auto b = chain_solve(FourierSeries({{2, 1.0}}));
  CHECK_FALSE(b.solvable);
  CHECK_FALSE(b.g);
  REQUIRE(b.obstructions.size() == 1);
  CHECK(b.obstructions[0].root == 1);
  CHECK(b.obstructions[0].terminal_sum == cplx(1.0));

  const auto c = chain_solve(FourierSeries(2));
  CHECK(c.solvable);
  REQUIRE(c.g);
  CHECK(c.g->coeffs().empty());
}

TEST_CASE("chain_solve handles negative chains and other bases") {
  // g = e_{-3} + 2 e_{-6} under base 2: f = e_{-3} + e_{-6} - 2 e_{-12}
  const auto v = chain_solve(FourierSeries({{-3, 1.0}, {-6, 1.0}, {-12, -2.0}}));
  CHECK(v.solvable);
  REQUIRE(v.g);
  CHECK(v.g->at(-3) == cplx(1.0));
  CHECK(v.g->at(-6) == cplx(2.0));
  const auto w = chain_solve(FourierSeries({{2, 1.0}, {6, -1.0}}, 3));
  CHECK(w.solvable);
  REQUIRE(w.g);
  CHECK(w.g->at(2) == cplx(1.0));
  const auto o = chain_solve(FourierSeries({{2, 1.0}, {-2, 1.0}, {4, -1.0}}, 2));
  CHECK_FALSE(o.solvable);
  CHECK(o.obstructions.size() == 1);
  CHECK(o.obstructions[0].root == -1);
}

TEST_CASE("chains agree with the isometric solver on the Koopman operator") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int base = trial % 3 == 0 ? 3 : 2;
    const auto f = trial % 2 == 0 ? random_solvable(rng, base, 50, 5) : random_series(rng, base, 50, 5);
    const auto chain = chain_solve(f);
    const auto iso = solve_isometry(koopman(f), f.coeffs());
    CHECK(chain.solvable == (iso.verdict == Verdict::solved));
    CHECK(chain.obstructions.empty() == chain.solvable);
    if (chain.solvable) {
      REQUIRE(chain.g);
      REQUIRE(iso.solution);
      CHECK(norm(chain.g->coeffs() - *iso.solution) <= 1e-10);
      const OperatorSpec T(DoublingKoopman{base});
      const auto& g = chain.g->coeffs();
      CHECK(norm((g - apply(T, g)) - f.coeffs()) <= 1e-12);
    }
  }
}

TEST_CASE("valuation_condition examples") {
  CHECK(valuation_condition(FourierSeries({{1, 1.0}}), 1.0) == 0.0);
  CHECK(valuation_condition(FourierSeries({{4, 1.0}}), 1.0) == doctest::Approx(32.0).epsilon(1e-15));
  CHECK(valuation_condition(FourierSeries(2), 0.5) == 0.0);
  CHECK_THROWS(valuation_condition(FourierSeries({{4, 1.0}}), 0.0));
}

TEST_CASE("block_energy_profile examples") {
  const auto a = block_energy_profile(FourierSeries({{2, 1.0}, {3, 1.0}}), 4);
  CHECK(a.levels.at(0).second == doctest::Approx(1.0));
  CHECK(a.levels.at(1).second == doctest::Approx(1.0));
  CHECK(a.levels.at(2).second == 0.0);

  const auto b = block_energy_profile(FourierSeries({{1, 1.0}}), 4);
  CHECK(b.levels.at(0).second == doctest::Approx(1.0));
  CHECK_FALSE(b.alpha);

  const auto c = block_energy_profile(FourierSeries({{1, 1.0}, {2, std::sqrt(0.5)}, {4, 0.5}}), 6);
  REQUIRE(c.alpha);
  CHECK(std::abs(*c.alpha - 1.0) <= 1e-9);
}

TEST_CASE("valuation sum with exponent five equals the weighted block energies") {
  Rng rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_series(rng, 2, 2000, 10);
    const auto profile = block_energy_profile(f, 12);
    double weighted = 0.0;
    for (const auto& [i, e] : profile.levels) weighted += std::pow(static_cast<double>(i), 5.0) * e;
    const double direct = valuation_condition(f, 1.0);
    CHECK(std::abs(weighted - direct) <= 1e-12 * std::max(1.0, direct));
  }
}

TEST_CASE("ergodic_integral examples") {
  CHECK(std::abs(ergodic_integral(FourierSeries({{1, 1.0}, {2, -1.0}}), 100) - 2.0 / 100.0) <= 1e-15);
  CHECK(std::abs(ergodic_integral(FourierSeries({{1, 1.0}}), 100) - 101.0 / 100.0) <= 1e-14);
  CHECK(ergodic_integral(FourierSeries(2), 10) == 0.0);
  CHECK_THROWS(ergodic_integral(FourierSeries({{1, 1.0}}), 0));
}

TEST_CASE("ergodic_integral matches uniform quadrature") {
  Rng rng(63);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_series(rng, 2, 8, 4);
    const auto coeffs = as_map(f);
    std::int64_t max_mode = 0;
    for (const auto& [n, a] : coeffs) max_mode = std::max<std::int64_t>(max_mode, std::llabs(n));
    for (std::size_t n = 1; n <= 6; ++n) {
      const std::size_t m = 2 * (std::size_t{1} << n) * static_cast<std::size_t>(max_mode) + 1;
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(m);
        cplx s = 0.0;
        for (std::size_t i = 0; i <= n; ++i) s += evaluate(coeffs, std::ldexp(t, static_cast<int>(i)));
        acc += std::norm(s);
      }
      const double quadrature = acc / static_cast<double>(m) / static_cast<double>(n);
      CHECK(std::abs(ergodic_integral(f, n) - quadrature) <= 1e-9 * std::max(1.0, quadrature));
    }
  }
}

TEST_CASE("ergodic_integral tends to the ergodic limit") {
  Rng rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_series(rng, 2, 16, 3);
    const double limit = ergodic_limit(koopman(f), f.coeffs());
    CHECK(std::abs(ergodic_integral(f, 10000) - limit) <= 1e-2);
  }
}

TEST_CASE("synthesize_samples examples") {
  const auto a = synthesize_samples(FourierSeries({{1, 1.0}}), 4);
  const std::vector<cplx> a_expected{1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(a[j] - a_expected[j]) <= 1e-15);
  for (const auto& v : synthesize_samples(FourierSeries(2), 5)) CHECK(v == cplx(0.0));
  const auto c = synthesize_samples(FourierSeries({{1, 1.0}, {-1, 1.0}}, 2, true), 4);
  const std::vector<cplx> c_expected{2.0, 0.0, -2.0, 0.0};
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(c[j] - c_expected[j]) <= 1e-15);
}

TEST_CASE("synthesized samples of g - g(2t) reproduce f") {
  Rng rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_solvable(rng, 2, 20, 4);
    const auto v = chain_solve(f);
    REQUIRE(v.g);
    const std::size_t m = 256;
    const auto gs = synthesize_samples(*v.g, m);
    const auto fs = synthesize_samples(f, m);
    for (std::size_t j = 0; j < m; ++j) CHECK(std::abs(gs[j] - gs[(2 * j) % m] - fs[j]) <= 1e-10);
  }
}

TEST_CASE("proof estimate bounds the summability series") {
  Rng rng(66);
  const double c = 2.0 * std::sqrt(std::numbers::pi * std::numbers::pi / 6.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_series(rng, 2, 4096, 8);
    const auto s = summability(koopman(f), f.coeffs());
    CHECK(s.exact);
    CHECK(s.value <= c * std::sqrt(valuation_condition(f, 1.0)) + 1e-10);
  }
}
