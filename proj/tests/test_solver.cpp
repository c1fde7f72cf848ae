#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coblab/solver.hpp"
#include "support.hpp"

using namespace coblab;
using testing_support::Rng;

namespace {

Index sh(std::uint64_t level) { return ShiftIndex{level, 0}; }

CoeffVector shift_e(std::uint64_t level) { return CoeffVector(Space::shift(), {{sh(level), 1.0}}); }
CoeffVector mode_e(std::int64_t mode) {
  return CoeffVector(Space::fourier(2), {{FourierIndex::from_mode(mode, 2), 1.0}});
}

const OperatorSpec kShift{UnilateralShift{1}};
const OperatorSpec kDoubling{DoublingKoopman{2}};

// Direct evaluation of ||sum_{k=0}^n T^k x||^2 / n.
double cesaro(const OperatorSpec& op, const CoeffVector& x, std::size_t n) {
  CoeffVector sum = x;
  CoeffVector term = x;
  for (std::size_t k = 1; k <= n; ++k) {
    term = apply(op, term);
    sum = sum + term;
  }
  return norm_sq(sum) / static_cast<double>(n);
}

}  // namespace

TEST_CASE("summability examples") {
  const auto s = summability(kShift, shift_e(2));
  CHECK(s.value == 3.0);
  CHECK(s.exact);
  const auto d = summability(kDoubling, mode_e(3));
  CHECK(d.value == 0.0);
  CHECK(d.exact);
  const auto z = summability(kShift, CoeffVector(Space::shift()));
  CHECK(z.value == 0.0);
  CHECK(z.exact);
  CHECK_FALSE(summability(kShift, shift_e(40), 5).exact);
}

TEST_CASE("ergodic_limit examples") {
  CHECK(ergodic_limit(kShift, shift_e(0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(ergodic_limit(kShift, shift_e(0) - shift_e(1))) <= 1e-15);
  CHECK(ergodic_limit(kDoubling, CoeffVector(Space::fourier(2))) == 0.0);
  CHECK_THROWS_WITH(ergodic_limit(kShift, shift_e(40), 5), doctest::Contains("limit not exactly computable"));
}

TEST_CASE("growth_profile examples") {
  const auto a = growth_profile(kShift, shift_e(0), {100});
  CHECK(a.at(0).first == 100);
  CHECK(std::abs(a.at(0).second - 101.0 / 100.0) <= 1e-14);
  const auto b = growth_profile(kShift, shift_e(0) - shift_e(1), {100});
  CHECK(std::abs(b.at(0).second - 2.0 / 100.0) <= 1e-15);
  for (const auto& [n, v] : growth_profile(kShift, CoeffVector(Space::shift()), {1, 5, 9})) CHECK(v == 0.0);
  CHECK_THROWS(growth_profile(kShift, shift_e(0), {5, 5}));
  CHECK_THROWS(growth_profile(kShift, shift_e(0), {0}));
}

TEST_CASE("growth_profile matches direct summation") {
  Rng rng(41);
  const auto x = testing_support::random_shift_vector(rng, 1, 6, 5);
  const auto profile = growth_profile(kShift, x, {1, 2, 7, 30});
  for (const auto& [n, v] : profile) CHECK(std::abs(v - cesaro(kShift, x, n)) <= 1e-12 * std::max(1.0, v));
}

TEST_CASE("solve_isometry examples") {
  const auto a = solve_isometry(kShift, shift_e(0) - shift_e(1));
  CHECK(a.verdict == Verdict::solved);
  REQUIRE(a.solution);
  CHECK(norm(*a.solution - shift_e(0)) <= 1e-14);
  CHECK(a.residual <= 1e-12);

  const auto b = solve_isometry(kShift, shift_e(0));
  CHECK(b.verdict == Verdict::not_coboundary);
  REQUIRE(b.growth_constant);
  CHECK(*b.growth_constant == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*b.growth_constant == doctest::Approx(ergodic_limit(kShift, shift_e(0))));
  CHECK_FALSE(b.solution);

  const auto c = solve_isometry(kDoubling, mode_e(1) - mode_e(2));
  CHECK(c.verdict == Verdict::solved);
  REQUIRE(c.solution);
  CHECK(norm(*c.solution - mode_e(1)) <= 1e-14);
}

TEST_CASE("solve_isometry refuses non-isometries") {
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = 0.5;
  const OperatorSpec T(MatrixContraction{m});
  CHECK_THROWS_WITH(solve_isometry(T, CoeffVector(Space::dense(1), {{DenseIndex{0}, 1.0}})),
                    doctest::Contains("contraction solver"));
}

TEST_CASE("solve_isometry is inconclusive on truncated orbits") {
  SolveOptions opts;
  opts.cutoff = 8;
  const auto r = solve_isometry(kShift, shift_e(20) - shift_e(21), opts);
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK_FALSE(r.diagnostics.summab_exact);
  CHECK_FALSE(r.diagnostics.notes.empty());
}

TEST_CASE("solve_isometry is inconclusive on a unitary-part component") {
  const auto op = direct_sum({kShift, OperatorSpec(DiagonalUnitary{{-1.0}})});
  const CoeffVector x(op.space(), {{sh(0).with_part(0), 1.0}, {Index(DenseIndex{0}, 1), 2.0}});
  const auto r = solve_isometry(op, x);
  CHECK(r.verdict == Verdict::inconclusive);
  CHECK(r.diagnostics.summab_divergent);
  // x restricted to the unitary block is (I - T)(e/2) there, so no negative is claimed
  const CoeffVector y(op.space(), {{Index(DenseIndex{0}, 1), 1.0}});
  CHECK(verify_coboundary(op, CoeffVector(op.space(), {{Index(DenseIndex{0}, 1), 2.0}}), y) <= 1e-15);
}

TEST_CASE("verify_coboundary examples") {
  CHECK(verify_coboundary(kShift, shift_e(0) - shift_e(1), shift_e(0)) == 0.0);
  CHECK(verify_coboundary(kShift, CoeffVector(Space::shift()), CoeffVector(Space::shift())) == 0.0);
  CHECK(verify_coboundary(kShift, shift_e(0), shift_e(0)) == doctest::Approx(1.0));
}

TEST_CASE("browder_bound examples") {
  const auto a = browder_bound(kShift, shift_e(0) - shift_e(1), 64);
  CHECK(std::abs(a.sup - std::sqrt(2.0)) <= 1e-14);
  CHECK(a.bounded);
  const auto b = browder_bound(kShift, shift_e(0), 64);
  CHECK(std::abs(b.sup - 8.0) <= 1e-14);
  CHECK_FALSE(b.bounded);
  const auto c = browder_bound(kShift, CoeffVector(Space::shift()), 16);
  CHECK(c.sup == 0.0);
  CHECK(c.bounded);
  CHECK_THROWS(browder_bound(kShift, shift_e(0), 0));
}

TEST_CASE("partial Wold sums converge to the recursion level norm") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = testing_support::random_shift_vector(rng, 1, 6, 6);
    const auto split = wold_split(kShift, u);
    REQUIRE(split.exact);
    const std::size_t r = static_cast<std::size_t>(testing_support::uniform_int(rng, 0, static_cast<int>(split.J)));
    CoeffVector ur(u.space());
    CoeffVector yr(u.space());
    for (std::size_t j = 0; j <= r; ++j) {
      ur.add_scaled(1.0, split.components[j]);
      yr.add_scaled(1.0, apply_power(kShift, split.components[r - j], j));
    }
    const double limit = norm_sq(yr);
    CHECK(std::abs(ergodic_limit(kShift, ur) - limit) <= 1e-12 * std::max(1.0, limit));
    // |(1/n)||S u||^2 - limit| <= (||u||^2 + 2||u|| sum_k (k-1)||T*^k u||) / n
    const auto orbit = adjoint_orbit(kShift, ur, 512);
    double weighted = 0.0;
    for (std::size_t k = 1; k < orbit.terms.size(); ++k) weighted += static_cast<double>(k - 1) * norm(orbit.terms[k]);
    const std::size_t n = 10000;
    const double measured = growth_profile(kShift, ur, {n}).at(0).second;
    const double bound = (norm_sq(ur) + 2.0 * norm(ur) * weighted) / static_cast<double>(n);
    CHECK(std::abs(measured - limit) <= bound * (1.0 + 1e-9) + 1e-12);
  }
}

TEST_CASE("growth constant equals the ergodic limit") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const bool doubling = trial % 2 == 0;
    const OperatorSpec& op = doubling ? kDoubling : kShift;
    const auto x = doubling ? testing_support::random_fourier_vector(rng, 2, 32, 6)
                            : testing_support::random_shift_vector(rng, 1, 10, 6);
    const auto r = solve_isometry(op, x);
    REQUIRE(r.verdict != Verdict::inconclusive);
    const double limit = ergodic_limit(op, x);
    CHECK(limit >= -1e-9);
    if (r.verdict == Verdict::not_coboundary) {
      CHECK(std::abs(*r.growth_constant - limit) <= 1e-8 * std::max(1.0, limit));
    } else {
      CHECK(std::abs(limit) <= 1e-9);
    }
  }
}

TEST_CASE("solved cases have bounded ergodic sums and vanishing limit") {
  Rng rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    const bool doubling = trial % 2 == 0;
    const OperatorSpec& op = doubling ? kDoubling : kShift;
    const auto y = doubling ? testing_support::random_fourier_vector(rng, 2, 32, 6)
                            : testing_support::random_shift_vector(rng, 1, 10, 6);
    const auto x = y - apply(op, y);
    const auto r = solve_isometry(op, x);
    REQUIRE(r.verdict == Verdict::solved);
    CHECK(std::abs(ergodic_limit(op, x)) <= 1e-9);
    const double bound = norm(x) + 2 * norm(y);
    for (const auto& [n, v] : growth_profile(op, x, {1, 10, 100, 1000})) {
      CHECK(v <= bound * bound / static_cast<double>(n) + 1e-12);
    }
  }
}

TEST_CASE("verdict Solved exactly when the ergodic limit vanishes") {
  Rng rng(45);
  const OperatorSpec op(UnilateralShift{2});
  for (int trial = 0; trial < 100; ++trial) {
    CoeffVector x = testing_support::random_shift_vector(rng, 2, 8, 6);
    if (trial % 2 == 0) x = x - apply(op, x);
    const auto r = solve_isometry(op, x);
    const bool zero_limit = std::abs(ergodic_limit(op, x)) <= 1e-9;
    CHECK((r.verdict == Verdict::solved) == zero_limit);
  }
}
