#include "coblab/dilation.hpp"

#include <algorithm>
#include <cmath>

#include "coblab/numeric.hpp"

namespace coblab {

// ---------------------------------------------------------------------------
// SeqVector

SeqVector::SeqVector(Space base, std::vector<CoeffVector> slots)
    : space_(std::move(base)), slots_(std::move(slots)) {
  for (const auto& s : slots_) require_same_space(space_, s.space(), "SeqVector");
  trim();
}

SeqVector SeqVector::lift(const CoeffVector& x) { return SeqVector(x.space(), {x}); }

CoeffVector SeqVector::slot(std::size_t i) const {
  return i < slots_.size() ? slots_[i] : CoeffVector(space_);
}

void SeqVector::trim() {
  while (!slots_.empty() && slots_.back().empty()) slots_.pop_back();
}

void SeqVector::add_scaled(cplx alpha, const SeqVector& v, double eps) {
  require_same_space(space_, v.space_, "add_scaled");
  if (slots_.size() < v.slots_.size()) slots_.resize(v.slots_.size(), CoeffVector(space_));
  for (std::size_t i = 0; i < v.slots_.size(); ++i) slots_[i].add_scaled(alpha, v.slots_[i], eps);
  trim();
}

cplx inner(const SeqVector& u, const SeqVector& v) {
  require_same_space(u.space(), v.space(), "inner");
  cplx acc{};
  const std::size_t n = std::min(u.slots().size(), v.slots().size());
  for (std::size_t i = 0; i < n; ++i) acc += inner(u.slots()[i], v.slots()[i]);
  return acc;
}

double norm(const SeqVector& u) {
  double acc = 0.0;
  for (const auto& s : u.slots()) acc += norm_sq(s);
  return std::sqrt(acc);
}

SeqVector combine(cplx alpha, const SeqVector& u, cplx beta, const SeqVector& v, double eps) {
  require_same_space(u.space(), v.space(), "combine");
  const std::size_t n = std::max(u.slots().size(), v.slots().size());
  std::vector<CoeffVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(combine(alpha, u.slot(i), beta, v.slot(i), eps));
  return SeqVector(u.space(), std::move(out));
}

// ---------------------------------------------------------------------------
// Defect operator

CoeffVector defect_apply(const OperatorSpec& T, const CoeffVector& v) {
  if (!T.is_contraction()) throw Error("defect operator needs a contraction");
  require_same_space(T.space(), v.space(), "defect_apply");
  CoeffVector::Entries acc;
  for (const auto& [idx, c] : v.entries()) {
    const auto& leaf = T.leaf(idx.part);
    if (const auto* w = std::get_if<WeightedShift>(&leaf.kind())) {
      const auto k = std::get<ShiftIndex>(idx.key).level;
      const double d = std::sqrt(std::max(0.0, 1.0 - std::norm(w->weight(k))));
      if (d != 0.0) acc[idx] += d * c;
    } else if (const auto* m = std::get_if<MatrixContraction>(&leaf.kind())) {
      const auto j = std::get<DenseIndex>(idx.key).coordinate;
      const auto& D = m->defect();
      for (Eigen::Index i = 0; i < D.rows(); ++i) {
        if (D(i, j) != cplx{}) acc[Index(DenseIndex{static_cast<std::uint32_t>(i)}, idx.part)] += D(i, j) * c;
      }
    }
    // Shift, doubling and diagonal unitary blocks are isometric: D = 0.
  }
  return CoeffVector(v.space(), std::move(acc));
}

// ---------------------------------------------------------------------------
// Dilation

DilationOperator::DilationOperator(OperatorSpec base) : base_(std::move(base)) {
  if (!base_.is_contraction()) throw Error("dilation needs a contraction");
}

SeqVector apply(const DilationOperator& R, const SeqVector& v) {
  require_same_space(R.base().space(), v.space(), "apply");
  if (v.empty()) return v;
  const auto& s = v.slots();
  std::vector<CoeffVector> out;
  out.reserve(s.size() + 1);
  out.push_back(apply(R.base(), s[0]));
  out.push_back(defect_apply(R.base(), s[0]));
  out.insert(out.end(), s.begin() + 1, s.end());
  return SeqVector(v.space(), std::move(out));
}

SeqVector apply_adjoint(const DilationOperator& R, const SeqVector& v) {
  require_same_space(R.base().space(), v.space(), "apply_adjoint");
  if (v.empty()) return v;
  const auto& s = v.slots();
  std::vector<CoeffVector> out;
  out.reserve(s.size());
  CoeffVector head = apply_adjoint(R.base(), s[0]);
  if (s.size() > 1) head.add_scaled(1.0, defect_apply(R.base(), s[1]));
  out.push_back(std::move(head));
  if (s.size() > 2) out.insert(out.end(), s.begin() + 2, s.end());
  return SeqVector(v.space(), std::move(out));
}

SeqVector dilation_apply(const DilationOperator& R, const SeqVector& v, Direction direction) {
  return direction == Direction::forward ? apply(R, v) : apply_adjoint(R, v);
}

bool unitary_supported(const DilationOperator& R, const SeqVector& v) {
  // D vanishes on the unitary blocks of T, so (u, 0, 0, ...) with u there
  // stays in the unitary part of R.
  if (v.empty()) return true;
  return v.slots().size() == 1 && unitary_supported(R.base(), v.slots()[0]);
}

// ---------------------------------------------------------------------------
// Conditions and solver

ContractionConditions contraction_conditions(const OperatorSpec& T, const CoeffVector& x,
                                             std::size_t N, const Tolerances& tol) {
  if (N == 0) throw Error("contraction conditions need N >= 1");
  if (!T.is_contraction()) throw Error("operator norm exceeds 1");
  require_same_space(T.space(), x.space(), "contraction_conditions");
  ContractionConditions c;
  c.horizon = N;
  c.summability = summability(T, x);

  CoeffVector sum(x.space());
  CoeffVector term = x;
  double partial = 0.0;
  double kron = 0.0;
  for (std::size_t k = 1; k <= N; ++k) {
    sum.add_scaled(1.0, term, tol.zero_eps);
    if (k < N && !term.empty()) term = apply(T, term);
    const double s2 = norm_sq(sum);
    const double ts2 = norm_sq(apply(T, sum));
    const double d = s2 - ts2;
    partial += d;
    kron += d / static_cast<double>(k);
    c.defect_partial.push_back(partial);
    c.kronecker.push_back(kron);
    c.sqrt_profile.push_back(std::sqrt(s2 / static_cast<double>(k)));
  }

  // o(n): slope of the partial sums over the last half of the profile.
  const std::size_t start = N / 2;
  if (N - start >= 2) {
    std::vector<double> ns, vs;
    for (std::size_t i = start; i < N; ++i) {
      ns.push_back(static_cast<double>(i + 1));
      vs.push_back(c.defect_partial[i]);
    }
    c.defect_slope = fit_line(ns, vs).slope;
  } else {
    c.defect_slope = c.defect_partial.back() / static_cast<double>(N);
  }
  c.defect_o_n = c.defect_slope <= tol.trend_tol;

  const double half_kron = start > 0 ? c.kronecker[start - 1] : 0.0;
  c.kronecker_converges = std::abs(c.kronecker.back() - half_kron) <= tol.trend_tol;

  const double last = c.sqrt_profile.back();
  const double mid = start > 0 ? c.sqrt_profile[start - 1] : c.sqrt_profile.front();
  c.o_sqrt_n = last * last <= tol.trend_tol || last * last <= 0.75 * mid * mid;
  return c;
}

SolveResult<CoeffVector> solve_contraction(const OperatorSpec& T, const CoeffVector& x,
                                           const SolveOptions& opts) {
  if (!T.is_contraction()) throw Error("operator norm exceeds 1");
  require_same_space(T.space(), x.space(), "solve_contraction");
  const DilationOperator R(T);
  auto lifted = solve_isometry(R, SeqVector::lift(x), opts);

  SolveResult<CoeffVector> out;
  out.verdict = lifted.verdict;
  out.residual = lifted.residual;
  out.growth_constant = lifted.growth_constant;
  out.partial_energy = lifted.partial_energy;
  out.levels = lifted.levels;
  out.diagnostics = lifted.diagnostics;
  auto& notes = out.diagnostics.notes;

  if (lifted.verdict == Verdict::not_coboundary) {
    notes.push_back("the lifted vector is not a coboundary of the isometric dilation: no y with "
                    "(I - T)y = x and ||Ty|| = ||y|| exists");
    return out;
  }
  if (lifted.verdict != Verdict::solved) return out;

  const SeqVector& ytilde = *lifted.solution;
  CoeffVector y = ytilde.slot(0);
  double tail = 0.0;
  for (std::size_t i = 1; i < ytilde.slots().size(); ++i) tail += norm_sq(ytilde.slots()[i]);

  out.residual = verify_coboundary(T, x, y);
  out.defect_norm = norm(defect_apply(T, y));
  out.isometry_gap = std::abs(norm(apply(T, y)) - norm(y));
  const double tol = opts.tol.residual_tol;
  if (out.residual <= tol && *out.defect_norm <= tol && *out.isometry_gap <= tol &&
      std::sqrt(tail) <= tol) {
    out.solution = std::move(y);
  } else {
    out.verdict = Verdict::inconclusive;
    notes.push_back("lifted solution failed the slot-0 certificate checks");
  }
  return out;
}

}  // namespace coblab
