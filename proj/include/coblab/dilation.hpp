#pragma once

// Isometric dilation of a contraction.
//
// For a contraction T with defect D = (I - T*T)^{1/2}, the operator
//   R(v_0, v_1, v_2, ...) = (T v_0, D v_0, v_1, v_2, ...)
// on l^2(H) is an isometry. Lifting x to (x, 0, 0, ...) turns (I - T)y = x
// with the extra constraint Dy = 0 (equivalently ||Ty|| = ||y||) into a
// coboundary problem for R, which the isometric solver handles.

#include <cstddef>
#include <vector>

#include "coblab/operators.hpp"
#include "coblab/solver.hpp"

namespace coblab {

/// Finitely many nonzero slots of l^2(H); trailing empty slots are trimmed.
class SeqVector {
 public:
  SeqVector() = default;
  explicit SeqVector(Space base) : space_(std::move(base)) {}
  SeqVector(Space base, std::vector<CoeffVector> slots);

  /// (x, 0, 0, ...).
  static SeqVector lift(const CoeffVector& x);

  const Space& space() const { return space_; }
  const std::vector<CoeffVector>& slots() const { return slots_; }
  /// Slot i, or an empty vector past the last stored slot.
  CoeffVector slot(std::size_t i) const;
  bool empty() const { return slots_.empty(); }

  void add_scaled(cplx alpha, const SeqVector& v, double eps = kZeroEps);

 private:
  void trim();

  Space space_;
  std::vector<CoeffVector> slots_;
};

cplx inner(const SeqVector& u, const SeqVector& v);
double norm(const SeqVector& u);
SeqVector combine(cplx alpha, const SeqVector& u, cplx beta, const SeqVector& v,
                  double eps = kZeroEps);

/// D v with D = (I - T*T)^{1/2}: zero on isometric blocks, sqrt(1 - |w_k|^2)
/// on weighted shifts, the cached eigendecomposition root on matrices.
CoeffVector defect_apply(const OperatorSpec& T, const CoeffVector& v);

class DilationOperator {
 public:
  explicit DilationOperator(OperatorSpec base);
  const OperatorSpec& base() const { return base_; }

 private:
  OperatorSpec base_;
};

enum class Direction { forward, adjoint };

/// R(v_0, v_1, ...) = (T v_0, D v_0, v_1, v_2, ...).
SeqVector apply(const DilationOperator& R, const SeqVector& v);
/// R*(v_0, v_1, ...) = (T* v_0 + D v_1, v_2, v_3, ...).
SeqVector apply_adjoint(const DilationOperator& R, const SeqVector& v);
SeqVector dilation_apply(const DilationOperator& R, const SeqVector& v, Direction direction);
bool unitary_supported(const DilationOperator& R, const SeqVector& v);
inline void assert_isometric(const DilationOperator&) {}

struct ContractionConditions {
  std::size_t horizon = 0;
  Summability summability;
  /// defect_partial[n-1] = sum_{k=1}^n (||S_k x||^2 - ||T S_k x||^2)
  std::vector<double> defect_partial;
  double defect_slope = 0.0;
  bool defect_o_n = false;
  /// kronecker[n-1] = sum_{k=1}^n (||S_k x||^2 - ||T S_k x||^2) / k
  std::vector<double> kronecker;
  bool kronecker_converges = false;
  /// sqrt_profile[n-1] = ||S_n x|| / sqrt(n)
  std::vector<double> sqrt_profile;
  bool o_sqrt_n = false;
};

/// Finite-horizon profiles of the defect conditions for contractions.
/// All verdicts are heuristic; none of them is used to certify a negative answer.
ContractionConditions contraction_conditions(const OperatorSpec& T, const CoeffVector& x,
                                             std::size_t N, const Tolerances& tol = {});

/// Solves (I - T)y = x with ||Ty|| = ||y|| through the isometric dilation.
SolveResult<CoeffVector> solve_contraction(const OperatorSpec& T, const CoeffVector& x,
                                           const SolveOptions& opts = {});

}  // namespace coblab
