#pragma once

// Structured operator families with exact forward and adjoint action on
// finitely supported vectors, and the adjoint orbit shared by every
// isometric algorithm.

#include <concepts>
#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "coblab/core.hpp"

namespace coblab {

enum class OperatorClass { unitary, isometry, proper_contraction, not_contraction };

const char* to_string(OperatorClass c);

/// (n, s) -> (n + 1, s) on Space::shift(multiplicity).
struct UnilateralShift {
  std::uint32_t multiplicity = 1;
};

/// e_j -> phases[j] e_j on Space::dense(phases.size()).
struct DiagonalUnitary {
  std::vector<cplx> phases;
};

/// Koopman operator of t -> base * t mod 1: mode n -> base * n.
struct DoublingKoopman {
  int base = 2;
};

/// e_k -> w_k e_{k+1} on Space::shift(1); w_k = 1 past the listed weights,
/// so the tail is a plain unilateral shift.
struct WeightedShift {
  std::vector<cplx> weights;

  cplx weight(std::uint64_t k) const { return k < weights.size() ? weights[k] : cplx{1.0}; }
};

/// Dense d x d matrix with largest singular value <= 1 + zero_eps. The
/// defect (I - T*T)^{1/2} is computed once at construction.
class MatrixContraction {
 public:
  explicit MatrixContraction(Eigen::MatrixXcd matrix, double zero_eps = kZeroEps);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::MatrixXcd& defect() const { return defect_; }
  double operator_norm() const { return norm_; }
  bool unitary() const { return unitary_; }
  std::uint32_t dimension() const { return static_cast<std::uint32_t>(matrix_.rows()); }

 private:
  Eigen::MatrixXcd matrix_;
  Eigen::MatrixXcd defect_;
  double norm_ = 0.0;
  bool unitary_ = false;
};

class OperatorSpec;

struct DirectSum {
  std::vector<OperatorSpec> parts;
};

class OperatorSpec {
 public:
  using Kind = std::variant<UnilateralShift, DiagonalUnitary, DoublingKoopman, MatrixContraction,
                            WeightedShift, DirectSum>;

  OperatorSpec(UnilateralShift op);
  OperatorSpec(DiagonalUnitary op, double zero_eps = kZeroEps);
  OperatorSpec(DoublingKoopman op);
  OperatorSpec(MatrixContraction op);
  OperatorSpec(WeightedShift op, double zero_eps = kZeroEps);
  /// Nested sums are flattened so every part is a leaf family.
  OperatorSpec(DirectSum op);

  const Kind& kind() const { return kind_; }
  const Space& space() const { return space_; }
  OperatorClass op_class() const { return class_; }

  bool is_isometric() const {
    return class_ == OperatorClass::unitary || class_ == OperatorClass::isometry;
  }
  bool is_contraction() const { return class_ != OperatorClass::not_contraction; }

  /// Leaf operator owning `part` (the operator itself unless it is a sum).
  const OperatorSpec& leaf(std::uint32_t part) const;

 private:
  void finish();

  Kind kind_;
  Space space_;
  OperatorClass class_ = OperatorClass::isometry;
};

OperatorSpec direct_sum(std::vector<OperatorSpec> parts);

CoeffVector apply(const OperatorSpec& op, const CoeffVector& v);
CoeffVector apply_adjoint(const OperatorSpec& op, const CoeffVector& v);

/// True when v lies in blocks on which op is unitary, i.e. inside the unitary
/// part of the Wold decomposition. The empty vector qualifies.
bool unitary_supported(const OperatorSpec& op, const CoeffVector& v);

/// Throws unless op is an isometry (or unitary).
void assert_isometric(const OperatorSpec& op);

/// S_n(T)x = x + Tx + ... + T^{n-1}x.
CoeffVector power_sum(const OperatorSpec& op, const CoeffVector& x, std::size_t n);

// ---------------------------------------------------------------------------
// Generic isometric setting: CoeffVector under OperatorSpec, and the lifted
// sequences of the dilation module, satisfy the same interface.

template <class Op, class Vec>
concept IsometricSetting = requires(const Op& op, const Vec& v, Vec& acc, cplx a) {
  { apply(op, v) } -> std::same_as<Vec>;
  { apply_adjoint(op, v) } -> std::same_as<Vec>;
  { unitary_supported(op, v) } -> std::same_as<bool>;
  assert_isometric(op);
  { inner(v, v) } -> std::same_as<cplx>;
  { norm(v) } -> std::same_as<double>;
  { combine(a, v, a, v) } -> std::same_as<Vec>;
  { v.empty() } -> std::same_as<bool>;
  acc.add_scaled(a, v);
  Vec(v.space());
};

template <class Vec>
struct AdjointOrbit {
  /// [x, T*x, T*^2 x, ...] up to and including the terminal term.
  std::vector<Vec> terms;
  /// The orbit reached an empty vector or a vector in the unitary part.
  bool exact = false;
  /// exact, and the terminal term is a nonzero unitary-part vector.
  bool unitary_tail = false;
};

/// Iterates T* until the term is empty or unitary-supported (exact), or until
/// `cutoff` applications have been made (truncated).
template <class Op, class Vec>
AdjointOrbit<Vec> adjoint_orbit(const Op& op, const Vec& x, std::size_t cutoff) {
  AdjointOrbit<Vec> orbit;
  orbit.terms.push_back(x);
  for (std::size_t k = 0;; ++k) {
    const Vec& cur = orbit.terms.back();
    if (cur.empty() || unitary_supported(op, cur)) {
      orbit.exact = true;
      orbit.unitary_tail = !cur.empty();
      return orbit;
    }
    if (k == cutoff) return orbit;
    orbit.terms.push_back(apply_adjoint(op, cur));
  }
}

/// T^k v by repeated application.
template <class Op, class Vec>
Vec apply_power(const Op& op, Vec v, std::size_t k) {
  for (std::size_t i = 0; i < k && !v.empty(); ++i) v = apply(op, v);
  return v;
}

}  // namespace coblab
