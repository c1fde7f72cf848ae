#include "coblab/operators.hpp"

#include <cmath>
#include <sstream>

namespace coblab {

namespace {

constexpr double kClassifyEps = 1e-10;

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

using Accum = CoeffVector::Entries;

void accumulate(Accum& acc, const Index& idx, cplx value) {
  auto [it, inserted] = acc.try_emplace(idx, value);
  if (!inserted) it->second += value;
}

// Adds c * T e_idx (or c * T* e_idx) for the leaf operator owning idx.
void leaf_column(const OperatorSpec& leaf, const Index& idx, cplx c, bool adjoint, Accum& acc) {
  std::visit(
      overloaded{
          [&](const UnilateralShift&) {
            auto k = std::get<ShiftIndex>(idx.key);
            if (!adjoint) {
              ++k.level;
            } else {
              if (k.level == 0) return;
              --k.level;
            }
            accumulate(acc, Index(k, idx.part), c);
          },
          [&](const DiagonalUnitary& d) {
            const auto j = std::get<DenseIndex>(idx.key).coordinate;
            const cplx p = adjoint ? std::conj(d.phases[j]) : d.phases[j];
            accumulate(acc, idx, p * c);
          },
          [&](const DoublingKoopman&) {
            auto k = std::get<FourierIndex>(idx.key);
            if (!adjoint) {
              ++k.power;
            } else {
              if (k.power == 0) return;
              --k.power;
            }
            accumulate(acc, Index(k, idx.part), c);
          },
          [&](const MatrixContraction& m) {
            const auto j = std::get<DenseIndex>(idx.key).coordinate;
            const auto& a = m.matrix();
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
              const cplx entry = adjoint ? std::conj(a(j, i)) : a(i, j);
              if (entry != cplx{}) {
                accumulate(acc, Index(DenseIndex{static_cast<std::uint32_t>(i)}, idx.part),
                           entry * c);
              }
            }
          },
          [&](const WeightedShift& w) {
            auto k = std::get<ShiftIndex>(idx.key);
            if (!adjoint) {
              const cplx wk = w.weight(k.level);
              ++k.level;
              accumulate(acc, Index(k, idx.part), wk * c);
            } else {
              if (k.level == 0) return;
              --k.level;
              accumulate(acc, Index(k, idx.part), std::conj(w.weight(k.level)) * c);
            }
          },
          [&](const DirectSum&) { throw Error("direct sum cannot be a leaf"); },
      },
      leaf.kind());
}

CoeffVector act(const OperatorSpec& op, const CoeffVector& v, bool adjoint) {
  require_same_space(op.space(), v.space(), adjoint ? "apply_adjoint" : "apply");
  Accum acc;
  for (const auto& [idx, c] : v.entries()) leaf_column(op.leaf(idx.part), idx, c, adjoint, acc);
  return CoeffVector(v.space(), std::move(acc));
}

OperatorClass classify_leaf(const OperatorSpec::Kind& kind) {
  return std::visit(
      overloaded{
          [](const UnilateralShift&) { return OperatorClass::isometry; },
          [](const DiagonalUnitary&) { return OperatorClass::unitary; },
          [](const DoublingKoopman&) { return OperatorClass::isometry; },
          [](const MatrixContraction& m) {
            return m.unitary() ? OperatorClass::unitary : OperatorClass::proper_contraction;
          },
          [](const WeightedShift& w) {
            for (const auto& wk : w.weights) {
              if (std::abs(std::abs(wk) - 1.0) > kClassifyEps) return OperatorClass::proper_contraction;
            }
            return OperatorClass::isometry;
          },
          [](const DirectSum&) { return OperatorClass::not_contraction; },
      },
      kind);
}

}  // namespace

const char* to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::unitary: return "unitary";
    case OperatorClass::isometry: return "isometry";
    case OperatorClass::proper_contraction: return "proper_contraction";
    case OperatorClass::not_contraction: return "not_contraction";
  }
  return "unknown";
}

MatrixContraction::MatrixContraction(Eigen::MatrixXcd matrix, double zero_eps)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw Error("matrix contraction must be square and nonempty");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix_);
  const auto& sv = svd.singularValues();
  norm_ = sv(0);
  if (norm_ > 1.0 + zero_eps) {
    std::ostringstream os;
    os.precision(17);
    os << "operator norm exceeds 1 (largest singular value " << norm_ << ")";
    throw Error(os.str());
  }
  unitary_ = sv(sv.size() - 1) >= 1.0 - kClassifyEps;

  // D = (I - T*T)^{1/2}; eigenvalues below zero_eps (including roundoff
  // negatives) are clamped to 0 so D stays positive semidefinite.
  const auto n = matrix_.rows();
  Eigen::MatrixXcd gap = Eigen::MatrixXcd::Identity(n, n) - matrix_.adjoint() * matrix_;
  gap = (0.5 * (gap + gap.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gap);
  Eigen::VectorXd roots = eig.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    roots(i) = roots(i) < zero_eps ? 0.0 : std::sqrt(roots(i));
  }
  defect_ = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

OperatorSpec::OperatorSpec(UnilateralShift op) : kind_(op) {
  if (op.multiplicity == 0) throw Error("shift multiplicity must be positive");
  space_ = Space::shift(op.multiplicity);
  finish();
}

OperatorSpec::OperatorSpec(DiagonalUnitary op, double zero_eps) : kind_(op) {
  if (op.phases.empty()) throw Error("diagonal unitary needs at least one phase");
  for (const auto& p : op.phases) {
    if (std::abs(std::abs(p) - 1.0) > zero_eps) throw Error("diagonal unitary phase is not unit-modulus");
  }
  space_ = Space::dense(static_cast<std::uint32_t>(op.phases.size()));
  finish();
}

OperatorSpec::OperatorSpec(DoublingKoopman op) : kind_(op) {
  if (op.base < 2) throw Error("doubling base must be at least 2");
  space_ = Space::fourier(op.base);
  finish();
}

OperatorSpec::OperatorSpec(MatrixContraction op) : kind_(std::move(op)) {
  space_ = Space::dense(std::get<MatrixContraction>(kind_).dimension());
  finish();
}

OperatorSpec::OperatorSpec(WeightedShift op, double zero_eps) : kind_(op) {
  for (const auto& w : op.weights) {
    if (std::abs(w) > 1.0 + zero_eps) throw Error("weighted shift weight exceeds 1 in modulus");
  }
  space_ = Space::shift(1);
  finish();
}

OperatorSpec::OperatorSpec(DirectSum op) {
  if (op.parts.empty()) throw Error("direct sum needs at least one part");
  DirectSum flat;
  for (auto& p : op.parts) {
    if (auto* nested = std::get_if<DirectSum>(&p.kind_)) {
      flat.parts.insert(flat.parts.end(), nested->parts.begin(), nested->parts.end());
    } else {
      flat.parts.push_back(std::move(p));
    }
  }
  if (flat.parts.size() == 1) {
    *this = flat.parts.front();
    return;
  }
  std::vector<Space> spaces;
  for (const auto& p : flat.parts) spaces.push_back(p.space());
  space_ = Space::sum(std::move(spaces));
  kind_ = std::move(flat);
  finish();
}

void OperatorSpec::finish() {
  if (auto* sum = std::get_if<DirectSum>(&kind_)) {
    bool all_unitary = true;
    bool any_proper = false;
    for (const auto& p : sum->parts) {
      all_unitary = all_unitary && p.class_ == OperatorClass::unitary;
      any_proper = any_proper || p.class_ == OperatorClass::proper_contraction;
    }
    class_ = all_unitary ? OperatorClass::unitary
                         : (any_proper ? OperatorClass::proper_contraction : OperatorClass::isometry);
  } else {
    class_ = classify_leaf(kind_);
  }
}

const OperatorSpec& OperatorSpec::leaf(std::uint32_t part) const {
  if (auto* sum = std::get_if<DirectSum>(&kind_)) {
    if (part >= sum->parts.size()) throw Error("part index out of range");
    return sum->parts[part];
  }
  if (part != 0) throw Error("part index out of range");
  return *this;
}

OperatorSpec direct_sum(std::vector<OperatorSpec> parts) { return OperatorSpec(DirectSum{std::move(parts)}); }

CoeffVector apply(const OperatorSpec& op, const CoeffVector& v) { return act(op, v, false); }

CoeffVector apply_adjoint(const OperatorSpec& op, const CoeffVector& v) { return act(op, v, true); }

bool unitary_supported(const OperatorSpec& op, const CoeffVector& v) {
  require_same_space(op.space(), v.space(), "unitary_supported");
  for (const auto& kv : v.entries()) {
    if (op.leaf(kv.first.part).op_class() != OperatorClass::unitary) return false;
  }
  return true;
}

void assert_isometric(const OperatorSpec& op) {
  if (!op.is_isometric()) {
    throw Error(std::string("operator is ") + to_string(op.op_class()) +
                ", not an isometry; use the contraction solver");
  }
}

CoeffVector power_sum(const OperatorSpec& op, const CoeffVector& x, std::size_t n) {
  if (n == 0) throw Error("power_sum needs n >= 1");
  require_same_space(op.space(), x.space(), "power_sum");
  CoeffVector sum(x.space());
  CoeffVector term = x;
  for (std::size_t k = 0; k < n && !term.empty(); ++k) {
    sum.add_scaled(1.0, term);
    if (k + 1 < n) term = apply(op, term);
  }
  return sum;
}

}  // namespace coblab
