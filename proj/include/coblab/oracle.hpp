#pragma once

// Brute-force cross-check: materialize an operator on a finite window of
// indices and solve (I - T)y = x there in the least-squares sense.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "coblab/operators.hpp"

namespace coblab {

inline constexpr std::size_t kWindowCap = 4096;

struct Window {
  std::vector<Index> indices;  // sorted, no duplicates
  bool closed = false;         // T maps the window into itself
};

/// Sorted, de-duplicated window; `closed` is computed against op.
Window make_window(const OperatorSpec& op, std::vector<Index> indices);

/// Levels 0 .. levels-1 of every slot of a shift space.
Window shift_window(const OperatorSpec& op, std::uint64_t levels);

/// support(x) closed under `depth` forward applications, capped at `cap`.
Window auto_window(const OperatorSpec& op, const CoeffVector& x, std::size_t depth,
                   std::size_t cap = kWindowCap);

struct Materialized {
  Eigen::MatrixXcd matrix;        // column j = T e_j restricted to the window
  double lost_mass = 0.0;         // sum_j ||T e_j outside the window||^2
  std::vector<Index> overflow;    // indices reached outside the window
};

Materialized materialize(const OperatorSpec& op, const Window& window);

struct LsqSolution {
  CoeffVector y;
  double residual = 0.0;
  Eigen::Index rank = 0;
};

/// Minimum-norm least-squares solution of (I - T)y = x with y on the window
/// and rows on the window plus its one-step overflow, via a complete
/// orthogonal decomposition with rank threshold 1e-10 relative.
LsqSolution lsq_solve(const OperatorSpec& op, const CoeffVector& x, const Window& window);

}  // namespace coblab
