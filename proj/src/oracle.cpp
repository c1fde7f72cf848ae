#include "coblab/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace coblab {

namespace {

CoeffVector basis(const Space& space, const Index& idx) {
  CoeffVector e(space);
  e.set(idx, 1.0);
  return e;
}

std::map<Index, Eigen::Index> positions(const std::vector<Index>& indices) {
  std::map<Index, Eigen::Index> pos;
  for (std::size_t i = 0; i < indices.size(); ++i) pos.emplace(indices[i], static_cast<Eigen::Index>(i));
  return pos;
}

}  // namespace

Window make_window(const OperatorSpec& op, std::vector<Index> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (const auto& idx : indices) {
    if (!op.space().admits(idx)) throw Error("window index does not belong to the operator's space");
  }
  Window w{std::move(indices), true};
  const std::set<Index> members(w.indices.begin(), w.indices.end());
  for (const auto& idx : w.indices) {
    const auto image = apply(op, basis(op.space(), idx));
    for (const auto& kv : image.entries()) {
      if (!members.contains(kv.first)) {
        w.closed = false;
        return w;
      }
    }
  }
  return w;
}

Window shift_window(const OperatorSpec& op, std::uint64_t levels) {
  if (op.space().kind() != Space::Kind::shift) throw Error("shift window needs a shift space");
  std::vector<Index> idx;
  for (std::uint64_t n = 0; n < levels; ++n) {
    for (std::uint32_t s = 0; s < op.space().multiplicity(); ++s) idx.emplace_back(ShiftIndex{n, s});
  }
  return make_window(op, std::move(idx));
}

Window auto_window(const OperatorSpec& op, const CoeffVector& x, std::size_t depth, std::size_t cap) {
  require_same_space(op.space(), x.space(), "auto_window");
  std::set<Index> seen;
  std::vector<Index> frontier;
  for (const auto& idx : x.support()) {
    if (seen.size() >= cap) break;
    if (seen.insert(idx).second) frontier.push_back(idx);
  }
  for (std::size_t d = 0; d < depth && !frontier.empty() && seen.size() < cap; ++d) {
    std::vector<Index> next;
    for (const auto& idx : frontier) {
      const auto image = apply(op, basis(op.space(), idx));
      for (const auto& kv : image.entries()) {
        if (seen.size() >= cap) break;
        if (seen.insert(kv.first).second) next.push_back(kv.first);
      }
    }
    frontier = std::move(next);
  }
  return make_window(op, std::vector<Index>(seen.begin(), seen.end()));
}

Materialized materialize(const OperatorSpec& op, const Window& window) {
  if (window.indices.empty()) throw Error("empty window");
  const auto pos = positions(window.indices);
  const auto n = static_cast<Eigen::Index>(window.indices.size());
  Materialized m{Eigen::MatrixXcd::Zero(n, n), 0.0, {}};
  std::set<Index> overflow;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto col = apply(op, basis(op.space(), window.indices[j]));
    for (const auto& [idx, c] : col.entries()) {
      auto it = pos.find(idx);
      if (it != pos.end()) {
        m.matrix(it->second, j) = c;
      } else {
        m.lost_mass += std::norm(c);
        overflow.insert(idx);
      }
    }
  }
  m.overflow.assign(overflow.begin(), overflow.end());
  return m;
}

LsqSolution lsq_solve(const OperatorSpec& op, const CoeffVector& x, const Window& window) {
  if (window.indices.empty()) throw Error("empty window");
  require_same_space(op.space(), x.space(), "lsq_solve");
  const auto col_pos = positions(window.indices);
  for (const auto& idx : x.support()) {
    if (!col_pos.contains(idx)) throw Error("support of x is not contained in the window");
  }

  const auto m = materialize(op, window);
  std::vector<Index> rows = window.indices;
  rows.insert(rows.end(), m.overflow.begin(), m.overflow.end());
  std::sort(rows.begin(), rows.end());
  const auto row_pos = positions(rows);

  const auto ncols = static_cast<Eigen::Index>(window.indices.size());
  const auto nrows = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nrows, ncols);
  for (Eigen::Index j = 0; j < ncols; ++j) {
    A(row_pos.at(window.indices[j]), j) += 1.0;
    const auto image = apply(op, basis(op.space(), window.indices[j]));
    for (const auto& [idx, c] : image.entries()) {
      A(row_pos.at(idx), j) -= c;
    }
  }
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nrows);
  for (const auto& [idx, c] : x.entries()) b(row_pos.at(idx)) = c;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
  cod.setThreshold(1e-10);
  cod.compute(A);
  const Eigen::VectorXcd y = cod.solve(b);

  LsqSolution out{CoeffVector(op.space()), (A * y - b).norm(), cod.rank()};
  for (Eigen::Index j = 0; j < ncols; ++j) out.y.set(window.indices[j], y(j));
  return out;
}

}  // namespace coblab
