#pragma once

// Random inputs for property tests. Every generator takes the engine by
// reference so each test owns a fixed-seed stream.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "coblab/core.hpp"
#include "coblab/operators.hpp"

namespace testing_support {

using coblab::cplx;
using Rng = std::mt19937_64;

inline cplx gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline coblab::CoeffVector random_shift_vector(Rng& rng, std::uint32_t multiplicity, int max_level, int nnz) {
  coblab::CoeffVector v(coblab::Space::shift(multiplicity));
  for (int i = 0; i < nnz; ++i) {
    const auto level = static_cast<std::uint64_t>(uniform_int(rng, 0, max_level));
    const auto slot = static_cast<std::uint32_t>(uniform_int(rng, 0, static_cast<int>(multiplicity) - 1));
    v.add(coblab::ShiftIndex{level, slot}, gaussian(rng));
  }
  return v;
}

inline coblab::CoeffVector random_fourier_vector(Rng& rng, int base, int max_abs_mode, int nnz) {
  coblab::CoeffVector v(coblab::Space::fourier(base));
  for (int i = 0; i < nnz; ++i) {
    int mode = 0;
    while (mode == 0) mode = uniform_int(rng, -max_abs_mode, max_abs_mode);
    v.add(coblab::FourierIndex::from_mode(mode, base), gaussian(rng));
  }
  return v;
}

inline coblab::CoeffVector random_dense_vector(Rng& rng, std::uint32_t dim) {
  coblab::CoeffVector v(coblab::Space::dense(dim));
  for (std::uint32_t j = 0; j < dim; ++j) v.add(coblab::DenseIndex{j}, gaussian(rng));
  return v;
}

inline Eigen::MatrixXcd random_matrix(Rng& rng, int dim) {
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = gaussian(rng);
  }
  return m;
}

/// Random matrix rescaled to the given operator norm.
inline Eigen::MatrixXcd random_contraction_matrix(Rng& rng, int dim, double target_norm) {
  Eigen::MatrixXcd m = random_matrix(rng, dim);
  const double s = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
  return m * (target_norm / s);
}

inline std::vector<cplx> random_phases(Rng& rng, std::size_t n) {
  std::vector<cplx> phases;
  for (std::size_t i = 0; i < n; ++i) phases.push_back(std::polar(1.0, uniform_real(rng, 0.0, 2.0 * M_PI)));
  return phases;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
