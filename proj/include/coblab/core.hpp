#pragma once

// Finitely supported complex coefficient vectors over typed index families.
//
// Every Hilbert-space element handled by the library is a CoeffVector: a
// sparse map from Index to a complex coefficient, tagged with the Space it
// lives in. Entries whose magnitude falls below the pruning threshold are
// removed after every arithmetic operation, so exact structured
// computations stay finitely supported.

#include <complex>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace coblab {

using cplx = std::complex<double>;

inline constexpr double kZeroEps = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

struct Tolerances {
  double zero_eps = 1e-12;
  double residual_tol = 1e-9;
  double trend_tol = 1e-6;

  /// Throws Error unless every tolerance is strictly positive.
  void validate() const;
};

/// Basis vector (level, slot) of a unilateral shift of finite multiplicity.
struct ShiftIndex {
  std::uint64_t level = 0;
  std::uint32_t slot = 0;
  auto operator<=>(const ShiftIndex&) const = default;
};

/// Fourier mode n = sign * free_part * base^power, free_part not divisible by
/// base. The factored form keeps modes like 2^10000 exact; the base itself
/// belongs to the owning Space. Mode 0 is not representable.
struct FourierIndex {
  int sign = 1;
  std::uint64_t free_part = 1;
  std::uint32_t power = 0;
  auto operator<=>(const FourierIndex&) const = default;

  static FourierIndex from_mode(std::int64_t mode, int base);
  /// Signed integer value, or nullopt when it does not fit in 64 bits.
  std::optional<std::int64_t> mode(int base) const;
  /// sign * free_part: the root of the chain {root * base^k}.
  std::int64_t chain_root() const;
  /// Decimal value if it fits, otherwise "root*base^power".
  std::string to_string(int base) const;
  /// n mod m in [0, m), computed without forming n.
  std::uint64_t residue(int base, std::uint64_t m) const;
};

struct DenseIndex {
  std::uint32_t coordinate = 0;
  auto operator<=>(const DenseIndex&) const = default;
};

/// `part` selects the summand of a direct-sum space and is 0 otherwise.
struct Index {
  std::uint32_t part = 0;
  std::variant<ShiftIndex, FourierIndex, DenseIndex> key;

  Index() = default;
  Index(ShiftIndex k, std::uint32_t p = 0) : part(p), key(k) {}
  Index(FourierIndex k, std::uint32_t p = 0) : part(p), key(k) {}
  Index(DenseIndex k, std::uint32_t p = 0) : part(p), key(k) {}

  auto operator<=>(const Index&) const = default;

  Index with_part(std::uint32_t p) const {
    Index out = *this;
    out.part = p;
    return out;
  }
};

class Space {
 public:
  enum class Kind { shift, fourier, dense, sum };

  static Space shift(std::uint32_t multiplicity = 1);
  static Space fourier(int base = 2);
  static Space dense(std::uint32_t dimension);
  /// Nested sums are flattened; a one-part sum is the part itself.
  static Space sum(std::vector<Space> parts);

  Kind kind() const { return kind_; }
  std::uint32_t multiplicity() const { return multiplicity_; }
  int base() const { return base_; }
  std::uint32_t dimension() const { return dimension_; }
  const std::vector<Space>& parts() const { return parts_; }

  std::size_t leaf_count() const { return kind_ == Kind::sum ? parts_.size() : 1; }
  const Space& leaf(std::uint32_t part) const;

  bool admits(const Index& idx) const;
  std::string describe() const;

  bool operator==(const Space& other) const;

 private:
  Kind kind_ = Kind::shift;
  std::uint32_t multiplicity_ = 1;
  int base_ = 2;
  std::uint32_t dimension_ = 0;
  std::vector<Space> parts_;
};

class CoeffVector {
 public:
  using Entries = std::map<Index, cplx>;

  CoeffVector() = default;
  explicit CoeffVector(Space space) : space_(std::move(space)) {}
  CoeffVector(Space space, Entries entries, double eps = kZeroEps);
  CoeffVector(Space space, std::initializer_list<std::pair<const Index, cplx>> entries);

  const Space& space() const { return space_; }
  const Entries& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  cplx at(const Index& idx) const;
  std::vector<Index> support() const;

  void set(const Index& idx, cplx value, double eps = kZeroEps);
  void add(const Index& idx, cplx value, double eps = kZeroEps);
  /// this += alpha * v, pruning every touched entry.
  void add_scaled(cplx alpha, const CoeffVector& v, double eps = kZeroEps);

 private:
  void check(const Index& idx) const;

  Space space_;
  Entries entries_;
};

/// Sum of u_i * conj(v_i).
cplx inner(const CoeffVector& u, const CoeffVector& v);
double norm_sq(const CoeffVector& u);
double norm(const CoeffVector& u);
CoeffVector combine(cplx alpha, const CoeffVector& u, cplx beta, const CoeffVector& v,
                    double eps = kZeroEps);

CoeffVector operator+(const CoeffVector& u, const CoeffVector& v);
CoeffVector operator-(const CoeffVector& u, const CoeffVector& v);
CoeffVector operator*(cplx alpha, const CoeffVector& u);

void require_same_space(const Space& a, const Space& b, const char* what);

}  // namespace coblab
