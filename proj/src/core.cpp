#include "coblab/core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace coblab {

void Tolerances::validate() const {
  if (!(zero_eps > 0.0) || !(residual_tol > 0.0) || !(trend_tol > 0.0)) {
    throw Error("tolerances must be strictly positive");
  }
}

// ---------------------------------------------------------------------------
// FourierIndex

FourierIndex FourierIndex::from_mode(std::int64_t mode, int base) {
  if (base < 2) throw Error("Fourier base must be at least 2");
  if (mode == 0) throw Error("mode 0 is excluded from the zero-mean subspace");
  FourierIndex idx;
  idx.sign = mode < 0 ? -1 : 1;
  // |INT64_MIN| does not fit in int64 but does in uint64.
  std::uint64_t m = mode < 0 ? std::uint64_t(0) - static_cast<std::uint64_t>(mode)
                             : static_cast<std::uint64_t>(mode);
  const auto b = static_cast<std::uint64_t>(base);
  idx.power = 0;
  while (m % b == 0) {
    m /= b;
    ++idx.power;
  }
  idx.free_part = m;
  return idx;
}

std::optional<std::int64_t> FourierIndex::mode(int base) const {
  constexpr auto limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  std::uint64_t v = free_part;
  if (v > limit) return std::nullopt;
  const auto b = static_cast<std::uint64_t>(base);
  for (std::uint32_t k = 0; k < power; ++k) {
    if (v > limit / b) return std::nullopt;
    v *= b;
  }
  return sign * static_cast<std::int64_t>(v);
}

std::int64_t FourierIndex::chain_root() const {
  return sign * static_cast<std::int64_t>(free_part);
}

std::string FourierIndex::to_string(int base) const {
  if (auto m = mode(base)) return std::to_string(*m);
  std::ostringstream os;
  os << chain_root() << '*' << base << '^' << power;
  return os.str();
}

std::uint64_t FourierIndex::residue(int base, std::uint64_t m) const {
  if (m == 0) throw Error("residue modulus must be positive");
  using u128 = unsigned __int128;
  u128 r = free_part % m;
  u128 b = static_cast<std::uint64_t>(base) % m;
  std::uint32_t e = power;
  u128 acc = 1 % m;
  while (e > 0) {
    if (e & 1u) acc = acc * b % m;
    b = b * b % m;
    e >>= 1;
  }
  r = r * acc % m;
  auto out = static_cast<std::uint64_t>(r);
  if (sign < 0 && out != 0) out = m - out;
  return out;
}

// ---------------------------------------------------------------------------
// Space

Space Space::shift(std::uint32_t multiplicity) {
  if (multiplicity == 0) throw Error("shift multiplicity must be positive");
  Space s;
  s.kind_ = Kind::shift;
  s.multiplicity_ = multiplicity;
  return s;
}

Space Space::fourier(int base) {
  if (base < 2) throw Error("Fourier base must be at least 2");
  Space s;
  s.kind_ = Kind::fourier;
  s.base_ = base;
  return s;
}

Space Space::dense(std::uint32_t dimension) {
  if (dimension == 0) throw Error("dense dimension must be positive");
  Space s;
  s.kind_ = Kind::dense;
  s.dimension_ = dimension;
  return s;
}

Space Space::sum(std::vector<Space> parts) {
  if (parts.empty()) throw Error("direct sum needs at least one part");
  std::vector<Space> flat;
  for (auto& p : parts) {
    if (p.kind_ == Kind::sum) {
      flat.insert(flat.end(), p.parts_.begin(), p.parts_.end());
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.size() == 1) return flat.front();
  Space s;
  s.kind_ = Kind::sum;
  s.parts_ = std::move(flat);
  return s;
}

const Space& Space::leaf(std::uint32_t part) const {
  if (kind_ != Kind::sum) {
    if (part != 0) throw Error("part index out of range");
    return *this;
  }
  if (part >= parts_.size()) throw Error("part index out of range");
  return parts_[part];
}

bool Space::admits(const Index& idx) const {
  if (idx.part >= leaf_count()) return false;
  const Space& s = leaf(idx.part);
  switch (s.kind_) {
    case Kind::shift:
      if (auto* k = std::get_if<ShiftIndex>(&idx.key)) return k->slot < s.multiplicity_;
      return false;
    case Kind::fourier:
      if (auto* k = std::get_if<FourierIndex>(&idx.key)) {
        return k->free_part != 0 && k->free_part % static_cast<std::uint64_t>(s.base_) != 0 &&
               (k->sign == 1 || k->sign == -1);
      }
      return false;
    case Kind::dense:
      if (auto* k = std::get_if<DenseIndex>(&idx.key)) return k->coordinate < s.dimension_;
      return false;
    case Kind::sum:
      return false;
  }
  return false;
}

std::string Space::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::shift: os << "shift(" << multiplicity_ << ")"; break;
    case Kind::fourier: os << "fourier(base " << base_ << ")"; break;
    case Kind::dense: os << "dense(" << dimension_ << ")"; break;
    case Kind::sum:
      os << "sum[";
      for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? ", " : "") << parts_[i].describe();
      os << "]";
      break;
  }
  return os.str();
}

bool Space::operator==(const Space& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::shift: return multiplicity_ == other.multiplicity_;
    case Kind::fourier: return base_ == other.base_;
    case Kind::dense: return dimension_ == other.dimension_;
    case Kind::sum: return parts_ == other.parts_;
  }
  return false;
}

void require_same_space(const Space& a, const Space& b, const char* what) {
  if (!(a == b)) {
    throw SpaceMismatch(std::string(what) + ": space mismatch (" + a.describe() + " vs " +
                        b.describe() + ")");
  }
}

// ---------------------------------------------------------------------------
// CoeffVector

CoeffVector::CoeffVector(Space space, Entries entries, double eps)
    : space_(std::move(space)), entries_(std::move(entries)) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    check(it->first);
    if (std::abs(it->second) < eps) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

CoeffVector::CoeffVector(Space space, std::initializer_list<std::pair<const Index, cplx>> entries)
    : space_(std::move(space)) {
  for (const auto& [idx, value] : entries) add(idx, value);
}

void CoeffVector::check(const Index& idx) const {
  if (!space_.admits(idx)) throw Error("index does not belong to space " + space_.describe());
}

cplx CoeffVector::at(const Index& idx) const {
  auto it = entries_.find(idx);
  return it == entries_.end() ? cplx{} : it->second;
}

std::vector<Index> CoeffVector::support() const {
  std::vector<Index> out;
  out.reserve(entries_.size());
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

void CoeffVector::set(const Index& idx, cplx value, double eps) {
  check(idx);
  if (std::abs(value) < eps) {
    entries_.erase(idx);
  } else {
    entries_[idx] = value;
  }
}

void CoeffVector::add(const Index& idx, cplx value, double eps) {
  check(idx);
  auto [it, inserted] = entries_.try_emplace(idx, value);
  if (!inserted) it->second += value;
  if (std::abs(it->second) < eps) entries_.erase(it);
}

void CoeffVector::add_scaled(cplx alpha, const CoeffVector& v, double eps) {
  require_same_space(space_, v.space_, "add_scaled");
  if (alpha == cplx{}) return;
  auto hint = entries_.begin();
  for (const auto& [idx, value] : v.entries_) {
    hint = entries_.lower_bound(idx);
    if (hint != entries_.end() && hint->first == idx) {
      hint->second += alpha * value;
      if (std::abs(hint->second) < eps) hint = entries_.erase(hint);
    } else {
      const cplx c = alpha * value;
      if (std::abs(c) >= eps) entries_.emplace_hint(hint, idx, c);
    }
  }
}

cplx inner(const CoeffVector& u, const CoeffVector& v) {
  require_same_space(u.space(), v.space(), "inner");
  cplx acc{};
  auto a = u.entries().begin();
  auto b = v.entries().begin();
  while (a != u.entries().end() && b != v.entries().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      acc += a->second * std::conj(b->second);
      ++a;
      ++b;
    }
  }
  return acc;
}

double norm_sq(const CoeffVector& u) {
  double acc = 0.0;
  for (const auto& kv : u.entries()) acc += std::norm(kv.second);
  return acc;
}

double norm(const CoeffVector& u) { return std::sqrt(norm_sq(u)); }

CoeffVector combine(cplx alpha, const CoeffVector& u, cplx beta, const CoeffVector& v, double eps) {
  require_same_space(u.space(), v.space(), "combine");
  CoeffVector::Entries out;
  auto a = u.entries().begin();
  auto b = v.entries().begin();
  const auto ae = u.entries().end();
  const auto be = v.entries().end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->first < b->first)) {
      out.emplace_hint(out.end(), a->first, alpha * a->second);
      ++a;
    } else if (a == ae || b->first < a->first) {
      out.emplace_hint(out.end(), b->first, beta * b->second);
      ++b;
    } else {
      out.emplace_hint(out.end(), a->first, alpha * a->second + beta * b->second);
      ++a;
      ++b;
    }
  }
  return CoeffVector(u.space(), std::move(out), eps);
}

CoeffVector operator+(const CoeffVector& u, const CoeffVector& v) { return combine(1.0, u, 1.0, v); }
CoeffVector operator-(const CoeffVector& u, const CoeffVector& v) { return combine(1.0, u, -1.0, v); }
CoeffVector operator*(cplx alpha, const CoeffVector& u) {
  return combine(alpha, u, 0.0, CoeffVector(u.space()));
}

}  // namespace coblab
