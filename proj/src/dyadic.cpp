#include "coblab/dyadic.hpp"

#include <cmath>
#include <numbers>

#include "coblab/numeric.hpp"

namespace coblab {

FourierSeries::FourierSeries(const std::map<std::int64_t, cplx>& modes, int base, bool hermitian)
    : coeffs_(Space::fourier(base)), hermitian_(hermitian) {
  for (const auto& [n, a] : modes) {
    if (n == 0) throw Error("mode 0 present: f must have zero mean");
    coeffs_.add(Index(FourierIndex::from_mode(n, base)), a);
  }
  if (hermitian_) check_hermitian();
}

FourierSeries::FourierSeries(CoeffVector coeffs, bool hermitian)
    : coeffs_(std::move(coeffs)), hermitian_(hermitian) {
  if (coeffs_.space().kind() != Space::Kind::fourier) throw Error("Fourier series needs a Fourier space");
  if (hermitian_) check_hermitian();
}

void FourierSeries::check_hermitian() const {
  for (const auto& [idx, a] : coeffs_.entries()) {
    auto mirror = std::get<FourierIndex>(idx.key);
    mirror.sign = -mirror.sign;
    if (std::abs(coeffs_.at(Index(mirror)) - std::conj(a)) > kZeroEps) {
      throw Error("Hermitian symmetry violated at mode " +
                  std::get<FourierIndex>(idx.key).to_string(base()));
    }
  }
}

cplx FourierSeries::at(std::int64_t mode) const {
  if (mode == 0) return {};
  return coeffs_.at(Index(FourierIndex::from_mode(mode, base())));
}

OperatorSpec koopman(const FourierSeries& f) { return OperatorSpec(DoublingKoopman{f.base()}); }

std::uint32_t val2(std::int64_t n, int base) {
  if (n == 0) throw Error("valuation of 0 is undefined");
  return FourierIndex::from_mode(n, base).power;
}

ChainVerdict chain_solve(const FourierSeries& f, double zero_eps) {
  ChainVerdict verdict;
  CoeffVector g(f.coeffs().space());
  const auto& entries = f.coeffs().entries();

  // Entries are ordered by (sign, free part, power): each chain is a
  // contiguous run with ascending powers.
  for (auto it = entries.begin(); it != entries.end();) {
    const auto head = std::get<FourierIndex>(it->first.key);
    auto end = it;
    cplx total{};
    while (end != entries.end()) {
      const auto& k = std::get<FourierIndex>(end->first.key);
      if (k.sign != head.sign || k.free_part != head.free_part) break;
      total += end->second;
      ++end;
    }
    if (std::abs(total) > zero_eps) {
      verdict.obstructions.push_back({head.chain_root(), total});
    } else {
      cplx partial{};
      for (auto e = it; e != end; ++e) {
        partial += e->second;
        auto next = std::next(e);
        const auto k = std::get<FourierIndex>(e->first.key);
        // g^(m b^p) holds the partial sum for every p up to the next support
        // power; the run after the last support power is the vanishing total.
        const std::uint32_t stop =
            next == end ? k.power : std::get<FourierIndex>(next->first.key).power;
        for (std::uint32_t p = k.power; p < stop; ++p) {
          FourierIndex gi = k;
          gi.power = p;
          g.set(Index(gi), partial, zero_eps);
        }
      }
    }
    it = end;
  }

  verdict.solvable = verdict.obstructions.empty();
  if (verdict.solvable) {
    const auto T = koopman(f);
    verdict.substitution_residual =
        norm(combine(1.0, combine(1.0, g, -1.0, apply(T, g)), -1.0, f.coeffs()));
    verdict.g = FourierSeries(std::move(g), f.hermitian());
  }
  return verdict;
}

double valuation_condition(const FourierSeries& f, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  double acc = 0.0;
  for (const auto& [idx, a] : f.coeffs().entries()) {
    const auto v = std::get<FourierIndex>(idx.key).power;
    if (v > 0) acc += std::pow(static_cast<double>(v), 4.0 + epsilon) * std::norm(a);
  }
  return acc;
}

BlockEnergyProfile block_energy_profile(const FourierSeries& f, std::uint32_t i_max) {
  BlockEnergyProfile profile;
  std::vector<double> energy(static_cast<std::size_t>(i_max) + 1, 0.0);
  for (const auto& [idx, a] : f.coeffs().entries()) {
    const auto v = std::get<FourierIndex>(idx.key).power;
    if (v <= i_max) energy[v] += std::norm(a);
  }
  std::vector<double> is, logs;
  for (std::uint32_t i = 0; i <= i_max; ++i) {
    profile.levels.emplace_back(i, energy[i]);
    if (energy[i] > 0.0) {
      is.push_back(static_cast<double>(i));
      logs.push_back(std::log2(energy[i]));
    }
  }
  if (is.size() >= 2) {
    const auto fit = fit_line(is, logs);
    profile.alpha = -fit.slope;
    profile.fit_residual = fit.rms_residual;
  }
  return profile;
}

double ergodic_integral(const FourierSeries& f, std::size_t n) {
  if (n == 0) throw Error("ergodic integral needs n >= 1");
  const auto sum = power_sum(koopman(f), f.coeffs(), n + 1);
  return norm_sq(sum) / static_cast<double>(n);
}

std::vector<cplx> synthesize_samples(const FourierSeries& f, std::size_t m) {
  if (m == 0) throw Error("need at least one sample point");
  std::vector<cplx> out(m);
  using u128 = unsigned __int128;
  for (const auto& [idx, a] : f.coeffs().entries()) {
    const std::uint64_t r = std::get<FourierIndex>(idx.key).residue(f.base(), m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto rj = static_cast<std::uint64_t>(u128(r) * j % m);
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(rj) / static_cast<double>(m);
      out[j] += a * std::polar(1.0, theta);
    }
  }
  return out;
}

}  // namespace coblab
