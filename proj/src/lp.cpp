#include "nslab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace nslab {

namespace {

using kernels::max_indexed;
using kernels::sum_indexed;

constexpr double kLo = 0.75;
constexpr double kHi = 4.0 / 3.0;

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double ell_r(const std::vector<double>& terms, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double s = 0.0;
  for (double t : terms) s += std::pow(t, r);
  return std::pow(s, 1.0 / r);
}

template <class Field>
double besov_general(const Field& f, const BesovParams& bp, const LpPartition& part, int lo, int hi) {
  if (bp.p < 1.0 || bp.r < 1.0) throw std::invalid_argument("besov_norm: p, r must be >= 1");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int j = lo; j <= hi; ++j)
    terms.push_back(std::pow(2.0, j * bp.s) * block_lp_norm(f, j, bp.p, part));
  return ell_r(terms, bp.r);
}

}  // namespace

double LpPartition::chi(double rho) {
  if (rho <= kLo) return 1.0;
  if (rho >= kHi) return 0.0;
  const double x = (rho - kLo) / (kHi - kLo);
  const double up = bump(1.0 - x);
  return up / (up + bump(x));
}

double LpPartition::phi(double rho) { return chi(0.5 * rho) - chi(rho); }

double LpPartition::partition_sum(double rho) const {
  double s = 0.0;
  for (int j = j_min; j <= j_max; ++j) s += phi(std::ldexp(rho, -j));
  return s;
}

std::pair<double, double> LpPartition::covered_range() const {
  return {kHi * std::ldexp(1.0, j_min), kLo * std::ldexp(1.0, j_max)};
}

LpPartition build_partition(int j_min, int j_max, int j0) {
  if (!(j_min <= j0 && j0 <= j_max))
    throw std::invalid_argument("build_partition: require j_min <= j0 <= j_max");
  return LpPartition{j_min, j_max, j0};
}

double s0_endpoint(double p, int d) { return 2.0 * d / p - 0.5 * d; }

SpectralField dyadic_block(const SpectralField& f, int j, const LpPartition& part) {
  if (j < part.j_min || j > part.j_max)
    throw std::invalid_argument("dyadic_block: block index outside covered range");
  const double scale = std::ldexp(1.0, -j);
  return apply_radial_multiplier(f, [&](double rho) { return LpPartition::phi(scale * rho); });
}

SpectralField low_cut(const SpectralField& f, int j) {
  const double scale = std::ldexp(1.0, -j);
  return apply_radial_multiplier(f, [&](double rho) { return LpPartition::chi(scale * rho); });
}

std::map<int, SpectralField> decompose(const SpectralField& f, const LpPartition& part) {
  std::map<int, SpectralField> blocks;
  for (int j = part.j_min; j <= part.j_max; ++j) blocks.emplace(j, dyadic_block(f, j, part));
  return blocks;
}

namespace {

// phi(2^{-j}|xi|)^2 per mode, cached per (grid, j): the dominant cost of
// spectral block norms is otherwise the smooth-cutoff evaluation.
const std::vector<double>& phi2_weights(const Grid& g, int j) {
  struct Key {
    int dim, n, j;
    long long lbits;
    bool operator<(const Key& o) const {
      return std::tie(dim, n, j, lbits) < std::tie(o.dim, o.n, o.j, o.lbits);
    }
  };
  static std::map<Key, std::vector<double>> cache;
  static std::mutex mutex;
  long long lbits;
  const double len = g.length();
  std::memcpy(&lbits, &len, sizeof lbits);
  const Key key{g.dim(), g.n(), j, lbits};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> w(g.size());
  const double scale = std::ldexp(1.0, -j);
  kernels::for_each_index(g.size(), [&](std::size_t i) {
    const double phi = LpPartition::phi(scale * std::sqrt(g.xi2(i)));
    w[i] = phi * phi;
  });
  return cache.emplace(key, std::move(w)).first->second;
}

}  // namespace

double block_lp_norm(const SpectralField& f, int j, double p, const LpPartition& part) {
  const Grid& g = f.grid();
  if (p == 2.0) {
    const auto& w = phi2_weights(g, j);
    const double s = sum_indexed(g.size(), [&](std::size_t i) {
      return w[i] == 0.0 ? 0.0 : w[i] * std::norm(f.coeffs()[i]);
    });
    return std::sqrt(s) * std::pow(g.length(), 0.5 * g.dim());
  }
  return lp_norm(dyadic_block(f, j, part), p);
}

double block_lp_norm(const VectorField& f, int j, double p, const LpPartition& part) {
  const Grid& g = f.grid();
  if (p == 2.0) {
    double s = 0.0;
    for (int a = 0; a < f.dim(); ++a) {
      const double c = block_lp_norm(f.comp[static_cast<std::size_t>(a)], j, 2.0, part);
      s += c * c;
    }
    return std::sqrt(s);
  }
  VectorField blocked(g);
  for (int a = 0; a < f.dim(); ++a)
    blocked.comp[static_cast<std::size_t>(a)] = dyadic_block(f.comp[static_cast<std::size_t>(a)], j, part);
  return lp_norm(blocked, p);
}

double besov_norm(const SpectralField& f, const BesovParams& bp, const LpPartition& part) {
  return besov_general(f, bp, part, part.j_min, part.j_max);
}
double besov_norm(const VectorField& f, const BesovParams& bp, const LpPartition& part) {
  return besov_general(f, bp, part, part.j_min, part.j_max);
}
double besov_norm_low(const SpectralField& f, const BesovParams& bp, const LpPartition& part) {
  return besov_general(f, bp, part, part.j_min, std::min(part.j0, part.j_max));
}
double besov_norm_low(const VectorField& f, const BesovParams& bp, const LpPartition& part) {
  return besov_general(f, bp, part, part.j_min, std::min(part.j0, part.j_max));
}
double besov_norm_high(const SpectralField& f, const BesovParams& bp, const LpPartition& part) {
  return besov_general(f, bp, part, std::max(part.j_min, part.j0 - 1), part.j_max);
}
double besov_norm_high(const VectorField& f, const BesovParams& bp, const LpPartition& part) {
  return besov_general(f, bp, part, std::max(part.j_min, part.j0 - 1), part.j_max);
}

double chemin_lerner_norm(const std::vector<SpectralField>& series, const std::vector<double>& weights,
                          double rho, const BesovParams& bp, const LpPartition& part) {
  if (series.empty()) throw std::invalid_argument("chemin_lerner_norm: empty series");
  if (weights.size() != series.size())
    throw std::invalid_argument("chemin_lerner_norm: weight count mismatch");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("chemin_lerner_norm: weights must be positive");
  if (rho < 1.0) throw std::invalid_argument("chemin_lerner_norm: rho must be >= 1");

  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(part.j_max - part.j_min + 1));
  for (int j = part.j_min; j <= part.j_max; ++j) {
    double tj;
    if (std::isinf(rho)) {
      tj = 0.0;
      for (const auto& snap : series) tj = std::max(tj, block_lp_norm(snap, j, bp.p, part));
    } else {
      double s = 0.0;
      for (std::size_t i = 0; i < series.size(); ++i)
        s += weights[i] * std::pow(block_lp_norm(series[i], j, bp.p, part), rho);
      tj = std::pow(s, 1.0 / rho);
    }
    terms.push_back(std::pow(2.0, j * bp.s) * tj);
  }
  return ell_r(terms, bp.r);
}

double bernstein_ratio(const SpectralField& f, int j, int k, double p, double b) {
  const double base = lp_norm(f, p);
  if (!(base > 0.0)) throw std::invalid_argument("bernstein_ratio: zero field");
  double dnorm;
  if (k == 0) {
    dnorm = lp_norm(f, b);
  } else if (k == 1) {
    dnorm = lp_norm(grad(f), b);
  } else {
    dnorm = lp_norm(lambda_s(f, static_cast<double>(k)), b);
  }
  const int d = f.grid().dim();
  const double expo = k + d * (1.0 / p - 1.0 / b);
  return dnorm / (std::pow(2.0, j * expo) * base);
}

double uncovered_mass_fraction(const SpectralField& f, const LpPartition& part) {
  const Grid& g = f.grid();
  const double total = sum_indexed(g.size(), [&](std::size_t i) { return std::norm(f.coeffs()[i]); });
  if (total == 0.0) return 0.0;
  const double covered = sum_indexed(g.size(), [&](std::size_t i) {
    if (i == 0) return 0.0;
    const double w = std::min(1.0, part.partition_sum(std::sqrt(g.xi2(i))));
    return w * std::norm(f.coeffs()[i]);
  });
  return 1.0 - covered / total;
}

}  // namespace nslab
