#pragma once

#include <map>
#include <vector>

#include "nslab/field.hpp"

namespace nslab {

/// Dyadic partition of unity. chi is a smooth radial non-increasing cutoff
/// with chi = 1 on [0, 3/4] and chi = 0 on [4/3, inf); phi(rho) =
/// chi(rho/2) - chi(rho) is supported in [3/4, 8/3]. The telescoping sum
/// sum_j phi(2^{-j} rho) equals 1 exactly on the covered range.
struct LpPartition {
  int j_min = 0;
  int j_max = 0;
  int j0 = 0;  ///< low/high threshold: low sums j <= j0, high sums j >= j0-1

  static double chi(double rho);
  static double phi(double rho);

  /// sum over covered blocks of phi(2^{-j} rho)
  double partition_sum(double rho) const;
  /// [4/3 * 2^{j_min}, 3/4 * 2^{j_max}]: range on which the partition sums
  /// to 1 (conservative bounds).
  std::pair<double, double> covered_range() const;
};

/// Build a partition; rejects j_min <= j0 <= j_max violations.
LpPartition build_partition(int j_min, int j_max, int j0);

/// Besov indices: regularity s, Lebesgue exponent p, summation exponent r
/// (use std::numeric_limits<double>::infinity() for sup norms).
struct BesovParams {
  double s = 0.0;
  double p = 2.0;
  double r = 1.0;
};

/// Critical low-frequency endpoint 2d/p - d/2.
double s0_endpoint(double p, int d);

/// Frequency-localized piece phi(2^{-j}|xi|) f.
SpectralField dyadic_block(const SpectralField& f, int j, const LpPartition& part);
/// Low-frequency cut chi(2^{-j}|xi|) f (no block-range restriction).
SpectralField low_cut(const SpectralField& f, int j);

/// All covered blocks of f.
std::map<int, SpectralField> decompose(const SpectralField& f, const LpPartition& part);

/// ||Delta_j f||_{L^p}; p = 2 is evaluated spectrally, other p by grid
/// quadrature of the synthesized block.
double block_lp_norm(const SpectralField& f, int j, double p, const LpPartition& part);
double block_lp_norm(const VectorField& f, int j, double p, const LpPartition& part);

/// Homogeneous Besov norm: l^r over covered j of 2^{js} ||Delta_j f||_{L^p}.
/// The zero mode never contributes. Truncation to [j_min, j_max] is part of
/// the contract, not an error.
double besov_norm(const SpectralField& f, const BesovParams& bp, const LpPartition& part);
double besov_norm(const VectorField& f, const BesovParams& bp, const LpPartition& part);

/// Restriction to blocks j <= j0 / j >= j0-1 (deliberate one-block overlap).
double besov_norm_low(const SpectralField& f, const BesovParams& bp, const LpPartition& part);
double besov_norm_low(const VectorField& f, const BesovParams& bp, const LpPartition& part);
double besov_norm_high(const SpectralField& f, const BesovParams& bp, const LpPartition& part);
double besov_norm_high(const VectorField& f, const BesovParams& bp, const LpPartition& part);

/// Time-L^rho taken per block before the l^r aggregation: l^r_j of
/// 2^{js} (sum_i w_i ||Delta_j f_i||_{L^p}^rho)^{1/rho}; rho = inf is the
/// max over snapshots. Rejects an empty series or nonpositive weights.
double chemin_lerner_norm(const std::vector<SpectralField>& series, const std::vector<double>& weights,
                          double rho, const BesovParams& bp, const LpPartition& part);

/// ||D^k f||_{L^b} / (2^{j(k + d(1/p - 1/b))} ||f||_{L^p}) for a field
/// supported in block j. k = 1 uses the gradient magnitude; k >= 2 uses
/// |xi|^k. Rejects the zero field.
double bernstein_ratio(const SpectralField& f, int j, int k, double p, double b);

/// Fraction of squared L^2 mass (mean mode included) that the covered
/// blocks cannot see.
double uncovered_mass_fraction(const SpectralField& f, const LpPartition& part);

}  // namespace nslab
